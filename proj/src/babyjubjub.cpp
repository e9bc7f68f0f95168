// Copyright 2026 The vfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vfl/babyjubjub.hpp"

#include "vfl/error.hpp"

namespace vfl::babyjubjub {

namespace {

const Fr& curve_a() {
  static const Fr a = Fr::from_u64(kA);
  return a;
}

const Fr& curve_d() {
  static const Fr d = Fr::from_u64(kD);
  return d;
}

}  // namespace

bool on_curve(const CurvePoint& p) {
  const Fr x2 = p.x.square();
  const Fr y2 = p.y.square();
  return curve_a() * x2 + y2 == Fr::one() + curve_d() * x2 * y2;
}

const CurvePoint& base_point() {
  static const CurvePoint b{
      Fr::from_string(
          "5299619240641551281634865583518297030282874472190772894086521144482721001553"),
      Fr::from_string(
          "16950150798460657717958625567821834550301663161624707787222815936182638968203")};
  return b;
}

CurvePoint negate(const CurvePoint& p) { return CurvePoint{-p.x, p.y}; }

namespace detail {

CurvePoint add_unchecked(const CurvePoint& p, const CurvePoint& q) {
  const Fr x1y2 = p.x * q.y;
  const Fr y1x2 = p.y * q.x;
  const Fr t = curve_d() * x1y2 * y1x2;
  const Fr x3 = (x1y2 + y1x2) * (Fr::one() + t).inverse();
  const Fr y3 = (p.y * q.y - curve_a() * p.x * q.x) * (Fr::one() - t).inverse();
  return CurvePoint{x3, y3};
}

}  // namespace detail

CurvePoint add(const CurvePoint& p, const CurvePoint& q) {
  if (!on_curve(p) || !on_curve(q)) throw Error(ErrorCode::kOffCurveInput, "curve_add operand");
  return detail::add_unchecked(p, q);
}

CurvePoint scalar_mul(const U256& k, const CurvePoint& p) {
  if (!on_curve(p)) throw Error(ErrorCode::kOffCurveInput, "scalar_mul base");
  CurvePoint acc = CurvePoint::identity();
  for (int i = static_cast<int>(k.bit_length()) - 1; i >= 0; --i) {
    acc = detail::add_unchecked(acc, acc);
    if (k.bit(static_cast<unsigned>(i))) acc = detail::add_unchecked(acc, p);
  }
  return acc;
}

CurvePoint mul_by_cofactor(const CurvePoint& p) {
  CurvePoint r = detail::add_unchecked(p, p);
  r = detail::add_unchecked(r, r);
  return detail::add_unchecked(r, r);
}

}  // namespace vfl::babyjubjub
