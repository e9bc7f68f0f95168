#!/usr/bin/env python3
# Copyright 2026 The vfl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates Poseidon round constants and the Cauchy MDS matrix with the
Grain LFSR procedure of the Poseidon reference scripts, for the BN254 scalar
field, t=3, alpha=5, R_F=8, R_P=57.

Usage:
  gen_poseidon_params.py header > include/vfl/detail/poseidon_constants.inc
  gen_poseidon_params.py hash a b   # reference hash, prints decimal digest
"""
import sys

P = 21888242871839275222246405745257275088548364400416034343698204186575808495617
N_BITS = 254
T = 3
R_F = 8
R_P = 57
ALPHA = 5


class Grain:
    def __init__(self, field=1, sbox=0, n=N_BITS, t=T, r_f=R_F, r_p=R_P):
        bits = []
        for value, width in ((field, 2), (sbox, 4), (n, 12), (t, 12), (r_f, 10), (r_p, 10)):
            bits += [int(b) for b in bin(value)[2:].zfill(width)]
        bits += [1] * 30
        self.state = bits
        for _ in range(160):
            self._step()

    def _step(self):
        s = self.state
        bit = s[62] ^ s[51] ^ s[38] ^ s[23] ^ s[13] ^ s[0]
        s.pop(0)
        s.append(bit)
        return bit

    def next_bit(self):
        while True:
            first = self._step()
            second = self._step()
            if first == 1:
                return second

    def bits(self, count):
        value = 0
        for _ in range(count):
            value = (value << 1) | self.next_bit()
        return value


def generate():
    grain = Grain()
    constants = []
    for _ in range((R_F + R_P) * T):
        while True:
            v = grain.bits(N_BITS)
            if v < P:
                break
        constants.append(v)
    while True:
        rand = [grain.bits(N_BITS) % P for _ in range(2 * T)]
        while len(set(rand)) != len(rand):
            rand = [grain.bits(N_BITS) % P for _ in range(2 * T)]
        xs, ys = rand[:T], rand[T:]
        if any((x + y) % P == 0 for x in xs for y in ys):
            continue
        mds = [[pow((x + y) % P, P - 2, P) for y in ys] for x in xs]
        return constants, mds


def permute(state, constants, mds):
    state = list(state)
    half = R_F // 2
    for r in range(R_F + R_P):
        state = [(s + constants[r * T + i]) % P for i, s in enumerate(state)]
        if r < half or r >= half + R_P:
            state = [pow(s, ALPHA, P) for s in state]
        else:
            state[0] = pow(state[0], ALPHA, P)
        state = [sum(mds[i][j] * state[j] for j in range(T)) % P for i in range(T)]
    return state


def hash2(a, b, params=None):
    constants, mds = params or generate()
    return permute([0, a % P, b % P], constants, mds)[0]


LICENSE_HEADER = [
    '// Copyright 2026 The vfl Authors',
    '//',
    '// Licensed under the Apache License, Version 2.0 (the "License");',
    '// you may not use this file except in compliance with the License.',
    '// You may obtain a copy of the License at',
    '//',
    '//     http://www.apache.org/licenses/LICENSE-2.0',
    '//',
    '// Unless required by applicable law or agreed to in writing, software',
    '// distributed under the License is distributed on an "AS IS" BASIS,',
    '// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.',
    '// See the License for the specific language governing permissions and',
    '// limitations under the License.',
]


def emit_header(constants, mds):
    out = LICENSE_HEADER + ["", "// Generated by tools/gen_poseidon_params.py. Do not edit.",
           "// BN254 scalar field, t=3, alpha=5, R_F=8, R_P=57.", "",
           "inline constexpr const char* kPoseidonRoundConstants[] = {"]
    out += ['    "0x%064x",' % c for c in constants]
    out += ["};", "", "inline constexpr const char* kPoseidonMds[3][3] = {"]
    for row in mds:
        out.append("    {" + ", ".join('"0x%064x"' % v for v in row) + "},")
    out.append("};")
    return "\n".join(out) + "\n"


if __name__ == "__main__":
    if len(sys.argv) >= 2 and sys.argv[1] == "hash":
        print(hash2(int(sys.argv[2], 0), int(sys.argv[3], 0)))
    else:
        c, m = generate()
        sys.stdout.write(emit_header(c, m))
