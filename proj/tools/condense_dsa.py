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

"""Condenses the UCI "Daily and Sports Activities" archive to the CSV layout
read by the harness (nine numeric columns, then a class column).

The archive holds data/aNN/pM/sKK.txt: one file per 5 s segment, 125 rows of
45 comma-separated sensor channels. Each segment becomes one row holding the
mean of the first nine channels (torso accelerometer, gyroscope and
magnetometer, x/y/z) and the activity id.

Usage:
  condense_dsa.py <archive.zip | extracted data dir> <out.csv>
"""
import csv
import io
import pathlib
import re
import sys
import zipfile

SEGMENT = re.compile(r"(?:^|/)(a\d\d)/(p\d)/(s\d\d)\.txt$")
CHANNELS = 9


def segment_means(text):
    sums = [0.0] * CHANNELS
    rows = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        values = line.split(",")
        if len(values) < CHANNELS:
            raise ValueError("short sensor row: %r" % line)
        for j in range(CHANNELS):
            sums[j] += float(values[j])
        rows += 1
    if rows == 0:
        raise ValueError("empty segment")
    return [s / rows for s in sums]


def segments(source):
    path = pathlib.Path(source)
    if path.is_dir():
        for f in sorted(path.rglob("*.txt")):
            m = SEGMENT.search(f.as_posix())
            if m:
                yield m.groups(), f.read_text()
        return
    with zipfile.ZipFile(path) as outer:
        for name in sorted(outer.namelist()):
            if name.endswith(".zip"):
                # The UCI download wraps the data in a second archive.
                with zipfile.ZipFile(io.BytesIO(outer.read(name))) as inner:
                    for n in sorted(inner.namelist()):
                        m = SEGMENT.search(n)
                        if m:
                            yield m.groups(), inner.read(n).decode()
                continue
            m = SEGMENT.search(name)
            if m:
                yield m.groups(), outer.read(name).decode()


def main(argv):
    if len(argv) != 3:
        sys.stderr.write(__doc__)
        return 2
    count = 0
    with open(argv[2], "w", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["T_xacc", "T_yacc", "T_zacc", "T_xgyro", "T_ygyro", "T_zgyro",
                         "T_xmag", "T_ymag", "T_zmag", "activity"])
        for (activity, _, _), text in segments(argv[1]):
            writer.writerow(["%.9g" % v for v in segment_means(text)] + [activity])
            count += 1
    if count == 0:
        sys.stderr.write("no aNN/pM/sKK.txt segments found in %s\n" % argv[1])
        return 1
    sys.stderr.write("wrote %d segments to %s\n" % (count, argv[2]))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
