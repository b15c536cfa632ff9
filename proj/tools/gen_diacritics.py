#!/usr/bin/env python3
# Copyright 2026 The CW2V Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes data/latin_diacritics.txt: precomposed Latin letters -> ASCII base.

Output uses the confusables.txt field layout so the same loader reads it.
Code points that already have an entry in confusables.txt are skipped.
"""
import sys
import unicodedata

LICENSE_HEADER = """\
# Copyright 2026 The CW2V Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""

RANGES = [(0x00C0, 0x024F), (0x1E00, 0x1EFF)]
EXTRA = {0x00D8: "O", 0x00F8: "o", 0x0110: "D", 0x0111: "d", 0x0141: "L",
         0x0142: "l", 0x0126: "H", 0x0127: "h", 0x0166: "T", 0x0167: "t"}


def existing_sources(path):
    out = set()
    with open(path, encoding="utf-8-sig") as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            src = line.split(";")[0].split()
            if len(src) == 1:
                out.add(int(src[0], 16))
    return out


def main(confusables, out_path):
    skip = existing_sources(confusables)
    rows = []
    for lo, hi in RANGES:
        for cp in range(lo, hi + 1):
            if cp in skip:
                continue
            ch = chr(cp)
            base = EXTRA.get(cp)
            if base is None:
                nfd = unicodedata.normalize("NFD", ch)
                if len(nfd) < 2 or not (nfd[0].isascii() and nfd[0].isalpha()):
                    continue
                if not all(unicodedata.combining(c) for c in nfd[1:]):
                    continue
                base = nfd[0]
            rows.append((cp, base, unicodedata.name(ch, "?")))
    with open(out_path, "w", encoding="utf-8") as f:
        f.write(LICENSE_HEADER + "\n")
        f.write("# Latin letters with diacritics mapped to their ASCII base letter.\n")
        f.write("# Generated by tools/gen_diacritics.py (Unicode %s).\n" % unicodedata.unidata_version)
        f.write("# Format: source ; target ; type  # comment\n#\n")
        for cp, base, name in rows:
            tgt = " ".join("%04X" % ord(c) for c in base)
            f.write("%04X ;\t%s ;\tMA\t# ( %s → %s ) %s\n" % (cp, tgt, chr(cp), base, name))
    print("wrote %d entries" % len(rows))


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
