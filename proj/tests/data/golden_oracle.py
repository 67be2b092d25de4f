#!/usr/bin/env python3
# Copyright 2026 The qstream Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Stand-alone chunk encoder written from docs/wire-format.md.

Regenerates the golden hex files next to this script. Shares no code with
the C++ encoder; the test compares the two byte for byte.
"""

import binascii
import pathlib
import struct

CHUNKS = {
    "t_gadget": dict(
        n=1, k=1, V=3,
        edges=[(0, 1), (1, 2)],
        locals=[3, 0, 17],
        inputs=[0], outputs=[2],
        tape=[(1, 1)],
    ),
    "empty_graph": dict(
        n=1, k=0, V=1,
        edges=[],
        locals=[0],
        inputs=[0], outputs=[0],
        tape=[],
    ),
    "two_qubit": dict(
        n=2, k=2, V=5,
        edges=[(0, 2), (1, 3), (2, 4), (3, 4), (0, 4)],
        locals=[0, 5, 23, 1, 12],
        inputs=[0, 1], outputs=[4, 3],
        tape=[(2, 9), (0, 0x01020304)],
    ),
}


def encode(c):
    V = c["V"]
    out = bytearray(b"QGS1")
    out += struct.pack("<BBIIII", 1, 0, c["n"], c["k"], V, len(c["tape"]))
    pairs = V * (V - 1) // 2
    tri = bytearray((pairs + 7) // 8)
    edges = {tuple(sorted(e)) for e in c["edges"]}
    p = 0
    for i in range(V):
        for j in range(i + 1, V):
            if (i, j) in edges:
                tri[p // 8] |= 1 << (p % 8)
            p += 1
    out += tri
    out += bytes(c["locals"])
    for v in c["inputs"] + c["outputs"]:
        out += struct.pack("<I", v)
    for v, key in c["tape"]:
        out += struct.pack("<II", v, key)
    out += struct.pack("<I", binascii.crc32(bytes(out)) & 0xFFFFFFFF)
    return bytes(out)


def main():
    here = pathlib.Path(__file__).parent
    for name, c in CHUNKS.items():
        data = encode(c)
        (here / f"{name}.hex").write_text(data.hex() + "\n")
        print(name, len(data))


if __name__ == "__main__":
    main()
