#!/usr/bin/env python3
"""Reference range coder for the lwfc index payload.

Checks the frozen vectors in crates/core/tests/golden: every `<name>.idx`
(level count byte, then indices) is encoded here and compared with
`<name>.bin`, then the frozen bytes are decoded back.

    python3 tools/range_coder_ref.py [golden_dir]
"""

import pathlib
import sys

PROB_BITS = 11
PROB_ONE = 1 << PROB_BITS
SHIFT = 5
TOP = 1 << 24
MASK32 = 0xFFFFFFFF


class Encoder:
    def __init__(self):
        self.low = 0
        self.range = MASK32
        self.cache = 0
        self.cache_size = 1
        self.out = bytearray()

    def _shift_low(self):
        if self.low < 0xFF000000 or self.low >= 1 << 32:
            carry = self.low >> 32
            byte = self.cache
            while True:
                self.out.append((byte + carry) & 0xFF)
                byte = 0xFF
                self.cache_size -= 1
                if self.cache_size == 0:
                    break
            self.cache = (self.low >> 24) & 0xFF
        self.cache_size += 1
        self.low = (self.low & 0x00FFFFFF) << 8

    def bit(self, probs, k, b):
        p = probs[k]
        bound = (self.range >> PROB_BITS) * p
        if b:
            self.low += bound
            self.range -= bound
            probs[k] = p - (p >> SHIFT)
        else:
            self.range = bound
            probs[k] = p + ((PROB_ONE - p) >> SHIFT)
        while self.range < TOP:
            self.range = (self.range << 8) & MASK32
            self._shift_low()

    def finish(self):
        for _ in range(5):
            self._shift_low()
        return bytes(self.out)


class Decoder:
    def __init__(self, data):
        if len(data) < 5 or data[0] != 0:
            raise ValueError("bad stream start")
        self.data = data
        self.pos = 5
        self.range = MASK32
        self.code = int.from_bytes(data[1:5], "big")

    def bit(self, probs, k):
        p = probs[k]
        bound = (self.range >> PROB_BITS) * p
        if self.code < bound:
            self.range = bound
            probs[k] = p + ((PROB_ONE - p) >> SHIFT)
            b = 0
        else:
            self.code -= bound
            self.range -= bound
            probs[k] = p - (p >> SHIFT)
            b = 1
        while self.range < TOP:
            self.range = (self.range << 8) & MASK32
            self.code = ((self.code << 8) | self.data[self.pos]) & MASK32
            self.pos += 1
        return b


def encode(indices, n):
    probs = [PROB_ONE // 2] * (n - 1)
    enc = Encoder()
    for i in indices:
        for k in range(i):
            enc.bit(probs, k, 1)
        if i < n - 1:
            enc.bit(probs, i, 0)
    return enc.finish()


def decode(data, count, n):
    probs = [PROB_ONE // 2] * (n - 1)
    dec = Decoder(data)
    out = []
    for _ in range(count):
        i = 0
        while i < n - 1 and dec.bit(probs, i):
            i += 1
        out.append(i)
    if dec.pos != len(data):
        raise ValueError("trailing bytes")
    return out


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    golden = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else root / "crates/core/tests/golden"
    failures = 0
    cases = sorted(golden.glob("*.idx"))
    for idx_path in cases:
        raw = idx_path.read_bytes()
        n, indices = raw[0], list(raw[1:])
        frozen = idx_path.with_suffix(".bin").read_bytes()
        ok = encode(indices, n) == frozen and decode(frozen, len(indices), n) == indices
        failures += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {idx_path.stem} ({len(indices)} indices, {len(frozen)} bytes)")
    if not cases:
        print("no golden vectors found")
        return 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
