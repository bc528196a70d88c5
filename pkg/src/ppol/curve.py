"""Pairing group backend over BLS12-381.

All protocol code talks to the curve through the module-level functions
below, which forward to the active backend.  Scalars are plain Python ints
modulo R; they are converted to backend scalars only at the call boundary.
"""

import os

R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001

G1_BYTES = 48
G2_BYTES = 96
_P = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB

# number of (G1, G2) pairs fed to Miller loops since the last reset
counters = {"pairings": 0}


class ArkBackend:
    name = "ark"

    def __init__(self):
        import py_arkworks_bls12381 as ark

        self._ark = ark
        self._scalar = ark.Scalar.from_le_bytes
        self.g1 = ark.G1Point()
        self.g2 = ark.G2Point()
        self.zero_g1 = ark.G1Point.identity()
        self.zero_g2 = ark.G2Point.identity()
        self.gt_one = ark.GT.one()

    def mul(self, p, k):
        return p * self._scalar((k % R).to_bytes(32, "little"))

    def msm(self, group, points, scalars):
        if len(points) != len(scalars):
            raise ValueError("msm length mismatch")
        if not points:
            return self.zero_g1 if group == "g1" else self.zero_g2
        conv = self._scalar
        ks = [conv((k % R).to_bytes(32, "little")) for k in scalars]
        cls = self._ark.G1Point if group == "g1" else self._ark.G2Point
        return cls.multiexp_unchecked(list(points), ks)

    def pairing(self, a, b):
        return self._ark.GT.pairing(a, b)

    def multi_pairing(self, g1s, g2s):
        return self._ark.GT.multi_pairing(list(g1s), list(g2s))

    def encode(self, p):
        return bytes(p.to_compressed_bytes())

    def decode_g1(self, data, check=True):
        return self._decode(self._ark.G1Point, data, G1_BYTES, check)

    def decode_g2(self, data, check=True):
        return self._decode(self._ark.G2Point, data, G2_BYTES, check)

    def _decode(self, cls, data, size, check):
        if len(data) != size:
            raise ValueError("bad point encoding length")
        try:
            if check:
                return cls.from_compressed_bytes(bytes(data))
            return cls.from_compressed_bytes_unchecked(bytes(data))
        except Exception as exc:
            raise ValueError(f"invalid point encoding: {exc}") from None


_INFINITY = 0xC0


class MclBackend:
    """herumi mcl via pymcl.  No native MSM, so msm is a plain loop."""

    name = "mcl"

    def __init__(self):
        import pymcl

        self._m = pymcl
        self.g1 = pymcl.g1
        self.g2 = pymcl.g2
        self.zero_g1 = pymcl.g1 * pymcl.Fr("0")
        self.zero_g2 = pymcl.g2 * pymcl.Fr("0")
        self.gt_one = pymcl.GT()
        self._r_minus_1 = pymcl.Fr(str(R - 1))

    def mul(self, p, k):
        return p * self._m.Fr(str(k % R))

    def msm(self, group, points, scalars):
        if len(points) != len(scalars):
            raise ValueError("msm length mismatch")
        acc = self.zero_g1 if group == "g1" else self.zero_g2
        Fr = self._m.Fr
        for p, k in zip(points, scalars):
            k %= R
            if k:
                acc = acc + p * Fr(str(k))
        return acc

    def pairing(self, a, b):
        return self._m.pairing(a, b)

    def multi_pairing(self, g1s, g2s):
        acc = self.gt_one
        for a, b in zip(g1s, g2s):
            acc = acc * self._m.pairing(a, b)
        return acc

    # compressed encodings go through the affine decimal string form, since
    # mcl's own serialization uses a different sign convention
    def encode(self, p):
        is_g1 = isinstance(p, self._m.G1)
        size = G1_BYTES if is_g1 else G2_BYTES
        if p.is_zero():
            return bytes([_INFINITY]) + bytes(size - 1)
        coords = [int(t) for t in str(p).split()[1:]]
        half = (_P - 1) // 2
        if is_g1:
            x, y = coords
            xs = [x]
            big = y > half
        else:
            x0, x1, y0, y1 = coords
            xs = [x1, x0]
            big = y1 > half if y1 else y0 > half
        raw = bytearray(b"".join(v.to_bytes(48, "big") for v in xs))
        raw[0] |= 0x80 | (0x20 if big else 0)
        return bytes(raw)

    def decode_g1(self, data, check=True):
        return self._decode(data, G1_BYTES, check)

    def decode_g2(self, data, check=True):
        return self._decode(data, G2_BYTES, check)

    def _decode(self, data, size, check):
        from py_ecc.bls.point_compression import decompress_G1, decompress_G2
        from py_ecc.optimized_bls12_381 import normalize, is_inf

        data = bytes(data)
        if len(data) != size:
            raise ValueError("bad point encoding length")
        try:
            if size == G1_BYTES:
                pt = decompress_G1(int.from_bytes(data, "big"))
            else:
                pt = decompress_G2((int.from_bytes(data[:48], "big"), int.from_bytes(data[48:], "big")))
        except Exception as exc:
            raise ValueError(f"invalid point encoding: {exc}") from None
        if size == G1_BYTES:
            if is_inf(pt):
                return self.zero_g1
            x, y = normalize(pt)
            p = self._m.G1(f"1 {int(x)} {int(y)}", 10)
        else:
            if is_inf(pt):
                return self.zero_g2
            x, y = normalize(pt)
            p = self._m.G2(f"1 {x.coeffs[0]} {x.coeffs[1]} {y.coeffs[0]} {y.coeffs[1]}", 10)
        if check and not (p * self._r_minus_1 + p).is_zero():
            raise ValueError("invalid point encoding: not in subgroup")
        return p


_BACKENDS = {"ark": ArkBackend, "mcl": MclBackend}
_cache = {}
_active = None


def use_backend(name):
    """Select the active backend by name ("ark" or "mcl")."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name not in _cache:
        _cache[name] = _BACKENDS[name]()
    _active = _cache[name]
    return _active


def backend():
    return _active


use_backend(os.environ.get("PPOL_BACKEND", "ark"))


def g1():
    return _active.g1


def g2():
    return _active.g2


def zero_g1():
    return _active.zero_g1


def zero_g2():
    return _active.zero_g2


def mul(p, k):
    return _active.mul(p, k)


class FixedBase:
    """Windowed table for repeated multiplication of one base point.

    32 windows of 8 bits; a product then costs at most 32 additions.
    """

    WINDOW = 8

    def __init__(self, point, zero):
        self.point = point
        self.zero = zero
        w = self.WINDOW
        rows = []
        base = point
        for _ in range((R.bit_length() + w - 1) // w):
            row = [zero, base]
            for _ in range((1 << w) - 2):
                row.append(row[-1] + base)
            rows.append(row)
            base = row[-1] + base
        self.rows = rows

    def mul(self, k):
        k %= R
        acc = self.zero
        mask = (1 << self.WINDOW) - 1
        for row in self.rows:
            d = k & mask
            if d:
                acc = acc + row[d]
            k >>= self.WINDOW
            if not k:
                break
        return acc


def msm(group, points, scalars):
    return _active.msm(group, points, scalars)


def pairing(a, b):
    counters["pairings"] += 1
    return _active.pairing(a, b)


def multi_pairing(g1s, g2s):
    g1s, g2s = list(g1s), list(g2s)
    if len(g1s) != len(g2s):
        raise ValueError("multi_pairing length mismatch")
    counters["pairings"] += len(g1s)
    return _active.multi_pairing(g1s, g2s)


def gt_one():
    return _active.gt_one


def pairing_check(pairs):
    """True iff the product of e(a, b) over pairs is the identity in G_T."""
    pairs = list(pairs)
    if not pairs:
        return True
    return multi_pairing([a for a, _ in pairs], [b for _, b in pairs]) == _active.gt_one


def encode(p):
    return _active.encode(p)


def decode_g1(data, check=True):
    return _active.decode_g1(data, check)


def decode_g2(data, check=True):
    return _active.decode_g2(data, check)


def encode_scalar(k):
    return (k % R).to_bytes(32, "little")


def decode_scalar(data):
    if len(data) != 32:
        raise ValueError("bad scalar length")
    k = int.from_bytes(data, "little")
    if k >= R:
        raise ValueError("non-canonical scalar")
    return k
