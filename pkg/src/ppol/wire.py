"""Binary encodings for updates and epoch bundles.

Points are compressed (48 bytes in G1, 96 in G2), scalars are 32-byte
little-endian canonical, integers are big-endian.
"""

import struct

from . import curve
from .amt import OpeningProof
from .apk import ApkProof
from .append import AppendProof
from .liabilities import RangeProof, SumProof
from .pvc import DbProof, EpochBundle, SignedUpdate


class Writer:
    def __init__(self):
        self.parts = []

    def u8(self, v):
        self.parts.append(struct.pack(">B", v))

    def u32(self, v):
        self.parts.append(struct.pack(">I", v))

    def u64(self, v):
        self.parts.append(struct.pack(">Q", v))

    def point(self, p):
        self.parts.append(curve.encode(p))

    def points(self, ps):
        for p in ps:
            self.point(p)

    def scalar(self, s):
        self.parts.append(curve.encode_scalar(s))

    def getvalue(self):
        return b"".join(self.parts)


class Reader:
    def __init__(self, data, check=True):
        self.data = memoryview(data)
        self.pos = 0
        self.check = check

    def take(self, k):
        if self.pos + k > len(self.data):
            raise ValueError("truncated encoding")
        out = bytes(self.data[self.pos:self.pos + k])
        self.pos += k
        return out

    def u8(self):
        return self.take(1)[0]

    def u32(self):
        return struct.unpack(">I", self.take(4))[0]

    def u64(self):
        return struct.unpack(">Q", self.take(8))[0]

    def g1(self):
        return curve.decode_g1(self.take(curve.G1_BYTES), self.check)

    def g2(self):
        return curve.decode_g2(self.take(curve.G2_BYTES), self.check)

    def g1s(self, k):
        return [self.g1() for _ in range(k)]

    def scalar(self):
        return curve.decode_scalar(self.take(32))

    def done(self):
        if self.pos != len(self.data):
            raise ValueError("trailing bytes in encoding")


def encode_update(upd):
    w = Writer()
    w.u32(upd.index)
    w.u64(upd.epoch)
    w.scalar(upd.delta)
    w.scalar(upd.epsilon)
    w.point(upd.sig)
    return w.getvalue()


def decode_update(data, check=True):
    r = Reader(data, check)
    upd = SignedUpdate(r.u32(), r.u64(), r.scalar(), r.scalar(), r.g2())
    r.done()
    return upd


def _opt_path(w, proof):
    w.u8(proof is not None)
    if proof is not None:
        w.u32(proof.index)
        w.points(proof.components)


def _read_opt_path(r, log_n):
    if not r.u8():
        return None
    idx = r.u32()
    return OpeningProof(idx, tuple(r.g1s(log_n)))


def encode_bundle(b, log_n):
    w = Writer()
    w.u8(log_n)
    w.u64(b.epoch)
    w.point(b.db_com)
    w.point(b.key_com)
    d = b.db_proof
    w.points([d.sigma_epoch, d.sig_epoch, d.apk])
    w.points(d.apk_proof.points())
    w.u8(d.apk_proof.masked)
    w.point(d.zerocheck)
    k = b.key_proof
    w.point(k.key_com_epoch)
    w.u32(k.split_k)
    _opt_path(w, k.path_old)
    _opt_path(w, k.path_new)
    for table in (b.inclusion, b.key_inclusion):
        w.u32(len(table))
        for i in sorted(table):
            w.u32(i)
            w.points(table[i].components)
    rp = b.range_proof
    w.u8(rp is not None)
    if rp is not None:
        w.u32(len(rp.C))
        w.points(rp.C)
        w.points(rp.C_hat)
        w.points([rp.rho_star, rp.M_star, rp.W])
    sp = b.sum_proof
    w.u8(sp is not None)
    if sp is not None:
        w.points([sp.T, sp.S])
    return w.getvalue()


def decode_bundle(data, check=True):
    r = Reader(data, check)
    log_n = r.u8()
    epoch = r.u64()
    db_com, key_com = r.g2(), r.g1()
    sigma_epoch, sig_epoch, apk = r.g1(), r.g2(), r.g1()
    B, B_hat, U, T, Rc, R_deg = r.g1(), r.g2(), r.g1(), r.g1(), r.g1(), r.g1()
    apk_proof = ApkProof(B, B_hat, U, T, Rc, R_deg, bool(r.u8()))
    db_proof = DbProof(sigma_epoch, sig_epoch, apk, apk_proof, r.g1())
    key_com_epoch = r.g1()
    split_k = r.u32()
    key_proof = AppendProof(key_com_epoch, split_k, _read_opt_path(r, log_n),
                            _read_opt_path(r, log_n))
    tables = []
    for _ in range(2):
        t = {}
        for _ in range(r.u32()):
            i = r.u32()
            t[i] = OpeningProof(i, tuple(r.g1s(log_n)))
        tables.append(t)
    rp = sp = None
    if r.u8():
        m = r.u32()
        C = r.g1s(m)
        C_hat = [r.g2() for _ in range(m)]
        rp = RangeProof(C, C_hat, r.g2(), r.g1(), r.g1())
    if r.u8():
        sp = SumProof(r.g2(), r.g1())
    r.done()
    return EpochBundle(epoch, db_com, key_com, db_proof, key_proof, tables[0], tables[1], rp, sp)
