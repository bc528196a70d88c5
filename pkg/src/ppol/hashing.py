"""Hash-to-curve and Fiat-Shamir challenges."""

import hashlib
from functools import lru_cache

from py_ecc.bls.hash_to_curve import hash_to_G2
from py_ecc.bls.point_compression import compress_G2

from . import curve

EPOCH_TAG = b"PPOL-V01-CS01-with-BLS12381G2_XMD:SHA-256_SSWU_RO_EPOCH_"


@lru_cache(maxsize=256)
def _hash_to_g2_bytes(tag, message):
    z1, z2 = compress_G2(hash_to_G2(message, tag, hashlib.sha256))
    return z1.to_bytes(48, "big") + z2.to_bytes(48, "big")


def hash_to_g2(tag, message):
    """RFC 9380 hash_to_curve (SSWU, random oracle variant) into G2."""
    return curve.decode_g2(_hash_to_g2_bytes(bytes(tag), bytes(message)))


def epoch_bytes(epoch):
    return int(epoch).to_bytes(8, "big")


@lru_cache(maxsize=64)
def hash_epoch(epoch):
    """H(E): the per-epoch signing base."""
    return hash_to_g2(EPOCH_TAG, epoch_bytes(epoch))


def hash_to_scalars(tag, parts, count=1):
    """Derive `count` field elements from tagged, length-prefixed byte parts.

    Uses a 512-bit digest per output so the reduction mod R is unbiased.
    """
    h = hashlib.sha512()
    h.update(len(tag).to_bytes(2, "big") + tag)
    for p in parts:
        h.update(len(p).to_bytes(4, "big") + p)
    seed = h.digest()
    out = []
    for k in range(count):
        d = hashlib.sha512(seed + k.to_bytes(4, "big")).digest()
        out.append(int.from_bytes(d, "big") % curve.R)
    return out
