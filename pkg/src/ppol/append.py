"""Append-only proofs for the key commitment.

The key table fills FFT positions 0, 1, 2, ... in order; position p holds
index perm(p).  An epoch that appends keys at positions [p, p + |J|) proves
that the old key polynomial is zero on positions [p, n) and that the epoch
delta is zero on positions [0, p).  Both facts come out of a single AMT path
each, read at the split index k = perm(p) and at c = perm(p - 1).
"""

from dataclasses import dataclass

from . import curve
from .amt import OpeningProof
from .domain import perm


@dataclass(frozen=True)
class AppendProof:
    key_com_epoch: object
    split_k: int  # index of the first free slot; n when the table is full
    path_old: OpeningProof = None
    path_new: OpeningProof = None


def split_position(n, log_n, split_k):
    return n if split_k == n else perm(split_k, log_n)


def _side_ok(srs, com, idx, proof, check_bit):
    """AMT opening of com at idx to zero, plus every sibling check selected by
    check_bit(level) (the dual reading of each path component).

    Pairings are computed once per component and reused across levels.
    """
    n, log_n = srs.n, srs.log_n
    comps = proof.components
    if len(comps) != log_n or proof.index != idx:
        return False
    w = srs.domain.elements
    g2 = srs.g2
    e_com = curve.pairing(com, g2)
    minus = []
    for j in range(log_n):
        t = srs.fmul("g2", w[(idx << j) % n])
        minus.append(curve.pairing(comps[j], srs.amt_step_g2[j] - t))
    # suffix[j] = prod over levels >= j
    suffix = [curve.gt_one()] * (log_n + 1)
    for j in range(log_n - 1, -1, -1):
        suffix[j] = minus[j] * suffix[j + 1]
    if e_com != suffix[0]:
        return False
    for lvl in range(log_n):
        if not check_bit(lvl):
            continue
        t = srs.fmul("g2", w[(idx << lvl) % n])
        plus = curve.pairing(comps[lvl], srs.amt_step_g2[lvl] + t)
        if e_com != plus * suffix[lvl + 1]:
            return False
    return True


def verify_append(srs, key_com, key_com_epoch, proof):
    n, log_n = srs.n, srs.log_n
    k = proof.split_k
    if proof.key_com_epoch != key_com_epoch:
        return False
    if not 0 <= k <= n:
        return False
    p = split_position(n, log_n, k)
    zero = curve.zero_g1()
    if p == n:
        # table full: nothing may be appended
        return key_com_epoch == zero
    if proof.path_old is None:
        return False
    # old table vanishes at position p and at every right sibling above it
    if not _side_ok(srs, key_com, k, proof.path_old,
                    lambda lvl: not (k >> (log_n - 1 - lvl)) & 1):
        return False
    if p == 0:
        return True
    if proof.path_new is None:
        return key_com_epoch == zero
    c = perm(p - 1, log_n)
    # epoch delta vanishes at position p - 1 and at every left sibling below it
    return _side_ok(srs, key_com_epoch, c, proof.path_new,
                    lambda lvl: (c >> (log_n - 1 - lvl)) & 1)


def make_append_proof(key_com_epoch, split_k, path_old, epoch_tree, n, log_n):
    """Assemble the proof from the split-point path (snapshotted at epoch
    start) and the epoch tree."""
    p = split_position(n, log_n, split_k)
    path_new = None
    if 0 < p < n and key_com_epoch != curve.zero_g1():
        path_new = epoch_tree.open(perm(p - 1, log_n))
    return AppendProof(key_com_epoch, split_k, path_old if p < n else None, path_new)
