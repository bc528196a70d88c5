"""Aggregated-public-key proofs and the per-user helper values behind them."""

import random
from dataclasses import dataclass, field

from . import curve
from .curve import R
from .domain import batch_inverse
from .hashing import hash_to_scalars
from .quotients import binarity_quotient, commit_poly, weighted_binarity_quotient
from .domain import DensePolynomial

APK_TAG = b"PPOL-APK-MASK-V01"
WEIGHT_BITS = 128

_system_rng = random.SystemRandom()


def _rng(rng):
    return rng if rng is not None else _system_rng


@dataclass
class HelperValues:
    """The public registration material pk* of the user at `index`."""

    index: int
    pk: object
    key_lagrange: object  # sk l_i(tau) g
    q_row: list  # Q_{i,j}
    r: object  # sk (l_i(tau) - 1/n)/tau g
    tree_helpers: list  # sk L_{i,j} g
    h_key: object  # sk h
    h_key_lagrange: object  # sk l_i(tau) h
    q_row_h: list  # Q~_{i,j}

    def to_bytes(self):
        enc = curve.encode
        parts = [self.index.to_bytes(4, "big"), enc(self.pk), enc(self.key_lagrange)]
        parts += [enc(p) for p in self.q_row]
        parts.append(enc(self.r))
        parts += [enc(p) for p in self.tree_helpers]
        parts += [enc(self.h_key), enc(self.h_key_lagrange)]
        parts += [enc(p) for p in self.q_row_h]
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data, n, check=True):
        log_n = n.bit_length() - 1
        size = curve.G1_BYTES
        want = 4 + size * (2 + n + 1 + log_n + 2 + n)
        if len(data) != want:
            raise ValueError("bad helper encoding length")
        pts = [curve.decode_g1(data[k:k + size], check) for k in range(4, len(data), size)]
        idx = int.from_bytes(data[:4], "big")
        pk, kl = pts[0], pts[1]
        q_row = pts[2:2 + n]
        r = pts[2 + n]
        tree = pts[3 + n:3 + n + log_n]
        hk, hkl = pts[3 + n + log_n], pts[4 + n + log_n]
        q_row_h = pts[5 + n + log_n:]
        return cls(idx, pk, kl, q_row, r, tree, hk, hkl, q_row_h)


def _row(srs, i, sk, key_l, lag, powers):
    """Q_{i,j} = sk l_i l_j / (x^n - 1) on one base, with the diagonal
    taken as sk (l_i^2 - l_i)/(x^n - 1)."""
    n = srs.n
    w = srs.domain.elements
    others = [j for j in range(n) if j != i]
    dens = batch_inverse([n * (w[i] - w[j]) % R for j in others])
    row = [None] * n
    key_table = curve.FixedBase(key_l, curve.zero_g1())  # n products share this base
    for j, d in zip(others, dens):
        c1 = w[j] * d % R
        c2 = (-w[i]) * d % R
        row[j] = key_table.mul(c1) + curve.mul(lag[j], sk * c2)
    _, diag = srs.quotient_coeffs(i, i)
    row[i] = curve.msm("g1", powers[: n - 1], [c * sk % R for c in diag])
    return row


def keygen(i, srs, rng=None):
    """Fresh key for slot i.  Returns (sk, HelperValues)."""
    if not 0 <= i < srs.n:
        raise ValueError(f"index {i} out of range")
    sk = _rng(rng).randrange(1, R)
    return sk, helpers_for(sk, i, srs)


def helpers_for(sk, i, srs):
    key_l = curve.mul(srs.lagrange_g1[i], sk)
    h_key_l = curve.mul(srs.lagrange_h1[i], sk)
    return HelperValues(
        index=i,
        pk=srs.fmul("g1", sk),
        key_lagrange=key_l,
        q_row=_row(srs, i, sk, key_l, srs.lagrange_g1, srs.powers_g1),
        r=curve.mul(srs.sum_quotient_g1[i], sk),
        tree_helpers=[curve.mul(p, sk) for p in srs.lagrange_proof(i, "g1")],
        h_key=srs.fmul("h1", sk),
        h_key_lagrange=h_key_l,
        q_row_h=_row(srs, i, sk, h_key_l, srs.lagrange_h1, srs.powers_h1),
    )


def batch_check(equations, rng=None):
    """Check several product-of-pairings equations with one multi-pairing.

    Each equation is a list of (G1, G2) pairs whose pairing product should be
    the identity.  Equations are merged with random 128-bit weights (the
    first takes weight 1), and pairs sharing the same G2 object are folded
    together.
    """
    rng = _rng(rng)
    merged = {}
    order = []
    for n, eq in enumerate(equations):
        c = rng.randrange(1, 1 << WEIGHT_BITS) if n else 1
        for p, q in eq:
            key = id(q)
            p = curve.mul(p, c) if n else p
            if key not in merged:
                merged[key] = [p, q]
                order.append(key)
            else:
                merged[key][0] = merged[key][0] + p
    return curve.pairing_check([(merged[k][0], merged[k][1]) for k in order])


class HelperVerifier:
    """Checks registration helpers.

    The row checks weight all n entries of Q_{i,.} by secret random weights.
    The G2 side of that check, sum_j w_j l_j(tau) g2, is computed once per
    verifier and reused; the weights never leave the verifier, so reuse does
    not help a cheating registrant.
    """

    def __init__(self, srs, rng=None):
        rng = _rng(rng)
        self.srs = srs
        self.weights = [rng.randrange(1, 1 << WEIGHT_BITS) for _ in range(srs.n)]
        self._weighted_g2 = curve.msm("g2", srs.lagrange_g2, self.weights)
        self._rng = rng

    def verify(self, h):
        srs = self.srs
        n, i = srs.n, h.index
        if not 0 <= i < n:
            return False
        if len(h.q_row) != n or len(h.q_row_h) != n or len(h.tree_helpers) != srs.log_n:
            return False
        w = self.weights
        a = curve.msm("g1", h.q_row, w)
        a_h = curve.msm("g1", h.q_row_h, w)
        u = [self._rng.randrange(1, 1 << WEIGHT_BITS) for _ in range(srs.log_n)]
        tree_g1 = curve.msm("g1", h.tree_helpers, u)
        tree_g2 = curve.msm("g2", list(srs.lagrange_proof(i, "g2")), u)
        g2, h2 = srs.g2, srs.h2
        pk_over_n = curve.mul(h.pk, srs.domain.inv_n)
        eqs = [
            [(h.key_lagrange, g2), (-h.pk, srs.lagrange_g2[i])],
            [(h.r, srs.tau_g2), (-(h.key_lagrange - pk_over_n), g2)],
            [(h.h_key, g2), (-h.pk, h2)],
            [(h.h_key_lagrange, g2), (-h.key_lagrange, h2)],
            [(a, srs.vanishing_g2), (-h.key_lagrange, self._weighted_g2 - curve.mul(g2, w[i]))],
            [(a_h, g2), (-a, h2)],
            [(tree_g1, g2), (-h.pk, tree_g2)],
        ]
        return batch_check(eqs, self._rng)


def verify_helpers(helpers, srs, rng=None):
    """One-shot helper check with fresh weights."""
    return HelperVerifier(srs, rng).verify(helpers)


@dataclass
class ApkAccumulator:
    apk: object
    indices: set
    B: object
    B_hat: object
    R: object
    R_deg: object
    T: object

    @classmethod
    def empty(cls):
        z1, z2 = curve.zero_g1(), curve.zero_g2()
        return cls(z1, set(), z1, z2, z1, z1, z1)

    def copy(self):
        return ApkAccumulator(self.apk, set(self.indices), self.B, self.B_hat,
                              self.R, self.R_deg, self.T)


@dataclass(frozen=True)
class KeyRecord:
    """What the provider keeps per registered user after folding the rows."""

    index: int
    pk: object
    key_lagrange: object
    h_key_lagrange: object
    r: object
    r_deg: object

    @classmethod
    def from_helpers(cls, h, srs):
        r_deg = h.key_lagrange - curve.mul(h.pk, srs.domain.inv_n)
        return cls(h.index, h.pk, h.key_lagrange, h.h_key_lagrange, h.r, r_deg)


def accumulate(acc, srs, rec, q_col):
    """Fold signer `rec` (with column aggregate q_col = Q_i) into acc in place."""
    i = rec.index
    if i in acc.indices:
        raise ValueError(f"index {i} already in this epoch's signer set")
    acc.apk = acc.apk + rec.pk
    acc.indices.add(i)
    acc.B = acc.B + srs.lagrange_g1[i]
    acc.B_hat = acc.B_hat + srs.lagrange_g2[i]
    acc.R = acc.R + rec.r
    acc.R_deg = acc.R_deg + rec.r_deg
    acc.T = acc.T + q_col
    return acc


@dataclass
class ApkProof:
    B: object
    B_hat: object
    U: object
    T: object
    R: object
    R_deg: object
    masked: bool = False

    def points(self):
        return [self.B, self.B_hat, self.U, self.T, self.R, self.R_deg]


def bit_vector(n, indices):
    return [1 if k in indices else 0 for k in range(n)]


def mask_challenge(B, B_hat):
    return hash_to_scalars(APK_TAG, [curve.encode(B), curve.encode(B_hat)])[0]


def finalize(acc, srs, masked=False, key_com=None, rng=None):
    """Close the epoch's APK proof.

    Plain mode commits u = (b - b^2)/(x^n - 1).  Masked mode hides the signer
    set behind vanishing-polynomial multiples and needs the key commitment the
    auditor will check against.
    """
    n = srs.n
    bits = bit_vector(n, acc.indices)
    if not masked:
        u = binarity_quotient(DensePolynomial(tuple(bits), "eval"))
        U = commit_poly(srs, u) if any(u.values) else curve.zero_g1()
        return ApkProof(acc.B, acc.B_hat, U, acc.T, acc.R, acc.R_deg, False)
    if key_com is None:
        raise ValueError("masked finalize needs the key commitment")
    rng = _rng(rng)
    mu = rng.randrange(1, R)
    mu_hat = rng.randrange(1, R)
    B = acc.B + srs.fmul("vanishing_h1", mu)
    B_hat = acc.B_hat + srs.fmul("vanishing_g2", mu_hat)
    gamma = mask_challenge(B, B_hat)
    # (b^2 - b)/(x^n - 1) is the negation of the plain-mode quotient
    u = weighted_binarity_quotient([bits], [1], n)
    b_h = curve.msm("g1", [srs.lagrange_h1[k] for k in sorted(acc.indices)], [1] * len(acc.indices))
    U = (commit_poly(srs, u)
         + curve.mul(b_h, mu)
         + curve.mul(acc.B, mu_hat)
         + srs.fmul("vanishing_h1", mu * mu_hat)
         - srs.fmul("g1", mu_hat)
         + srs.fmul("h1", gamma * mu)
         - srs.fmul("g1", gamma * mu_hat))
    T = acc.T + curve.mul(key_com, mu_hat)
    return ApkProof(B, B_hat, U, T, acc.R, acc.R_deg, True)


def apk_verify(srs, key_com, apk, proof, masked=False, rng=None):
    return batch_check(apk_equations(srs, key_com, apk, proof, masked), rng)


def apk_equations(srs, key_com, apk, proof, masked=False):
    g1, g2 = srs.g1, srs.g2
    B, B_hat, U, T, Rc, R_deg = proof.points()
    eqs = [
        [(Rc, srs.tau_g2), (-R_deg, g2)],
        [(key_com, B_hat), (-curve.mul(apk, srs.domain.inv_n), g2), (-Rc, srs.tau_g2),
         (-T, srs.vanishing_g2)],
    ]
    if masked:
        gamma = mask_challenge(B, B_hat)
        eqs.append([(B - g1, B_hat), (curve.mul(B, gamma), g2), (-curve.mul(g1, gamma), B_hat),
                    (-U, srs.vanishing_g2)])
    else:
        eqs.append([(B, g2), (-g1, B_hat)])
        eqs.append([(B, g2 - B_hat), (-U, srs.vanishing_g2)])
    return eqs
