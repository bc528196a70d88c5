"""Liability proofs: the committed total (sum proof) and a 64-bit range
proof over every database entry."""

import random
from dataclasses import dataclass

from . import curve
from .curve import R
from .hashing import epoch_bytes, hash_to_scalars
from .quotients import commit_poly, weighted_binarity_quotient
from .srs import RANGE_BITS

RANGE_TAG = b"PPOL-RANGE-V01"

_system_rng = random.SystemRandom()


@dataclass
class SumProof:
    T: object  # total_v g2 + total_rho h2
    S: object  # ((p(x) - p(0)) / x)(tau) in G1

    @classmethod
    def empty(cls):
        return cls(curve.zero_g2(), curve.zero_g1())


def sum_update(proof, i, delta, epsilon, srs):
    return SumProof(
        proof.T + srs.fmul("g2", delta) + srs.fmul("h2", epsilon),
        proof.S + curve.mul(srs.sum_quotient_g1[i], delta)
        + curve.mul(srs.sum_quotient_h1[i], epsilon),
    )


def sum_equation(srs, db_com, proof):
    """e(g, dbCom* - T/n) = e(S, tau g2)."""
    lhs = db_com - curve.mul(proof.T, srs.domain.inv_n)
    return [(srs.g1, lhs), (-proof.S, srs.tau_g2)]


def sum_verify(srs, db_com, proof):
    return curve.pairing_check(sum_equation(srs, db_com, proof))


@dataclass
class RangeProof:
    C: list  # bit commitments in G1
    C_hat: list  # bit commitments in G2
    rho_star: object
    M_star: object
    W: object


def decompose(values, bits=RANGE_BITS):
    """Bit vectors b_k (evaluations over the domain), least significant first."""
    for m, v in enumerate(values):
        if not 0 <= v < 1 << bits:
            raise ValueError(f"entry {m} = {v} is outside [0, 2^{bits})")
    return [[(v >> k) & 1 for v in values] for k in range(bits)]


WEIGHT_BITS = 128


def challenges(db_com, epoch, C, C_hat):
    """(binarity weights, consistency challenge).

    The binarity weights are independent 128-bit values with the first fixed
    to 1, which halves the verifier's G1 scalar work against full-width powers.
    """
    parts = [curve.encode(db_com), epoch_bytes(epoch)]
    parts += [curve.encode(c) for c in C] + [curve.encode(c) for c in C_hat]
    out = hash_to_scalars(RANGE_TAG, parts, len(C) + 1)
    weights = [1] + [(s % (1 << WEIGHT_BITS)) or 1 for s in out[1:len(C)]]
    return weights, out[-1]


def _lag_sum(bases, vec, group):
    idx = [m for m, b in enumerate(vec) if b]
    if not idx:
        return curve.zero_g1() if group == "g1" else curve.zero_g2()
    return curve.msm(group, [bases[m] for m in idx], [vec[m] % R for m in idx])


def prove_bits(srs, bit_vectors, mask_com, db_com, epoch, rng=None, check=True):
    """Range proof from explicit bit vectors.

    `check=False` lets a test build a proof over non-binary "bits"; the
    verifier must reject it.
    """
    rng = rng or _system_rng
    n = srs.n
    m = len(bit_vectors)
    mu = [rng.randrange(R) for _ in range(m)]
    mu_hat = [rng.randrange(R) for _ in range(m)]
    C = [_lag_sum(srs.lagrange_g1, b, "g1") + srs.fmul("vanishing_h1", u)
         for b, u in zip(bit_vectors, mu)]
    C_hat = [_lag_sum(srs.lagrange_g2, b, "g2") + srs.fmul("vanishing_g2", u)
             for b, u in zip(bit_vectors, mu_hat)]
    p1, g2 = challenges(db_com, epoch, C, C_hat)
    p2 = [pow(g2, k, R) for k in range(m)]

    q = weighted_binarity_quotient(bit_vectors, p1, n, check=check)
    a_h = [0] * n  # sum_k g1^k mu_k b_k(w^j)
    a_g = [0] * n  # sum_k g1^k mu_hat_k b_k(w^j)
    for b, w, u, uh in zip(bit_vectors, p1, mu, mu_hat):
        cu, cuh = w * u % R, w * uh % R
        for j, bit in enumerate(b):
            if bit:
                a_h[j] = (a_h[j] + cu * bit) % R
                a_g[j] = (a_g[j] + cuh * bit) % R
    c_zh = sum(w * u * uh for w, u, uh in zip(p1, mu, mu_hat)) % R
    c_g = -sum((w1 + w2) * uh for w1, w2, uh in zip(p1, p2, mu_hat)) % R
    c_h = sum(w2 * u for w2, u in zip(p2, mu)) % R
    W = (commit_poly(srs, q)
         + _lag_sum(srs.lagrange_h1, a_h, "g1")
         + _lag_sum(srs.lagrange_g1, a_g, "g1")
         + srs.fmul("vanishing_h1", c_zh)
         + srs.fmul("g1", c_g)
         + srs.fmul("h1", c_h))

    gamma0 = rng.randrange(R)
    rho_star = mask_com + srs.fmul("vanishing_g2", gamma0)
    M_star = srs.fmul("h1", -(gamma0 + sum(u << k for k, u in enumerate(mu))) % R)
    return RangeProof(C, C_hat, rho_star, M_star, W)


def range_prove(srs, values, mask_com, db_com, epoch, rng=None, bits=RANGE_BITS):
    """Prove every entry of `values` lies in [0, 2^bits).

    mask_com is sum_j rho_j l_j(tau) g2 for the current masks rho.
    """
    return prove_bits(srs, decompose(values, bits), mask_com, db_com, epoch, rng)


def range_equations(srs, db_com, proof, epoch):
    """Pairing equations (lists of pairs with identity product) for the range
    proof, or None when the proof is malformed."""
    C, C_hat = proof.C, proof.C_hat
    m = len(C)
    if m != RANGE_BITS or len(C_hat) != m:
        return None
    p1, g2 = challenges(db_com, epoch, C, C_hat)
    p2 = [pow(g2, k, R) for k in range(m)]
    gen1, gen2 = srs.g1, srs.g2
    # binarity and C/C_hat consistency, batched over k with powers of g1, g2
    # sum_k g1^k e(C_k - g, C^_k) is split as sum_k e(g1^k C_k, C^_k) - e(g, sum_k g1^k C^_k)
    # so the g-side joins the g2-weighted term in one G2 MSM
    pairs = [(-proof.W, srs.vanishing_g2), (C[0], C_hat[0])]
    pairs += [(curve.mul(c, w), ch) for c, ch, w in zip(C[1:], C_hat[1:], p1[1:])]
    pairs.append((curve.msm("g1", C, p2), gen2))
    pairs.append((-gen1, curve.msm("g2", C_hat, [(a + b) % R for a, b in zip(p1, p2)])))
    # recomposition: sum 2^k b_k matches the committed entries
    recomposed = curve.msm("g1", C, [1 << k for k in range(m)])
    return [pairs, [(gen1, db_com), (-recomposed, gen2), (-srs.h1, proof.rho_star),
                    (-proof.M_star, srs.vanishing_g2)]]


def range_verify(srs, db_com, proof, epoch, rng=None):
    eqs = range_equations(srs, db_com, proof, epoch)
    return eqs is not None and all(curve.pairing_check(eq) for eq in eqs)
