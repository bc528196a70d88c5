"""Zerocheck, binarity and sumcheck quotients over H, and their checks."""

from dataclasses import dataclass

from . import curve
from .curve import R
from .domain import GENERATOR, DensePolynomial, divide_by_vanishing, domain, inv, poly_mul

KINDS = ("zerocheck", "binarity", "sumcheck-q", "sumcheck-r", "degree-check")


class NotDivisible(ValueError):
    pass


@dataclass(frozen=True)
class QuotientCommitment:
    point: object
    kind: str


def _coeffs(dom, p):
    if isinstance(p, DensePolynomial):
        vals = list(p.values)
        return dom.ifft_list(vals) if p.form == "eval" else vals
    return list(p)


def _evals(dom, p):
    if isinstance(p, DensePolynomial) and p.form == "eval":
        return list(p.values)
    return dom.fft_list(_coeffs(dom, p))


def zerocheck_quotient(a, b, c, n=None):
    """q with a*b - c = q (x^n - 1), requiring a*b = c on H."""
    n = n or len(a)
    dom = domain(n)
    ea, eb, ec = _evals(dom, a), _evals(dom, b), _evals(dom, c)
    if any((x * y - z) % R for x, y, z in zip(ea, eb, ec)):
        raise NotDivisible("a*b - c does not vanish on H")
    ca, cb, cc = _coeffs(dom, a), _coeffs(dom, b), _coeffs(dom, c)
    # evaluate on a coset of size 2n where x^n - 1 never vanishes
    big = domain(2 * n)
    pad = [0] * n
    fa = big.coset_fft(ca + pad)
    fb = big.coset_fft(cb + pad)
    fc = big.coset_fft(cc + pad)
    sn = pow(GENERATOR, n, R)
    zinv = [inv(sn - 1), inv(-sn - 1)]  # x^n - 1 alternates between these
    q_evals = [(x * y - z) * zinv[k & 1] % R for k, (x, y, z) in enumerate(zip(fa, fb, fc))]
    q = big.coset_ifft(q_evals)
    if any(q[n - 1:]):
        raise NotDivisible("quotient degree exceeds n - 2")
    return DensePolynomial(tuple(q[:n]), "coeff")


def binarity_quotient(b, n=None):
    """u with b - b^2 = u (x^n - 1)."""
    n = n or len(b)
    dom = domain(n)
    eb = _evals(dom, b)
    if any(v not in (0, 1) for v in eb):
        raise ValueError("bit polynomial has a non-binary evaluation")
    one_minus = [(1 - v) % R for v in eb]
    return zerocheck_quotient(DensePolynomial(tuple(eb), "eval"),
                              DensePolynomial(tuple(one_minus), "eval"),
                              DensePolynomial(tuple([0] * n), "eval"))


def weighted_binarity_quotient(bit_vectors, weights, n, check=True):
    """sum_k weights[k] (b_k^2 - b_k) / (x^n - 1) for many bit vectors.

    Each b_k is given by its evaluations over H.  Works on a size-n coset,
    which suffices since the quotient has degree <= n - 2.
    """
    dom = domain(n)
    acc = [0] * n
    for bits, w in zip(bit_vectors, weights):
        if check and any(v not in (0, 1) for v in bits):
            raise ValueError("bit polynomial has a non-binary evaluation")
        if not any(bits):
            continue
        e = dom.coset_fft(dom.ifft_list(list(bits)))
        for k, v in enumerate(e):
            acc[k] = (acc[k] + w * (v * v - v)) % R
    zinv = inv(pow(GENERATOR, n, R) - 1)
    return dom.coset_ifft([v * zinv % R for v in acc])


def sumcheck_quotients(f, b, n=None):
    """(total, r, t) with f*b = total/n + r x + t (x^n - 1)."""
    n = n or len(f)
    dom = domain(n)
    prod = poly_mul(_coeffs(dom, f), _coeffs(dom, b))
    t, rem = divide_by_vanishing(prod, n)
    t = (t + [0] * n)[:n]
    total = rem[0] * n % R
    r = rem[1:] + [0]
    return total, DensePolynomial(tuple(r), "coeff"), DensePolynomial(tuple(t), "coeff")


def commit_poly(srs, p, role="g1"):
    """Commit a coefficient-form polynomial against the power bases."""
    coeffs = _coeffs(srs.domain, p) if isinstance(p, DensePolynomial) else list(p)
    powers = srs.powers(role)
    if len(coeffs) > len(powers):
        if any(coeffs[len(powers):]):
            raise ValueError("polynomial degree too large for the SRS")
        coeffs = coeffs[: len(powers)]
    group = "g1" if role in ("g1", "h1") else "g2"
    return curve.msm(group, powers[: len(coeffs)], coeffs)


def degree_shift(p):
    """r*(x) = x r(x), used for the explicit degree check.  Needs deg r <= n - 2."""
    coeffs = list(p.values) if isinstance(p, DensePolynomial) else list(p)
    if coeffs and coeffs[-1]:
        raise ValueError("degree too large to shift")
    return DensePolynomial(tuple([0] + coeffs[:-1]), "coeff")


def verify_zerocheck(srs, a, b, c, q):
    """e(a, b) = e(c, g2) + e(q, (tau^n - 1) g2) for a, c, q in G1 and b in G2."""
    qp = q.point if isinstance(q, QuotientCommitment) else q
    return curve.pairing_check([(a, b), (-c, srs.g2), (-qp, srs.vanishing_g2)])
