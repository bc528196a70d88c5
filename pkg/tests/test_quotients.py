import pytest

from ppol import curve
from ppol.curve import R
from ppol.domain import DensePolynomial, domain, poly_eval, poly_mul
from ppol.quotients import (NotDivisible, binarity_quotient, commit_poly, degree_shift,
                            sumcheck_quotients, verify_zerocheck, weighted_binarity_quotient,
                            zerocheck_quotient)


def ev(xs):
    return DensePolynomial(tuple(x % R for x in xs), "eval")


def coeffs(n, p):
    return list(p.values) if p.form == "coeff" else domain(n).ifft_list(list(p.values))


def check_identity(n, lhs_coeffs, q, rhs_coeffs, rng):
    x = rng.randrange(R)
    z = pow(x, n, R) - 1
    return (poly_eval(lhs_coeffs, x) - poly_eval(rhs_coeffs, x) - poly_eval(q, x) * z) % R == 0


def test_zerocheck_oracle(rng):
    n = 8
    a = [rng.randrange(R) for _ in range(n)]
    b = [rng.randrange(R) for _ in range(n)]
    c = [x * y % R for x, y in zip(a, b)]
    q = zerocheck_quotient(ev(a), ev(b), ev(c))
    d = domain(n)
    prod = poly_mul(d.ifft_list(a), d.ifft_list(b))
    assert check_identity(n, prod, list(q.values), d.ifft_list(c), rng)


def test_zerocheck_zero_vectors():
    q = zerocheck_quotient(ev([0] * 4), ev([0] * 4), ev([0] * 4))
    assert not any(q.values)


def test_zerocheck_rejects_non_product(rng):
    a = [1, 2, 3, 4]
    with pytest.raises(NotDivisible):
        zerocheck_quotient(ev(a), ev(a), ev([1, 4, 9, 17]))


@pytest.mark.parametrize("bits", [[0, 0, 0, 0], [1, 1, 1, 1], [1, 0, 1, 1, 0, 0, 0, 1]])
def test_binarity(bits, rng):
    n = len(bits)
    u = binarity_quotient(ev(bits))
    b = domain(n).ifft_list(bits)
    lhs = [(x - y) % R for x, y in zip(b + [0] * n, poly_mul(b, b) + [0])]
    assert check_identity(n, lhs, list(u.values), [0], rng)


def test_binarity_rejects_two():
    with pytest.raises(ValueError):
        binarity_quotient(ev([0, 2, 1, 0]))


def test_weighted_binarity_matches_sum(rng):
    n = 8
    vecs = [[rng.randrange(2) for _ in range(n)] for _ in range(3)]
    ws = [rng.randrange(R) for _ in vecs]
    q = weighted_binarity_quotient(vecs, ws, n)
    acc = [0] * n
    for v, w in zip(vecs, ws):
        acc = [(a - w * c) % R for a, c in zip(acc, coeffs(n, binarity_quotient(ev(v))))]
    assert list(q) == acc


def test_sumcheck(rng):
    n = 8
    f = [rng.randrange(R) for _ in range(n)]
    b = [rng.randrange(2) for _ in range(n)]
    total, r, t = sumcheck_quotients(ev(f), ev(b))
    assert total == sum(x * y for x, y in zip(f, b)) % R
    d = domain(n)
    x = rng.randrange(R)
    lhs = poly_eval(d.ifft_list(f), x) * poly_eval(d.ifft_list(b), x) % R
    rhs = (total * d.inv_n + x * poly_eval(list(r.values), x)
           + poly_eval(list(t.values), x) * (pow(x, n, R) - 1)) % R
    assert lhs == rhs


def test_commit_poly_and_verify_zerocheck(srs8, rng):
    n = 8
    a = [rng.randrange(R) for _ in range(n)]
    b = [rng.randrange(R) for _ in range(n)]
    c = [x * y % R for x, y in zip(a, b)]
    q = zerocheck_quotient(ev(a), ev(b), ev(c))
    tau = srs8.trapdoor.tau
    assert commit_poly(srs8, q) == curve.mul(srs8.g1, poly_eval(list(q.values), tau))
    d = domain(n)
    A = commit_poly(srs8, d.ifft_list(a))
    B = commit_poly(srs8, d.ifft_list(b), "g2")
    C = commit_poly(srs8, d.ifft_list(c))
    Q = commit_poly(srs8, q)
    assert verify_zerocheck(srs8, A, B, C, Q)
    assert not verify_zerocheck(srs8, A, B, C, Q + srs8.g1)


def test_degree_shift():
    p = DensePolynomial((1, 2, 0), "coeff")
    assert degree_shift(p).values == (0, 1, 2)
    with pytest.raises(ValueError):
        degree_shift(DensePolynomial((1, 2, 3), "coeff"))
