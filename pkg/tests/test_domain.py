import pytest

from ppol.curve import R
from ppol.domain import (DensePolynomial, EvaluationDomain, divide_by_vanishing, domain, perm,
                         poly_eval, poly_mul)


def naive_eval(coeffs, x):
    return sum(c * pow(x, k, R) for k, c in enumerate(coeffs)) % R


@pytest.mark.parametrize("n", [2, 4, 8, 64])
def test_fft_matches_naive(n, rng):
    d = domain(n)
    coeffs = [rng.randrange(R) for _ in range(n)]
    assert d.fft_list(coeffs) == [naive_eval(coeffs, w) for w in d.elements]
    assert d.ifft_list(d.fft_list(coeffs)) == coeffs


def test_domain_root_and_elements():
    d = domain(16)
    assert pow(d.omega, 16, R) == 1 and pow(d.omega, 8, R) != 1
    assert d.elements[1] == d.omega and len(set(d.elements)) == 16


def test_bad_sizes():
    with pytest.raises(ValueError):
        EvaluationDomain(12)
    with pytest.raises(ValueError):
        EvaluationDomain(1 << 33)


def test_perm_is_bit_reversal():
    assert [perm(i, 3) for i in range(8)] == [0, 4, 2, 6, 1, 5, 3, 7]
    assert all(perm(perm(i, 5), 5) == i for i in range(32))
    with pytest.raises(ValueError):
        perm(8, 3)


def test_lagrange_evaluations(rng):
    d = domain(8)
    x = rng.randrange(R)
    ls = d.lagrange_evals(x)
    for i in range(8):
        assert ls[i] == naive_eval(d.lagrange_coeffs(i).values, x)
        assert d.lagrange_eval(i, x) == ls[i]
        assert [d.lagrange_eval(i, w) for w in d.elements] == [int(k == i) for k in range(8)]
    assert sum(ls) % R == 1
    assert d.lagrange_eval(3, d.elements[3]) == 1


def test_coset_roundtrip(rng):
    d = domain(8)
    coeffs = [rng.randrange(R) for _ in range(8)]
    ev = d.coset_fft(coeffs)
    assert ev == [naive_eval(coeffs, 7 * w % R) for w in d.elements]
    assert d.coset_ifft(ev) == coeffs


def test_divide_by_vanishing(rng):
    n = 4
    a = [rng.randrange(R) for _ in range(7)]
    q, r = divide_by_vanishing(a, n)
    x = rng.randrange(R)
    assert (poly_eval(q, x) * (pow(x, n, R) - 1) + poly_eval(r, x)) % R == poly_eval(a, x)
    assert len(r) == n


def test_poly_mul(rng):
    a = [rng.randrange(R) for _ in range(5)]
    b = [rng.randrange(R) for _ in range(3)]
    x = rng.randrange(R)
    assert poly_eval(poly_mul(a, b), x) == poly_eval(a, x) * poly_eval(b, x) % R


def test_dense_polynomial_forms(rng):
    d = domain(4)
    c = DensePolynomial.coeffs([1, 2, 3, 4])
    e = d.fft(c)
    assert e.form == "eval" and d.ifft(e).values == (1, 2, 3, 4)
