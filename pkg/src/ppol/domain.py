"""Radix-2 evaluation domains over the BLS12-381 scalar field."""

from dataclasses import dataclass
from functools import lru_cache

from .curve import R

GENERATOR = 7  # multiplicative generator of F_R^*
TWO_ADICITY = 32
MAX_LOG_N = 20


def inv(a):
    a %= R
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    return pow(a, -1, R)


def batch_inverse(values):
    """Montgomery batch inversion; all inputs must be nonzero."""
    prefix = []
    acc = 1
    for v in values:
        prefix.append(acc)
        acc = acc * v % R
    acc = inv(acc)
    out = [0] * len(values)
    for k in range(len(values) - 1, -1, -1):
        out[k] = prefix[k] * acc % R
        acc = acc * values[k] % R
    return out


def perm(i, log_n):
    """Bit-reversal of i over log_n bits (an involution)."""
    if not 0 <= i < (1 << log_n):
        raise ValueError(f"index {i} out of range for log_n={log_n}")
    out = 0
    for _ in range(log_n):
        out = (out << 1) | (i & 1)
        i >>= 1
    return out


@lru_cache(maxsize=None)
def _bitrev_table(log_n):
    return tuple(perm(i, log_n) for i in range(1 << log_n))


@lru_cache(maxsize=None)
def _twiddles(n, omega):
    # per-stage twiddle lists for the iterative transform
    stages = []
    m = 1
    while m < n:
        w = pow(omega, n // (2 * m), R)
        ws = [1] * m
        for k in range(1, m):
            ws[k] = ws[k - 1] * w % R
        stages.append(ws)
        m *= 2
    return stages


def _ntt(values, omega, log_n):
    n = 1 << log_n
    rev = _bitrev_table(log_n)
    a = [values[rev[i]] for i in range(n)]
    m = 1
    for ws in _twiddles(n, omega):
        step = 2 * m
        for start in range(0, n, step):
            for k in range(m):
                u = a[start + k]
                v = a[start + k + m] * ws[k] % R
                a[start + k] = (u + v) % R
                a[start + k + m] = (u - v) % R
        m = step
    return a


@dataclass(frozen=True)
class DensePolynomial:
    values: tuple
    form: str  # "coeff" or "eval"

    def __post_init__(self):
        if self.form not in ("coeff", "eval"):
            raise ValueError(f"unknown form {self.form!r}")

    @classmethod
    def coeffs(cls, values):
        return cls(tuple(v % R for v in values), "coeff")

    @classmethod
    def evals(cls, values):
        return cls(tuple(v % R for v in values), "eval")

    def __len__(self):
        return len(self.values)


class EvaluationDomain:
    """The subgroup H = {1, w, ..., w^(n-1)} and transforms over it."""

    def __init__(self, n):
        if n < 1 or n & (n - 1):
            raise ValueError(f"domain size must be a power of two, got {n}")
        log_n = n.bit_length() - 1
        if log_n > TWO_ADICITY:
            raise ValueError("domain too large for the field")
        self.n = n
        self.log_n = log_n
        self.omega = pow(GENERATOR, (R - 1) >> log_n, R)
        self.omega_inv = inv(self.omega)
        self.inv_n = inv(n)
        self.elements = [1] * n
        for k in range(1, n):
            self.elements[k] = self.elements[k - 1] * self.omega % R

    def __repr__(self):
        return f"EvaluationDomain(n={self.n})"

    def _check(self, values):
        if len(values) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(values)}")

    def fft(self, p):
        if isinstance(p, DensePolynomial):
            if p.form != "coeff":
                raise ValueError("fft expects coefficient form")
            return DensePolynomial(tuple(self.fft_list(p.values)), "eval")
        return self.fft_list(p)

    def ifft(self, p):
        if isinstance(p, DensePolynomial):
            if p.form != "eval":
                raise ValueError("ifft expects evaluation form")
            return DensePolynomial(tuple(self.ifft_list(p.values)), "coeff")
        return self.ifft_list(p)

    def fft_list(self, coeffs):
        self._check(coeffs)
        return _ntt(coeffs, self.omega, self.log_n)

    def ifft_list(self, evals):
        self._check(evals)
        out = _ntt(evals, self.omega_inv, self.log_n)
        ni = self.inv_n
        return [v * ni % R for v in out]

    def coset_fft(self, coeffs, shift=GENERATOR):
        self._check(coeffs)
        scaled = []
        s = 1
        for c in coeffs:
            scaled.append(c * s % R)
            s = s * shift % R
        return _ntt(scaled, self.omega, self.log_n)

    def coset_ifft(self, evals, shift=GENERATOR):
        coeffs = self.ifft_list(evals)
        si = inv(shift)
        s = 1
        for k in range(self.n):
            coeffs[k] = coeffs[k] * s % R
            s = s * si % R
        return coeffs

    def lagrange_coeffs(self, i):
        """Coefficients of l_i, which are w^(-ik)/n."""
        if not 0 <= i < self.n:
            raise ValueError(f"index {i} out of range")
        w = pow(self.omega_inv, i, R)
        out = [self.inv_n] * self.n
        for k in range(1, self.n):
            out[k] = out[k - 1] * w % R
        return DensePolynomial(tuple(out), "coeff")

    def vanishing_eval(self, x):
        return (pow(x, self.n, R) - 1) % R

    def lagrange_eval(self, i, x):
        """l_i(x) = w^i (x^n - 1) / (n (x - w^i))."""
        wi = self.elements[i]
        x %= R
        if x == wi:
            return 1
        z = self.vanishing_eval(x)
        if z == 0:
            return 0
        return wi * z % R * inv(self.n * (x - wi)) % R

    def lagrange_evals(self, x):
        """All l_i(x) at once."""
        x %= R
        z = self.vanishing_eval(x)
        if z == 0:
            out = [0] * self.n
            out[self.elements.index(x)] = 1
            return out
        dens = batch_inverse([(x - w) % R for w in self.elements])
        c = z * self.inv_n % R
        return [c * w % R * d % R for w, d in zip(self.elements, dens)]


@lru_cache(maxsize=None)
def domain(n):
    return EvaluationDomain(n)


def poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % R
    return acc


def poly_mul(a, b):
    """Product of two coefficient lists via a power-of-two transform."""
    if not a or not b:
        return []
    size = len(a) + len(b) - 1
    m = 1
    while m < size:
        m *= 2
    d = domain(m)
    fa = d.fft_list(list(a) + [0] * (m - len(a)))
    fb = d.fft_list(list(b) + [0] * (m - len(b)))
    out = d.ifft_list([x * y % R for x, y in zip(fa, fb)])
    return out[:size]


def divide_by_vanishing(coeffs, n):
    """Split p = q (x^n - 1) + r by folding high coefficients downward.

    Returns (q, r) with len(r) == n.
    """
    p = [c % R for c in coeffs]
    if len(p) <= n:
        return [], p + [0] * (n - len(p))
    q = [0] * (len(p) - n)
    # peel from the top so each folded coefficient feeds lower ones
    for k in range(len(p) - 1, n - 1, -1):
        c = p[k]
        q[k - n] = c
        p[k - n] = (p[k - n] + c) % R
    return q, p[:n]
