"""Structured reference string: powers of tau and the bases derived from them."""

import random
import struct
from dataclasses import dataclass, field

from . import curve
from .curve import R
from .domain import MAX_LOG_N, domain, inv

MAGIC = b"PPOLSRS\x00"
VERSION = 1
FLAG_TEST = 1
FLAG_LPROOFS = 2

RANGE_BITS = 64

FAMILIES = (
    ("powers_g1", "g1"),
    ("powers_g2", "g2"),
    ("powers_h1", "g1"),
    ("powers_h2", "g2"),
    ("lagrange_g1", "g1"),
    ("lagrange_g2", "g2"),
    ("lagrange_h1", "g1"),
    ("lagrange_h2", "g2"),
    ("sum_quotient_g1", "g1"),
    ("sum_quotient_h1", "g1"),
    ("vanishing_h1", "g1"),
)


def _family_size(name, n):
    if name in ("powers_g2", "powers_h2"):
        return n + 1
    if name == "vanishing_h1":
        return 1
    return n

ROLES = {"g1": "g1", "h1": "g1", "g2": "g2"}


@dataclass(frozen=True)
class Trapdoor:
    tau: int = field(repr=False)
    eta: int = field(repr=False)


def check_range_capacity(n, bits=RANGE_BITS):
    """Sums of n values below 2^bits must not wrap around the field."""
    if n * (1 << bits) >= R:
        raise ValueError(f"n={n} too large for {bits}-bit range proofs")


class SRS:
    def __init__(self, n, families, test_mode=False, trapdoor=None, lagrange_proofs=None):
        if n < 2 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 2, got {n}")
        self.n = n
        self.log_n = n.bit_length() - 1
        self.domain = domain(n)
        self.test_mode = test_mode
        self._trapdoor = trapdoor
        for name, _ in FAMILIES:
            setattr(self, name, list(families[name]))
        self._check_sizes()
        self.g1 = self.powers_g1[0]
        self.g2 = self.powers_g2[0]
        self.h1 = self.powers_h1[0]
        self.h2 = self.powers_h2[0]
        self.amt_step_g2 = [self.powers_g2[1 << j] for j in range(self.log_n + 1)]
        self.tau_g2 = self.powers_g2[1]
        self.vanishing_g2 = self.powers_g2[n] - self.g2
        self.vanishing_h1 = self.vanishing_h1[0]
        self.vanishing_h2 = self.powers_h2[n] - self.h2
        self._lproofs = {} if lagrange_proofs is None else dict(lagrange_proofs)
        self._lproof_table_roles = {r for r, _ in self._lproofs}

    def _check_sizes(self):
        n = self.n
        for name, _ in FAMILIES:
            if len(getattr(self, name)) != _family_size(name, n):
                raise ValueError(f"{name} has wrong length")

    @property
    def trapdoor(self):
        return self._trapdoor

    def fixed(self, name):
        """Cached FixedBase table for one of the constant bases
        (g1, g2, h1, h2, vanishing_g2, vanishing_h1, tau_g2)."""
        tables = self.__dict__.setdefault("_fixed", {})
        fb = tables.get(name)
        if fb is None:
            point = getattr(self, name)
            zero = curve.zero_g2() if name in ("g2", "h2", "vanishing_g2", "tau_g2") else curve.zero_g1()
            fb = tables[name] = curve.FixedBase(point, zero)
        return fb

    def fmul(self, name, k):
        return self.fixed(name).mul(k)

    def base(self, role):
        return {"g1": self.g1, "h1": self.h1, "g2": self.g2, "h2": self.h2}[role]

    def lagrange(self, role):
        return {"g1": self.lagrange_g1, "h1": self.lagrange_h1,
                "g2": self.lagrange_g2, "h2": self.lagrange_h2}[role]

    def powers(self, role):
        return {"g1": self.powers_g1, "h1": self.powers_h1,
                "g2": self.powers_g2, "h2": self.powers_h2}[role]

    # -- AMT quotient bases ------------------------------------------------

    def lagrange_proof(self, i, role="g1"):
        """Row [L_{i,j} * base] for j in [0, log n): the AMT path of l_i."""
        key = (role, i)
        row = self._lproofs.get(key)
        if row is None:
            if not 0 <= i < self.n:
                raise ValueError(f"index {i} out of range")
            if self._trapdoor is not None:
                row = self._lproof_row_trapdoor(i, role)
            else:
                row = self._lproof_row_msm(i, role)
            self._lproofs[key] = row
        return row

    def _lproof_scalars(self, i, x):
        # L_{i,j}(x) = w^{-i 2^j} / 2^{j+1} * sum_{t<2^j} (x w^{-i})^t
        wi_inv = pow(self.domain.omega_inv, i, R)
        a = x * wi_inv % R
        out = []
        for j in range(self.log_n):
            m = 1 << j
            if a == 1:
                geo = m % R
            else:
                geo = (pow(a, m, R) - 1) * inv(a - 1) % R
            out.append(pow(wi_inv, m, R) * inv(2 * m) % R * geo % R)
        return out

    def _lproof_row_trapdoor(self, i, role):
        base = self.base(role)
        return tuple(curve.mul(base, s) for s in self._lproof_scalars(i, self._trapdoor.tau))

    def lagrange_proof_coeffs(self, i, j):
        wi_inv = pow(self.domain.omega_inv, i, R)
        m = 1 << j
        c = inv(2 * m)
        w = pow(wi_inv, m, R)
        out = []
        for _ in range(m):
            out.append(c * w % R)
            w = w * wi_inv % R
        return out

    def _lproof_row_msm(self, i, role):
        powers = self.powers(role)
        group = ROLES[role]
        return tuple(
            curve.msm(group, powers[: 1 << j], self.lagrange_proof_coeffs(i, j))
            for j in range(self.log_n)
        )

    def materialize_lagrange_proofs(self, roles=("g1", "h1")):
        for role in roles:
            for i in range(self.n):
                self.lagrange_proof(i, role)
            self._lproof_table_roles.add(role)

    # -- helper-verification bases ------------------------------------------

    def quotient_coeffs(self, i, j):
        """Lagrange-basis or power-basis description of l_i l_j / (x^n - 1).

        For i != j returns ("lagrange", c1, c2) with the quotient equal to
        c1 l_i + c2 l_j.  For i == j the quotient taken is (l_i^2 - l_i)/(x^n - 1),
        returned as ("powers", coefficient list).
        """
        n = self.n
        w = self.domain.elements
        if i != j:
            d = inv(n * (w[i] - w[j]))
            return "lagrange", w[j] * d % R, (-w[i]) * d % R
        a_inv = pow(self.domain.omega_inv, i, R)
        scale = inv(n * n)
        coeffs = []
        p = 1
        for t in range(n - 1):
            coeffs.append(scale * (n - 1 - t) % R * p % R)
            p = p * a_inv % R
        return "powers", coeffs

    def quotient_base(self, i, j, role="g2"):
        kind = self.quotient_coeffs(i, j)
        if kind[0] == "lagrange":
            lag = self.lagrange(role)
            return curve.mul(lag[i], kind[1]) + curve.mul(lag[j], kind[2])
        return curve.msm(ROLES[role], self.powers(role)[: self.n - 1], kind[1])

    # -- serialization ----------------------------------------------------

    def to_bytes(self, include_lagrange_proofs=False):
        flags = FLAG_TEST if self.test_mode else 0
        if include_lagrange_proofs:
            flags |= FLAG_LPROOFS
        out = [MAGIC, struct.pack(">HIB", VERSION, self.n, flags)]
        for name, _ in FAMILIES:
            pts = getattr(self, name)
            out.extend(curve.encode(p) for p in (pts if isinstance(pts, list) else [pts]))
        if include_lagrange_proofs:
            for role in ("g1", "h1"):
                for i in range(self.n):
                    out.extend(curve.encode(p) for p in self.lagrange_proof(i, role))
        return b"".join(out)

    def save(self, path, include_lagrange_proofs=False):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes(include_lagrange_proofs))

    @classmethod
    def from_bytes(cls, data, check=True):
        if data[:8] != MAGIC:
            raise ValueError("not an SRS file")
        version, n, flags = struct.unpack(">HIB", data[8:15])
        if version != VERSION:
            raise ValueError(f"unsupported SRS version {version}")
        if n < 2 or n & (n - 1) or n > 1 << MAX_LOG_N:
            raise ValueError(f"bad SRS size {n}")
        pos = 15
        sizes = {"g1": curve.G1_BYTES, "g2": curve.G2_BYTES}
        dec = {"g1": curve.decode_g1, "g2": curve.decode_g2}
        families = {}
        for name, group in FAMILIES:
            count = _family_size(name, n)
            size = sizes[group]
            pts = []
            for _ in range(count):
                pts.append(dec[group](data[pos:pos + size], check))
                pos += size
            families[name] = pts
        lproofs = None
        if flags & FLAG_LPROOFS:
            log_n = n.bit_length() - 1
            lproofs = {}
            for role in ("g1", "h1"):
                for i in range(n):
                    row = []
                    for _ in range(log_n):
                        row.append(curve.decode_g1(data[pos:pos + curve.G1_BYTES], check))
                        pos += curve.G1_BYTES
                    lproofs[(role, i)] = tuple(row)
        if pos != len(data):
            raise ValueError("trailing bytes in SRS file")
        return cls(n, families, test_mode=bool(flags & FLAG_TEST), lagrange_proofs=lproofs)

    @classmethod
    def load(cls, path, check=True):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read(), check)


def setup(n, seed=None, *, insecure=False):
    """Test-mode setup with a known trapdoor.

    Only the insecure mode exists here; production parameters come from an
    external ceremony file loaded with SRS.load.  Returns (srs, trapdoor).
    """
    if not insecure:
        raise ValueError("setup() generates a known trapdoor; pass insecure=True "
                         "or load ceremony output with SRS.load")
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    if n > 1 << MAX_LOG_N:
        raise ValueError(f"n larger than 2^{MAX_LOG_N} is not supported")
    check_range_capacity(n)
    rng = random.Random(seed)
    tau = rng.randrange(2, R)
    eta = rng.randrange(2, R)
    dom = domain(n)
    while pow(tau, n, R) == 1:
        tau = rng.randrange(2, R)
    trap = Trapdoor(tau, eta)

    tpow = [1] * (n + 1)
    for k in range(1, n + 1):
        tpow[k] = tpow[k - 1] * tau % R
    lag = dom.lagrange_evals(tau)
    tau_inv = inv(tau)
    sq = [(l - dom.inv_n) * tau_inv % R for l in lag]

    g1 = curve.g1()
    g2 = curve.g2()
    h1 = curve.mul(g1, eta)
    h2 = curve.mul(g2, eta)

    def fam(base, scalars):
        return [curve.mul(base, s) for s in scalars]

    families = {
        "powers_g1": fam(g1, tpow[:n]),
        "powers_g2": fam(g2, tpow),
        "powers_h1": fam(h1, tpow[:n]),
        "powers_h2": fam(h2, tpow),
        "lagrange_g1": fam(g1, lag),
        "lagrange_g2": fam(g2, lag),
        "lagrange_h1": fam(h1, lag),
        "lagrange_h2": fam(h2, lag),
        "sum_quotient_g1": fam(g1, sq),
        "sum_quotient_h1": fam(h1, sq),
        "vanishing_h1": [curve.mul(h1, tpow[n] - 1)],
    }
    return SRS(n, families, test_mode=True, trapdoor=trap), trap


def verify_structure(srs, rng=None):
    """Randomized pairing-consistency check of every SRS family."""
    rng = rng or random.SystemRandom()
    n = srs.n

    def w(k):
        return [rng.randrange(1, 1 << 128) for _ in range(k)]

    g1, g2, h1, h2 = srs.g1, srs.g2, srs.h1, srs.h2
    tg1, tg2 = srs.powers_g1[1], srs.powers_g2[1]
    r1, r2 = w(2)
    ok = curve.pairing_check([
        (curve.mul(tg1, r1), g2), (-curve.mul(g1, r1), tg2),
        (curve.mul(h1, r2), g2), (-curve.mul(g1, r2), h2),
    ])
    # consecutive powers
    r = w(n - 1)
    a = curve.msm("g1", srs.powers_g1[1:], r)
    b = curve.msm("g1", srs.powers_g1[:-1], r)
    ok &= curve.pairing_check([(a, g2), (-b, tg2)])
    r = w(n)
    a = curve.msm("g2", srs.powers_g2[1:], r)
    b = curve.msm("g2", srs.powers_g2[:-1], r)
    ok &= curve.pairing_check([(g1, a), (-tg1, b)])
    # h-side powers share tau and eta
    r = w(n)
    ok &= curve.pairing_check([(curve.msm("g1", srs.powers_h1, r), g2),
                               (-curve.msm("g1", srs.powers_g1, r), h2)])
    r = w(n + 1)
    ok &= curve.pairing_check([(g1, curve.msm("g2", srs.powers_h2, r)),
                               (-h1, curve.msm("g2", srs.powers_g2, r))])
    # lagrange families are the inverse transform of the power families
    for role, group in (("g1", "g1"), ("h1", "g1"), ("g2", "g2"), ("h2", "g2")):
        r = w(n)
        c = srs.domain.ifft_list(r)
        pw = srs.powers(role)[:n]
        ok &= curve.msm(group, srs.lagrange(role), r) == curve.msm(group, pw, c)
    # sum quotients: tau * S_i = L_i - base/n
    for fam, lag, base in ((srs.sum_quotient_g1, srs.lagrange_g1, g1),
                           (srs.sum_quotient_h1, srs.lagrange_h1, h1)):
        r = w(n)
        s = curve.msm("g1", fam, r)
        l = curve.msm("g1", lag, r)
        c = sum(r) * srs.domain.inv_n % R
        ok &= curve.pairing_check([(s, tg2), (-(l - curve.mul(base, c)), g2)])
    # the stand-alone (tau^n - 1) h element
    ok &= curve.pairing_check([(srs.vanishing_h1, g2), (-h1, srs.vanishing_g2)])
    return bool(ok)
