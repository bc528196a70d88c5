"""KZG vector commitments with an AMT proof tree.

Tree layout: the quotient for level j (dividing by x^{2^j} - w^{i 2^j}) is
shared by every index with the same residue i mod 2^d, d = log n - 1 - j.
Nodes are stored flat, level by level from the top: node (j, i) lives at
2^d - 1 + (i mod 2^d).  The top level (j = log n - 1) is node 0.
"""

from dataclasses import dataclass

from . import curve
from .curve import R

MASK_ROLE = {"g1": "h1", "g2": "h2"}


@dataclass(frozen=True)
class Commitment:
    point: object
    group: str  # "g1" or "g2"
    masked: bool = False

    def __add__(self, other):
        if other.group != self.group:
            raise ValueError("group mismatch")
        return Commitment(self.point + other.point, self.group, self.masked or other.masked)


@dataclass(frozen=True)
class OpeningProof:
    index: int
    components: tuple

    def __len__(self):
        return len(self.components)


def commit(srs, values, role="g1", masks=None):
    """sum_i values[i] l_i(tau) * base(role) [+ masks[i] l_i(tau) * mask base]."""
    if len(values) != srs.n:
        raise ValueError(f"expected {srs.n} values")
    group = "g1" if role in ("g1", "h1") else "g2"
    point = curve.msm(group, srs.lagrange(role), list(values))
    if masks is not None:
        if len(masks) != srs.n:
            raise ValueError(f"expected {srs.n} masks")
        point = point + curve.msm(group, srs.lagrange(MASK_ROLE[role]), list(masks))
    return Commitment(point, group, masks is not None)


def node_index(log_n, level, i):
    d = log_n - 1 - level
    return (1 << d) - 1 + (i & ((1 << d) - 1))


def path_indices(log_n, i):
    return [node_index(log_n, j, i) for j in range(log_n)]


class ProofTree:
    """The n - 1 quotient commitments of one committed vector (all in G1)."""

    def __init__(self, n, nodes=None):
        self.n = n
        self.log_n = n.bit_length() - 1
        if nodes is None:
            nodes = [curve.zero_g1()] * (n - 1)
        if len(nodes) != n - 1:
            raise ValueError("tree must have n - 1 nodes")
        self.nodes = list(nodes)

    def copy(self):
        return ProofTree(self.n, self.nodes)

    def __eq__(self, other):
        return isinstance(other, ProofTree) and self.n == other.n and self.nodes == other.nodes

    def _check(self, i):
        if not 0 <= i < self.n:
            raise ValueError(f"index {i} out of range")

    def open(self, i):
        self._check(i)
        nodes = self.nodes
        return OpeningProof(i, tuple(nodes[k] for k in path_indices(self.log_n, i)))

    def maintain(self, srs, i, delta, epsilon=0):
        """Apply value change delta (and mask change epsilon) at index i."""
        self._check(i)
        delta %= R
        epsilon %= R
        if not delta and not epsilon:
            return
        rows = []
        if delta:
            rows.append((srs.lagrange_proof(i, "g1"), delta))
        if epsilon:
            rows.append((srs.lagrange_proof(i, "h1"), epsilon))
        for j, k in enumerate(path_indices(self.log_n, i)):
            step = None
            for row, s in rows:
                t = curve.mul(row[j], s)
                step = t if step is None else step + t
            self.nodes[k] = self.nodes[k] + step

    def add_path(self, i, helpers):
        """Add precomputed per-level terms (e.g. sk_i L_{i,j} g) along path i."""
        self._check(i)
        if len(helpers) != self.log_n:
            raise ValueError(f"expected {self.log_n} path helpers, got {len(helpers)}")
        for k, h in zip(path_indices(self.log_n, i), helpers):
            self.nodes[k] = self.nodes[k] + h


def _quotient_coeffs(srs, coeffs):
    """Per-node quotient coefficient lists, computed top-down.

    Returns a list indexed like ProofTree.nodes.
    """
    n, log_n = srs.n, srs.log_n
    w = srs.domain.elements
    out = [None] * (n - 1)
    # remainders[r] = coefficients of p mod (x^{2^{j+1}} - w^{r 2^{j+1}})
    remainders = {0: list(coeffs)}
    for j in range(log_n - 1, -1, -1):
        d = log_n - 1 - j
        m = 1 << j
        nxt = {}
        for r, phi in remainders.items():
            low, high = phi[:m], phi[m:]
            out[(1 << d) - 1 + r] = high
            for child in (r, r + (1 << d)):
                c = w[(child * m) % n]
                nxt[child] = [(a + c * b) % R for a, b in zip(low, high)]
        remainders = nxt
    return out


def build_tree(srs, values, role="g1", masks=None):
    """All AMT quotients of the vector, from scratch."""
    n = srs.n
    if len(values) != n:
        raise ValueError(f"expected {n} values")
    mask_role = MASK_ROLE[role] if role in MASK_ROLE else None
    parts = [(srs.powers(role), _quotient_coeffs(srs, srs.domain.ifft_list(list(values))))]
    if masks is not None:
        if len(masks) != n:
            raise ValueError(f"expected {n} masks")
        parts.append((srs.powers(mask_role), _quotient_coeffs(srs, srs.domain.ifft_list(list(masks)))))
    nodes = []
    for k in range(n - 1):
        acc = curve.zero_g1()
        for powers, qs in parts:
            q = qs[k]
            if any(q):
                acc = acc + curve.msm("g1", powers[: len(q)], q)
        nodes.append(acc)
    return ProofTree(n, nodes)


def claimed_g1(srs, value):
    return srs.fmul("g1", value)


def claimed_g2(srs, value, mask=0):
    """v * g2 + rho * h2, the claimed value for masked G2 commitments."""
    return srs.fmul("g2", value) + srs.fmul("h2", mask)


def step_bases(srs, i):
    """[tau^{2^j} g2] - w^{i 2^j} g2 for each level j."""
    n = srs.n
    w = srs.domain.elements
    return [srs.amt_step_g2[j] - srs.fmul("g2", w[(i << j) % n]) for j in range(srs.log_n)]


def amt_verify(srs, com, i, claimed, proof):
    """Check an opening of a G1 or G2 commitment at index i.

    com is a Commitment (or a bare point, taken as G1); claimed is the group
    encoding of the value in the same group as the commitment.
    """
    if not isinstance(com, Commitment):
        com = Commitment(com, "g1")
    comps = proof.components if isinstance(proof, OpeningProof) else tuple(proof)
    if len(comps) != srs.log_n or not 0 <= i < srs.n:
        return False
    steps = step_bases(srs, i)
    pairs = [(-p, s) for p, s in zip(comps, steps)]
    if com.group == "g1":
        pairs.append((com.point - claimed, srs.g2))
    else:
        pairs.append((srs.g1, com.point - claimed))
    return curve.pairing_check(pairs)
