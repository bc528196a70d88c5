"""Phase timings for one provider, one auditor and one checking user.

Filling a large key table with real registrations would take n keygens, so
the bench fills all but a few slots through a test-mode shortcut that writes
the provider's per-key state straight from the trapdoor.  The shortcut is
checked against sequential registration in the test suite; the timed phases
always run the real code paths.
"""

import csv
import io
import random
import statistics
import time

from .. import curve, wire
from ..amt import ProofTree, _quotient_coeffs
from ..apk import KeyRecord
from ..curve import R
from ..domain import perm, poly_eval
from ..pvc import Auditor, Provider, User
from ..srs import setup as srs_setup
from .workload import draw_delta

COLUMNS = ("phase", "n", "wall_time_s", "ops_per_s", "proof_bytes")
PHASES = ("setup", "keygen", "registration", "update", "publish", "verify_auditor",
          "verify_user")


def tree_from_trapdoor(srs, values, tau):
    """ProofTree of sum values[i] l_i(tau) g, one scalar mult per node."""
    coeffs = srs.domain.ifft_list([v % R for v in values])
    nodes = [srs.fmul("g1", poly_eval(q, tau)) for q in _quotient_coeffs(srs, coeffs)]
    return ProofTree(srs.n, nodes)


def bulk_register(provider, sks, records_for=None):
    """Register keys sks[k] at FFT positions 0, 1, ... of an empty provider.

    Leaves the provider in the state sequential add_pk calls would produce
    (records only for `records_for`, default all).  Needs the trapdoor.
    """
    srs = provider.srs
    trap = srs.trapdoor
    if trap is None:
        raise ValueError("bulk registration needs a test-mode SRS")
    if provider.split_pos or provider.joined or provider.records:
        raise ValueError("bulk registration needs an empty provider")
    n, log_n = srs.n, srs.log_n
    tau = trap.tau
    dom = srs.domain
    lag = dom.lagrange_evals(tau)
    z_inv = pow((pow(tau, n, R) - 1) % R, R - 2, R)
    slots = [perm(p, log_n) for p in range(len(sks))]
    sk_at = [0] * n
    for i, sk in zip(slots, sks):
        sk_at[i] = sk % R
    S = sum(s * l for s, l in zip(sk_at, lag)) % R
    # column j of Q: l_j S / Z minus the diagonal's sk_j l_j / Z
    cols = [lag[j] * (S - sk_at[j]) % R * z_inv % R for j in range(n)]
    provider.q_cols = [srs.fmul("g1", c) for c in cols]
    provider.q_cols_h = [srs.fmul("h1", c) for c in cols]
    provider.key_com = srs.fmul("g1", S)
    provider.key_tree = tree_from_trapdoor(srs, sk_at, tau)
    provider.key_com_epoch = provider.key_com
    provider.key_tree_epoch = provider.key_tree.copy()
    wanted = set(slots) if records_for is None else set(records_for)
    sq = dom.inv_n
    tau_inv = pow(tau, R - 2, R)
    for i in slots:
        provider.registered_epoch[i] = provider.epoch
        if i in wanted:
            sk = sk_at[i]
            kl = sk * lag[i] % R
            provider.records[i] = KeyRecord(
                i, srs.fmul("g1", sk), srs.fmul("g1", kl), srs.fmul("h1", kl),
                srs.fmul("g1", (kl - sk * sq) * tau_inv % R),
                srs.fmul("g1", (kl - sk * sq) % R))
    provider.joined = list(slots)


def _timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t, out


def run(n, updates_per_epoch=None, repetitions=3, seed=0, srs=None,
        phases=PHASES):
    """Returns a list of CSV rows (dicts keyed by COLUMNS)."""
    rng = random.Random(seed)
    rows = []

    def row(phase, wall, ops, nbytes=""):
        rows.append({"phase": phase, "n": n, "wall_time_s": f"{wall:.6f}",
                     "ops_per_s": f"{ops:.3f}", "proof_bytes": nbytes})

    if srs is None:
        t, (srs, _) = _timed(lambda: srs_setup(n, seed=seed, insecure=True))
        if "setup" in phases:
            row("setup", t, 1 / t, len(srs.to_bytes()) if n <= 1 << 12 else "")
    if srs.n != n:
        raise ValueError("SRS size does not match n")
    updates = updates_per_epoch if updates_per_epoch is not None else max(1, n >> 6)
    reps = repetitions
    if reps + updates > n:
        raise ValueError("not enough slots for the requested workload")

    provider = Provider(srs, ppol=True, rng=rng)
    auditor = Auditor(srs, ppol=True, rng=rng)
    bulk = n - reps
    sks = [rng.randrange(1, R) for _ in range(bulk)]
    slots = [perm(p, srs.log_n) for p in range(bulk)]
    plan = [rng.sample(slots, updates) for _ in range(reps)]
    bulk_register(provider, sks, {i for batch in plan for i in batch})
    provider._advance()
    auditor.key_com, auditor.epoch = provider.key_com, provider.epoch - 1
    users = {i: _BulkUser(srs, i, sk, rng) for i, sk in zip(slots, sks)
             if i in provider.records}
    for batch in plan:
        for i in batch:
            srs.lagrange_proof(i, "g1")
            srs.lagrange_proof(i, "h1")

    timings = {p: [] for p in PHASES}
    sizes = {}
    for rep in range(reps):
        E = provider.epoch
        signed = [users[i].sign_update(E, draw_delta(rng, users[i].value)) for i in plan[rep]]
        t0 = time.perf_counter()
        for upd in signed:
            provider.update_db(upd)
        timings["update"].append((time.perf_counter() - t0, len(signed)))
        sizes["update"] = len(wire.encode_update(signed[0]))

        slot = provider.next_slot()
        t, user = _timed(User, srs, slot, rng)
        timings["keygen"].append(t)
        sizes["keygen"] = len(user.helpers.to_bytes())
        t, _ = _timed(provider.add_pk, user.helpers)
        timings["registration"].append(t)

        if "publish" in phases or "verify_auditor" in phases:
            t, bundle = _timed(provider.publish)
            timings["publish"].append(t)
            sizes["publish"] = len(wire.encode_bundle(bundle, srs.log_n))
            t, verdicts = _timed(auditor.verify_epoch, bundle)
            if not all(verdicts.values()):
                raise RuntimeError(f"bench epoch failed verification: {verdicts}")
            timings["verify_auditor"].append(t)
            i = plan[rep][0]
            t, ok = _timed(users[i].verify_lookup, bundle.db_com, bundle.inclusion[i])
            if not ok:
                raise RuntimeError("bench lookup failed")
            timings["verify_user"].append(t)
            sizes["verify_user"] = srs.log_n * curve.G1_BYTES
        else:
            provider._advance()

    for phase in PHASES:
        if phase == "setup" or phase not in phases or not timings[phase]:
            continue
        if phase == "update":
            rates = [c / t for t, c in timings[phase]]
            rate = statistics.median(rates)
            row(phase, 1 / rate, rate, sizes.get(phase, ""))
        else:
            t = statistics.median(timings[phase])
            row(phase, t, 1 / t, sizes.get(phase, ""))
    return rows


class _BulkUser(User):
    """A user whose key was installed by bulk_register (no helper values)."""

    def __init__(self, srs, index, sk, rng):
        self.srs = srs
        self.index = index
        self.sk = sk
        self.pk = srs.fmul("g1", sk)
        self.helpers = None
        self._rng = rng
        self.value = 0
        self.mask = 0
        self.registered = True
        self._signed_epochs = set()


def to_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
