"""Cheating-provider scenarios.

MaliciousProvider adds fault-injection hooks on top of the honest provider;
it lives here so the library provider never carries them.  Each scenario
builds on an honest base run, injects one fault in the next epoch, publishes,
and reports which honest checks rejected.
"""

import random

from .. import curve
from ..apk import accumulate
from ..curve import R
from ..hashing import hash_epoch
from ..liabilities import sum_update
from ..pvc import Provider, User
from .workload import Simulation, all_pass

SCENARIOS = ("otb-zeroing", "unsigned-update", "replay", "key-removal", "omitted-update",
             "nonzero-registration", "key-substitution")

# the verifier each scenario must trip
EXPECTED = {
    "otb-zeroing": "auditor",
    "unsigned-update": "auditor",
    "replay": "auditor",
    "key-removal": "auditor",
    "omitted-update": "user",
    "nonzero-registration": "user",
    "key-substitution": "user",
}


class MaliciousProvider(Provider):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.omitted = {}  # index -> "stale" | "absent"
        self.helpers_seen = {}

    def add_pk(self, helpers):
        super().add_pk(helpers)
        self.helpers_seen[helpers.index] = helpers

    def force_add_pk(self, helpers):
        """Register without checking the slot's owner."""
        super().add_pk(helpers)
        self.helpers_seen[helpers.index] = helpers

    def forge_delta(self, i, delta, epsilon=0, sigma="epoch", include_apk=False,
                    fake_sig=False):
        """Change entry i without the owner's signature.

        sigma: "epoch" books the change in both Sigma and Delta_C,
        "cumulative" only in the running Sigma, "none" nowhere.
        """
        srs = self.srs
        rec = self.records[i]
        d, e = delta % R, epsilon % R
        self.db_com = self.db_com + curve.mul(srs.lagrange_g2[i], d) + curve.mul(srs.lagrange_h2[i], e)
        self.db_tree.maintain(srs, i, d, e)
        self.values[i] = (self.values[i] + d) % R
        self.masks[i] = (self.masks[i] + e) % R
        self.zerocheck = (self.zerocheck + curve.mul(self.q_cols[i], d)
                          + curve.mul(self.q_cols_h[i], e))
        if self.ppol:
            self.sum_proof = sum_update(self.sum_proof, i, d, e, srs)
            self.mask_com = self.mask_com + curve.mul(srs.lagrange_g2[i], e)
        dsig = curve.mul(rec.key_lagrange, d) + curve.mul(rec.h_key_lagrange, e)
        if sigma in ("epoch", "cumulative"):
            self.sigma = self.sigma + dsig
        if sigma == "epoch":
            self.sigma_epoch = self.sigma_epoch + dsig
        if include_apk and i not in self.acc.indices:
            accumulate(self.acc, srs, rec, self.q_cols[i])
        if fake_sig:
            self.sig_epoch = self.sig_epoch + curve.mul(hash_epoch(self.epoch),
                                                        self._rng.randrange(1, R))

    def replay_update(self, upd):
        """Apply a signed update again, skipping every freshness check."""
        self._apply(self.records[upd.index], upd)

    def remove_key(self, i, with_tree=True):
        h = self.helpers_seen[i]
        self.key_com = self.key_com - h.key_lagrange
        if with_tree:
            self.key_com_epoch = self.key_com_epoch - h.key_lagrange
            neg = [-p for p in h.tree_helpers]
            self.key_tree.add_path(i, neg)
            self.key_tree_epoch.add_path(i, neg)

    def accept_but_omit(self, upd, how="stale"):
        self.check_update(upd)
        self.omitted[upd.index] = how

    def publish(self):
        stale = {i: self.db_tree.open(i) for i, how in self.omitted.items() if how == "stale"}
        bundle = super().publish()
        bundle.inclusion.update(stale)
        self.omitted = {}
        return bundle


def clone_simulation(sim, rng):
    other = sim.clone(rng)
    other.provider.omitted = {}
    other.provider.helpers_seen = dict(sim.provider.helpers_seen)
    return other


def base_run(srs, seed, epochs=2, regs=12, update_frac=0.5):
    """Honest history the scenarios start from; keeps the signed updates.

    Registrations are capped so some slots stay free for the scenarios that
    register a key.
    """
    regs = max(1, min(regs, srs.n // (epochs + 2)))
    sim = Simulation(srs, ppol=True, seed=seed, provider_cls=MaliciousProvider,
                     update_frac=update_frac, regs_per_epoch=regs)
    history = []
    for _ in range(epochs):
        rec, bundle, verdicts = sim.step()
        if not all_pass(verdicts):
            raise RuntimeError("honest base run failed verification")
        history.append(rec)
    return sim, history


def run_scenario(name, base, history, rng):
    """Inject `name` into a copy of the base run.  Returns (detected, caught_by)."""
    from .. import wire

    sim = clone_simulation(base, rng)
    P = sim.provider
    E = P.epoch
    registered, updated = [], []
    eligible = sim.eligible()

    # a little honest traffic around the fault
    honest = rng.sample(eligible, min(len(eligible), rng.randrange(0, 4)))

    if name in ("otb-zeroing", "unsigned-update"):
        funded = [i for i in eligible if P.values[i]]
        victim = rng.choice(funded) if funded and name == "otb-zeroing" else rng.choice(eligible)
        honest = [i for i in honest if i != victim]
        if name == "otb-zeroing":
            delta = -P.values[victim]
        else:
            delta = rng.randrange(1, 1 << 32) * rng.choice((1, -1))
            if P.values[victim] + delta < 0:
                delta = -P.values[victim] or 1
        variant = rng.choice(("epoch", "none", "cumulative", "fake-sig"))
        P.forge_delta(victim, delta, rng.randrange(R) if rng.random() < 0.5 else 0,
                      sigma="epoch" if variant == "fake-sig" else variant,
                      include_apk=variant == "fake-sig", fake_sig=variant == "fake-sig")
    elif name == "replay":
        old = [wire.decode_update(u) for rec in history for u in rec.updates]
        upd = rng.choice(old)
        honest = [i for i in honest if i != upd.index]
        P.replay_update(upd)
    elif name == "key-removal":
        victim = rng.choice(sorted(P.records))
        P.remove_key(victim, with_tree=rng.random() < 0.5)
    elif name == "omitted-update":
        victim = rng.choice(eligible)
        honest = [i for i in honest if i != victim]
        P.accept_but_omit(sim.sign(victim), rng.choice(("stale", "absent")))
        updated.append(victim)
    elif name == "nonzero-registration":
        (u,) = sim.register(1)
        registered.append(u.index)
        P.forge_delta(u.index, rng.randrange(1, 1 << 32),
                      sigma=rng.choice(("epoch", "none", "cumulative")))
    elif name == "key-substitution":
        slot = P.next_slot()
        victim = User(sim.srs, slot, rng)
        own = User(sim.srs, slot, rng)
        P.force_add_pk(own.helpers)
        sim.users[slot] = victim
        registered.append(slot)
    else:
        raise ValueError(f"unknown scenario {name!r}")

    for i in honest:
        upd = sim.sign(i)
        P.update_db(upd)
        updated.append(i)
    bundle = P.publish()
    verdicts = sim.check(bundle, registered, updated)
    caught = [f"auditor:{k}" for k, v in verdicts["auditor"].items() if not v]
    caught += [f"user{i}:{k}" for i, checks in verdicts["users"].items()
               for k, v in checks.items() if not v]
    return not all_pass(verdicts), caught


def run_trials(name, srs, trials, seed=0, base=None):
    """Detection rate of one scenario over seeded randomized trials."""
    if base is None:
        base = base_run(srs, seed)
    sim, history = base
    detected = 0
    results = []
    for t in range(trials):
        ok, caught = run_scenario(name, sim, history, random.Random(f"{seed}/{name}/{t}"))
        expected = EXPECTED[name]
        hit = ok and any(c.startswith(expected) for c in caught)
        detected += hit
        results.append((hit, caught))
    return detected, results
