"""Seeded multi-epoch workloads and transcript replay."""

import copy
import hashlib
import random

from .. import wire
from ..apk import HelperValues
from ..curve import R
from ..liabilities import RANGE_BITS
from ..pvc import Auditor, Provider, User
from .transcript import EpochRecord, Transcript

MAX_DEPOSIT = 1 << 32


class CapacityError(ValueError):
    pass


def srs_digest(srs):
    return hashlib.sha256(srs.to_bytes()).hexdigest()


def streams(seed, value_seed=None):
    """(activity, values, crypto) generators.

    With a seed everything is reproducible; activity depends on the seed
    alone so runs that differ only in value_seed share their activity pattern.
    """
    if seed is None:
        sysrng = random.SystemRandom()
        return sysrng, sysrng, sysrng
    vs = seed if value_seed is None else value_seed
    return (random.Random(f"{seed}/activity"), random.Random(f"{seed}/values/{vs}"),
            random.Random(f"{seed}/crypto/{vs}"))


def draw_delta(rng, balance):
    """Deposit or withdrawal keeping the balance in [0, 2^64)."""
    d = rng.randrange(-balance, MAX_DEPOSIT)
    if balance + d >= 1 << RANGE_BITS:
        d = -balance
    return d % R


def user_checks(user, bundle, registered, updated):
    out = {}
    i = user.index
    if registered:
        out["verify_pk"] = (i in bundle.key_inclusion and i in bundle.inclusion
                            and user.verify_pk(bundle.key_com, bundle.key_inclusion[i],
                                               bundle.inclusion[i], bundle.db_com))
    if updated:
        out["verify_lookup"] = i in bundle.inclusion and user.verify_lookup(
            bundle.db_com, bundle.inclusion[i])
    return out


class Simulation:
    """One provider, one auditor and the registered users, driven epoch by epoch."""

    def __init__(self, srs, ppol=True, seed=None, value_seed=None, provider_cls=Provider,
                 update_frac=0.25, regs_per_epoch=4):
        self.srs = srs
        self.ppol = ppol
        self.act, self.val, self.crypto = streams(seed, value_seed)
        self.provider = provider_cls(srs, ppol=ppol, rng=self.crypto)
        self.auditor = Auditor(srs, ppol=ppol, rng=self.crypto)
        self.users = {}
        self.update_frac = update_frac
        self.regs_per_epoch = regs_per_epoch

    def clone(self, rng=None):
        """Independent copy of provider, auditor and users.

        With `rng` the copy draws all further randomness from it.
        """
        other = copy.copy(self)
        other.provider = self.provider.clone()
        other.auditor = copy.copy(self.auditor)
        other.users = {}
        for i, u in self.users.items():
            c = copy.copy(u)
            c._signed_epochs = set(u._signed_epochs)
            other.users[i] = c
        if rng is not None:
            other.act = other.val = other.crypto = rng
            other.provider._rng = other.auditor._rng = rng
            for u in other.users.values():
                u._rng = rng
        return other

    def register(self, count):
        fresh = []
        for _ in range(count):
            slot = self.provider.next_slot()
            if slot is None:
                raise CapacityError("no free key slot")
            u = User(self.srs, slot, self.crypto)
            self.provider.add_pk(u.helpers)
            u.registered = True
            self.users[slot] = u
            fresh.append(u)
        return fresh

    def eligible(self):
        E = self.provider.epoch
        return sorted(i for i, e in self.provider.registered_epoch.items() if e < E)

    def pick_updaters(self):
        el = self.eligible()
        k = round(self.update_frac * len(el))
        return sorted(self.act.sample(el, k))

    def sign(self, i, delta=None):
        u = self.users[i]
        if delta is None:
            delta = draw_delta(self.val, u.value)
        return u.sign_update(self.provider.epoch, delta)

    def step(self, regs=None, updaters=None):
        """Run one epoch; returns (record, bundle, verdicts, regs, updates)."""
        E = self.provider.epoch
        fresh = self.register(self.regs_per_epoch if regs is None else regs)
        updaters = self.pick_updaters() if updaters is None else updaters
        updates = []
        for i in updaters:
            upd = self.sign(i)
            self.provider.update_db(upd)
            updates.append(upd)
        bundle = self.provider.publish()
        verdicts = self.check(bundle, [u.index for u in fresh], [u.index for u in updates])
        rec = EpochRecord(E, [u.helpers.to_bytes() for u in fresh],
                          [wire.encode_update(u) for u in updates],
                          wire.encode_bundle(bundle, self.srs.log_n))
        return rec, bundle, verdicts

    def check(self, bundle, registered, updated):
        verdicts = {"auditor": self.auditor.verify_epoch(bundle), "users": {}}
        for i in sorted(set(registered) | set(updated)):
            verdicts["users"][str(i)] = user_checks(self.users[i], bundle, i in registered,
                                                    i in updated)
        return verdicts


def all_pass(verdicts):
    return all(verdicts["auditor"].values()) and all(
        v for checks in verdicts["users"].values() for v in checks.values())


def simulate(srs, epochs, update_frac=0.25, regs_per_epoch=4, seed=None, ppol=True,
             value_seed=None, simulator=False):
    """Run an honest workload and return its Transcript.

    `simulator=True` replaces every balance change with a dummy value drawn
    independently of the workload (the simulator of the privacy argument).
    """
    if epochs * regs_per_epoch > srs.n:
        raise CapacityError(f"{epochs * regs_per_epoch} registrations exceed n = {srs.n}")
    if not 0 <= update_frac <= 1:
        raise ValueError("update fraction must lie in [0, 1]")
    if simulator:
        value_seed = f"sim/{value_seed}"
    sim = Simulation(srs, ppol, seed, value_seed, update_frac=update_frac,
                     regs_per_epoch=regs_per_epoch)
    header = {"n": srs.n, "m": RANGE_BITS, "mode": "ppol" if ppol else "pvc",
              "srs_sha256": srs_digest(srs), "epochs": epochs, "update_frac": update_frac,
              "regs_per_epoch": regs_per_epoch, "seed": seed, "simulator": simulator}
    t = Transcript(header)
    for _ in range(epochs):
        rec, _, verdicts = sim.step()
        t.epochs.append(rec)
        t.verdicts.append(verdicts)
    return t


class ReplayUser(User):
    """A user reconstructed from transcript records: public key plus the
    running (value, mask) implied by its own signed updates."""

    def __init__(self, srs, helpers):
        self.srs = srs
        self.index = helpers.index
        self.helpers = helpers
        self.pk = helpers.pk
        self.value = 0
        self.mask = 0


def replay(srs, transcript, role="all"):
    """Re-verify a transcript with fresh verifiers.

    role is "auditor", "all", or an int user index.  Returns per-epoch verdicts
    in the same shape as simulate records them; a user role only reports
    epochs where that user acted.
    """
    h = transcript.header
    if h.get("n") != srs.n:
        raise ValueError(f"transcript is for n = {h.get('n')}, SRS has n = {srs.n}")
    if h.get("srs_sha256") not in (None, srs_digest(srs)):
        raise ValueError("transcript was produced with a different SRS")
    ppol = h.get("mode", "ppol") == "ppol"
    auditor = Auditor(srs, ppol=ppol)
    users = {}
    out = []
    for rec in transcript.epochs:
        bundle = wire.decode_bundle(rec.bundle)
        registered, updated = [], []
        for raw in rec.registrations:
            hv = HelperValues.from_bytes(raw, srs.n)
            users[hv.index] = ReplayUser(srs, hv)
            registered.append(hv.index)
        for raw in rec.updates:
            upd = wire.decode_update(raw)
            u = users.get(upd.index)
            if u is None:
                raise ValueError(f"update for unregistered index {upd.index}")
            u.value = (u.value + upd.delta) % R
            u.mask = (u.mask + upd.epsilon) % R
            updated.append(upd.index)
        v = {"epoch": rec.epoch, "users": {}}
        if role in ("all", "auditor"):
            v["auditor"] = auditor.verify_epoch(bundle)
        for i in sorted(set(registered) | set(updated)):
            if role == "all" or role == i:
                v["users"][str(i)] = user_checks(users[i], bundle, i in registered, i in updated)
        if role in ("all", "auditor") or v["users"]:
            out.append(v)
    return out
