"""Permissioned vector commitment: provider, user and auditor.

Epoch flow: users register (AddPK) and sign updates (UpdateDB) during epoch
E; Publish closes E.  The auditor first checks the key-table append proof,
then checks the database proof against the updated key commitment.  A key
registered in epoch E may sign updates from epoch E + 1 on.
"""

import random
from dataclasses import dataclass, field

from . import curve
from .amt import Commitment, ProofTree, amt_verify, claimed_g1, claimed_g2
from .apk import (ApkAccumulator, ApkProof, HelperVerifier, KeyRecord, accumulate,
                  apk_equations, batch_check, finalize, keygen)
from .append import AppendProof, make_append_proof, verify_append
from .curve import R
from .domain import perm
from .hashing import hash_epoch
from . import liabilities

_system_rng = random.SystemRandom()


class ProtocolError(ValueError):
    """A request the provider (or a user) refuses; state is left untouched."""


@dataclass(frozen=True)
class SignedUpdate:
    index: int
    epoch: int
    delta: int
    epsilon: int
    sig: object


def entry_delta(srs, i, delta, epsilon):
    """delta l_i(tau) g2 + epsilon l_i(tau) h2: the change to dbCom*."""
    return curve.mul(srs.lagrange_g2[i], delta) + curve.mul(srs.lagrange_h2[i], epsilon)


def signing_base(srs, i, epoch, delta, epsilon, entry=None):
    """H(E) + delta l_i(tau) g2 + epsilon l_i(tau) h2."""
    if entry is None:
        entry = entry_delta(srs, i, delta, epsilon)
    return hash_epoch(epoch) + entry


def sign(sk, i, epoch, delta, epsilon, srs):
    return curve.mul(signing_base(srs, i, epoch, delta, epsilon), sk)


def verify_sig(srs, i, epoch, pk, upd, entry=None):
    if upd.index != i or not 0 <= i < srs.n:
        return False
    base = signing_base(srs, i, epoch, upd.delta, upd.epsilon, entry)
    return curve.pairing_check([(srs.g1, upd.sig), (-pk, base)])


@dataclass
class DbProof:
    sigma_epoch: object  # Delta_C
    sig_epoch: object  # sigma_E
    apk: object
    apk_proof: ApkProof
    zerocheck: object  # Q


@dataclass
class EpochBundle:
    epoch: int
    db_com: object
    key_com: object
    db_proof: DbProof
    key_proof: AppendProof
    inclusion: dict  # index -> OpeningProof on db_com
    key_inclusion: dict  # index -> OpeningProof on key_com
    range_proof: object = None
    sum_proof: object = None


class User:
    def __init__(self, srs, index, rng=None, sk=None):
        self.srs = srs
        self.index = index
        self._rng = rng or _system_rng
        if sk is None:
            self.sk, self.helpers = keygen(index, srs, self._rng)
        else:
            from .apk import helpers_for
            self.sk, self.helpers = sk, helpers_for(sk, index, srs)
        self.pk = self.helpers.pk
        self.value = 0
        self.mask = 0
        self.registered = False
        self._signed_epochs = set()

    def sign_update(self, epoch, delta):
        if epoch in self._signed_epochs:
            raise ProtocolError(f"user {self.index} already signed in epoch {epoch}")
        eps = self._rng.randrange(R)
        delta %= R
        sig = sign(self.sk, self.index, epoch, delta, eps, self.srs)
        self._signed_epochs.add(epoch)
        self.mask = (self.mask + eps) % R
        self.value = (self.value + delta) % R
        return SignedUpdate(self.index, epoch, delta, eps, sig)

    def verify_pk(self, key_com, key_inclusion, db_inclusion, db_com):
        srs = self.srs
        ok = amt_verify(srs, Commitment(key_com, "g1"), self.index, self.pk, key_inclusion)
        ok = ok and amt_verify(srs, Commitment(db_com, "g2", True), self.index,
                               curve.zero_g2(), db_inclusion)
        return ok

    def verify_lookup(self, db_com, proof):
        return amt_verify(self.srs, Commitment(db_com, "g2", True), self.index,
                          claimed_g2(self.srs, self.value, self.mask), proof)


def _allow_all(i, delta):
    return True


class Provider:
    def __init__(self, srs, ppol=True, rng=None, policy=None, helper_verifier=None):
        self.srs = srs
        self.n = n = srs.n
        self.log_n = srs.log_n
        self.ppol = ppol
        self._rng = rng or _system_rng
        self.policy = policy or _allow_all
        self.verifier = helper_verifier or HelperVerifier(srs, self._rng)
        z1, z2 = curve.zero_g1(), curve.zero_g2()
        self.epoch = 1
        self.values = [0] * n
        self.masks = [0] * n
        self.db_com = z2
        self.db_tree = ProofTree(n)
        self.key_com = z1
        self.key_tree = ProofTree(n)
        self.key_com_epoch = z1
        self.key_tree_epoch = ProofTree(n)
        self.sigma = z1
        self.sigma_epoch = z1
        self.zerocheck = z1
        self.q_cols = [z1] * n
        self.q_cols_h = [z1] * n
        self.acc = ApkAccumulator.empty()
        self.sig_epoch = z2
        self.joined = []
        self.records = {}
        self.registered_epoch = {}
        self.split_pos = 0
        self.path_old = self.key_tree.open(0)
        self.sum_proof = liabilities.SumProof.empty()
        self.mask_com = z2

    # -- registration -----------------------------------------------------

    def next_slot(self):
        pos = self.split_pos + len(self.joined)
        if pos >= self.n:
            return None
        return perm(pos, self.log_n)

    def add_pk(self, helpers):
        i = helpers.index
        slot = self.next_slot()
        if slot is None:
            raise ProtocolError("key table is full")
        if i != slot:
            raise ProtocolError(f"registration must use slot {slot}, got {i}")
        if not self.verifier.verify(helpers):
            raise ProtocolError(f"helper values for slot {i} failed verification")
        self._fold_key(helpers)
        self.joined.append(i)

    def _fold_key(self, h):
        i = h.index
        row, row_h = h.q_row, h.q_row_h
        self.q_cols = [c + q for c, q in zip(self.q_cols, row)]
        self.q_cols_h = [c + q for c, q in zip(self.q_cols_h, row_h)]
        # the new key multiplies existing balances: extend Q by its cross terms
        live = [m for m in range(self.n) if self.values[m] or self.masks[m]]
        if live:
            self.zerocheck = (self.zerocheck
                              + curve.msm("g1", [row[m] for m in live], [self.values[m] for m in live])
                              + curve.msm("g1", [row_h[m] for m in live], [self.masks[m] for m in live]))
        # signers already folded into T this epoch need the new key's column entry
        for m in self.acc.indices:
            self.acc.T = self.acc.T + row[m]
        self.key_com = self.key_com + h.key_lagrange
        self.key_tree.add_path(i, h.tree_helpers)
        self.key_com_epoch = self.key_com_epoch + h.key_lagrange
        self.key_tree_epoch.add_path(i, h.tree_helpers)
        self.records[i] = KeyRecord.from_helpers(h, self.srs)
        self.registered_epoch[i] = self.epoch

    # -- updates ----------------------------------------------------------

    def check_update(self, upd):
        i = upd.index
        if upd.epoch != self.epoch:
            raise ProtocolError(f"update is for epoch {upd.epoch}, current is {self.epoch}")
        rec = self.records.get(i)
        if rec is None:
            raise ProtocolError(f"index {i} is not registered")
        if self.registered_epoch[i] >= self.epoch:
            raise ProtocolError(f"index {i} registered this epoch; updates start next epoch")
        if i in self.acc.indices:
            raise ProtocolError(f"index {i} already updated in epoch {self.epoch}")
        if self.ppol and (self.values[i] + upd.delta) % R >> liabilities.RANGE_BITS:
            raise ProtocolError(f"balance of {i} would leave the provable range")
        if not self.policy(i, upd.delta):
            raise ProtocolError(f"update for {i} rejected by policy")
        entry = entry_delta(self.srs, i, upd.delta, upd.epsilon)
        if not verify_sig(self.srs, i, self.epoch, rec.pk, upd, entry):
            raise ProtocolError(f"bad signature for {i}")
        return rec, entry

    def update_db(self, upd):
        rec, entry = self.check_update(upd)
        self._apply(rec, upd, entry)

    def _apply(self, rec, upd, entry=None):
        srs = self.srs
        i, d, e = rec.index, upd.delta % R, upd.epsilon % R
        if entry is None:
            entry = entry_delta(srs, i, d, e)
        self.db_com = self.db_com + entry
        self.db_tree.maintain(srs, i, d, e)
        dsig = curve.mul(rec.key_lagrange, d) + curve.mul(rec.h_key_lagrange, e)
        self.sigma = self.sigma + dsig
        self.sigma_epoch = self.sigma_epoch + dsig
        self.zerocheck = (self.zerocheck + curve.mul(self.q_cols[i], d)
                          + curve.mul(self.q_cols_h[i], e))
        self.sig_epoch = self.sig_epoch + upd.sig
        accumulate(self.acc, srs, rec, self.q_cols[i])
        self.values[i] = (self.values[i] + d) % R
        self.masks[i] = (self.masks[i] + e) % R
        if self.ppol:
            self.sum_proof = liabilities.sum_update(self.sum_proof, i, d, e, srs)
            self.mask_com = self.mask_com + curve.mul(srs.lagrange_g2[i], e)

    # -- epoch close --------------------------------------------------------

    def split_k(self):
        return self.n if self.split_pos >= self.n else perm(self.split_pos, self.log_n)

    def publish(self):
        srs = self.srs
        apk_proof = finalize(self.acc, srs, masked=self.ppol, key_com=self.key_com, rng=self._rng)
        db_proof = DbProof(self.sigma_epoch, self.sig_epoch, self.acc.apk, apk_proof, self.zerocheck)
        key_proof = make_append_proof(self.key_com_epoch, self.split_k(), self.path_old,
                                      self.key_tree_epoch, self.n, self.log_n)
        touched = sorted(set(self.acc.indices) | set(self.joined))
        inclusion = {i: self.db_tree.open(i) for i in touched}
        key_inclusion = {i: self.key_tree.open(i) for i in self.joined}
        bundle = EpochBundle(self.epoch, self.db_com, self.key_com, db_proof, key_proof,
                             inclusion, key_inclusion)
        if self.ppol:
            bundle.range_proof = liabilities.range_prove(
                srs, self.values, self.mask_com, self.db_com, self.epoch, self._rng)
            bundle.sum_proof = self.sum_proof
        self._advance()
        return bundle

    def _advance(self):
        z1, z2 = curve.zero_g1(), curve.zero_g2()
        self.split_pos += len(self.joined)
        self.path_old = self.key_tree.open(self.split_k()) if self.split_pos < self.n else None
        self.joined = []
        self.acc = ApkAccumulator.empty()
        self.sigma_epoch = z1
        self.sig_epoch = z2
        self.key_com_epoch = z1
        self.key_tree_epoch = ProofTree(self.n)
        self.epoch += 1

    def clone(self):
        """Independent copy sharing the (immutable) SRS and group elements."""
        other = object.__new__(type(self))
        other.__dict__.update(self.__dict__)
        for name in ("values", "masks", "q_cols", "q_cols_h", "joined"):
            setattr(other, name, list(getattr(self, name)))
        for name in ("records", "registered_epoch"):
            setattr(other, name, dict(getattr(self, name)))
        for name in ("db_tree", "key_tree", "key_tree_epoch"):
            setattr(other, name, getattr(self, name).copy())
        other.acc = self.acc.copy()
        return other


class Auditor:
    def __init__(self, srs, ppol=True, rng=None):
        self.srs = srs
        self.ppol = ppol
        self.key_com = curve.zero_g1()
        self.sigma = curve.zero_g1()
        self.epoch = 0
        self._rng = rng or _system_rng

    def verify_keys(self, epoch, key_com_new, key_proof):
        ok = (epoch == self.epoch + 1
              and key_com_new == self.key_com + key_proof.key_com_epoch
              and verify_append(self.srs, self.key_com, key_proof.key_com_epoch, key_proof))
        if ok:
            self.key_com = key_com_new
        return ok

    def db_equations(self, epoch, db_com, db_proof, range_proof=None, sum_proof=None):
        """Pairing equations per named check; None marks a malformed proof."""
        srs = self.srs
        p = db_proof
        out = {}
        if self.ppol:
            out["range"] = range_proof and liabilities.range_equations(
                srs, db_com, range_proof, epoch)
        out["apk"] = apk_equations(srs, self.key_com, p.apk, p.apk_proof, masked=self.ppol)
        out["signature"] = [[
            (srs.g1, p.sig_epoch), (-p.apk, hash_epoch(epoch)), (-p.sigma_epoch, srs.g2)]]
        out["zerocheck"] = [[
            (self.key_com, db_com), (-(self.sigma + p.sigma_epoch), srs.g2),
            (-p.zerocheck, srs.vanishing_g2)]]
        if self.ppol:
            out["sum"] = sum_proof and [liabilities.sum_equation(srs, db_com, sum_proof)]
        return out

    def check_db(self, epoch, db_com, db_proof, range_proof=None, sum_proof=None):
        """Named verdicts for every database-side check of one epoch.

        All equations are first merged into one multi-pairing; only when that
        fails are the checks evaluated one by one to name the culprit.
        """
        eqs = self.db_equations(epoch, db_com, db_proof, range_proof, sum_proof)
        if all(eqs.values()):
            merged = [eq for group in eqs.values() for eq in group]
            if batch_check(merged, self._rng):
                return {name: True for name in eqs}
        return {name: bool(group) and batch_check(group, self._rng)
                for name, group in eqs.items()}

    def verify_db(self, epoch, db_com, db_proof, range_proof=None, sum_proof=None):
        if epoch != self.epoch + 1:
            return False
        ok = all(self.check_db(epoch, db_com, db_proof, range_proof, sum_proof).values())
        if ok:
            self.sigma = self.sigma + db_proof.sigma_epoch
            self.epoch = epoch
        return ok

    def verify_epoch(self, bundle):
        """Keys first, then the database against the new key commitment.

        Returns a dict of named verdicts; state advances only if all pass.
        """
        saved = (self.key_com, self.sigma, self.epoch)
        verdicts = {"keys": self.verify_keys(bundle.epoch, bundle.key_com, bundle.key_proof)}
        if not verdicts["keys"]:
            # still report database checks against the claimed key commitment
            self.key_com = bundle.key_com
        verdicts.update(self.check_db(bundle.epoch, bundle.db_com, bundle.db_proof,
                                      bundle.range_proof, bundle.sum_proof))
        if bundle.epoch != saved[2] + 1:
            verdicts["epoch"] = False
        if all(verdicts.values()):
            self.sigma = self.sigma + bundle.db_proof.sigma_epoch
            self.epoch = bundle.epoch
        else:
            self.key_com, self.sigma, self.epoch = saved
        return verdicts
