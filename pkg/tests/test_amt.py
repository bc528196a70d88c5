import pytest

from ppol import curve
from ppol.amt import (Commitment, ProofTree, amt_verify, build_tree, claimed_g1, claimed_g2,
                      commit, path_indices)
from ppol.curve import R


def field_commit(srs, values):
    lag = srs.domain.lagrange_evals(srs.trapdoor.tau)
    return sum(v * l for v, l in zip(values, lag)) % R


def test_commit_matches_trapdoor(srs8, rng):
    vals = [rng.randrange(R) for _ in range(8)]
    masks = [rng.randrange(R) for _ in range(8)]
    c = commit(srs8, vals, "g2", masks)
    eta = srs8.trapdoor.eta
    assert c.point == curve.mul(srs8.g2, (field_commit(srs8, vals) + eta * field_commit(srs8, masks)) % R)
    assert c.masked and c.group == "g2"
    with pytest.raises(ValueError):
        commit(srs8, vals[:3])


def test_zero_vector():
    from conftest import test_srs
    srs = test_srs(4)
    tree = build_tree(srs, [0] * 4)
    com = commit(srs, [0] * 4)
    assert com.point == curve.zero_g1()
    assert all(p == curve.zero_g1() for p in tree.nodes)
    assert amt_verify(srs, com, 2, claimed_g1(srs, 0), tree.open(2))


@pytest.mark.parametrize("role", ["g1", "g2"])
def test_openings_verify(srs8, rng, role):
    vals = [rng.randrange(1 << 40) for _ in range(8)]
    masks = [rng.randrange(R) for _ in range(8)]
    com = commit(srs8, vals, role, masks)
    tree = build_tree(srs8, vals, "g1", masks)
    for i in range(8):
        claimed = (curve.mul(srs8.g1, vals[i]) + curve.mul(srs8.h1, masks[i]) if role == "g1"
                   else claimed_g2(srs8, vals[i], masks[i]))
        assert amt_verify(srs8, com, i, claimed, tree.open(i))
        wrong = (claimed + srs8.g1) if role == "g1" else (claimed + srs8.g2)
        assert not amt_verify(srs8, com, i, wrong, tree.open(i))
    assert not amt_verify(srs8, com, 2, claimed_g2(srs8, vals[3], masks[3]) if role == "g2" else
                          curve.mul(srs8.g1, vals[3]) + curve.mul(srs8.h1, masks[3]), tree.open(3))


def test_single_entry_vector(srs8):
    # value 5 at index 3 only: every other index opens to zero
    vals = [0] * 8
    vals[3] = 5
    com = commit(srs8, vals)
    tree = build_tree(srs8, vals)
    for i in range(8):
        assert amt_verify(srs8, com, i, claimed_g1(srs8, vals[i]), tree.open(i))


def test_proof_size_is_log_n(srs16):
    tree = ProofTree(16)
    assert all(len(tree.open(i)) == 4 for i in range(16))


def test_maintain_matches_rebuild(srs8, rng):
    vals = [0] * 8
    masks = [0] * 8
    tree = ProofTree(8)
    for _ in range(12):
        i = rng.randrange(8)
        d, e = rng.randrange(R), rng.randrange(R)
        vals[i] = (vals[i] + d) % R
        masks[i] = (masks[i] + e) % R
        tree.maintain(srs8, i, d, e)
    assert tree == build_tree(srs8, vals, "g1", masks)


def test_paths_share_nodes_by_residue():
    # i and i + n/2 share the whole path; i and i ^ 1 share only the root level
    log_n = 4
    for i in range(8):
        assert path_indices(log_n, i) == path_indices(log_n, i + 8)
        a, b = path_indices(log_n, i), path_indices(log_n, i ^ 1)
        assert a[-1] == b[-1] and all(x != y for x, y in zip(a[:-1], b[:-1]))


def test_open_out_of_range():
    with pytest.raises(ValueError):
        ProofTree(8).open(8)


def test_commitment_addition(srs8):
    a = commit(srs8, [1] * 8)
    b = commit(srs8, [2] * 8)
    assert (a + b).point == commit(srs8, [3] * 8).point
    with pytest.raises(ValueError):
        a + Commitment(srs8.g2, "g2")
