import random
from dataclasses import replace

import pytest

from ppol import curve
from ppol.curve import R
from ppol.liabilities import (SumProof, decompose, prove_bits, range_prove, range_verify,
                              sum_update, sum_verify)


def masked_db(srs, values, masks):
    com = curve.msm("g2", srs.lagrange_g2, values) + curve.msm("g2", srs.lagrange_h2, masks)
    mask_com = curve.msm("g2", srs.lagrange_g2, masks)
    return com, mask_com


def run_sum(srs, values, masks):
    p = SumProof.empty()
    for i, (v, m) in enumerate(zip(values, masks)):
        if v or m:
            p = sum_update(p, i, v, m, srs)
    return p


def test_sum_zero_database(srs4):
    com, _ = masked_db(srs4, [0] * 4, [0] * 4)
    p = SumProof.empty()
    assert p.T == curve.zero_g2() and p.S == curve.zero_g1()
    assert sum_verify(srs4, com, p)


def test_sum_small_example(srs4):
    values, masks = [5, 7, 0, 0], [0] * 4
    com, _ = masked_db(srs4, values, masks)
    p = run_sum(srs4, values, masks)
    assert p.T == curve.mul(srs4.g2, 12)
    assert sum_verify(srs4, com, p)


def test_sum_random(srs8, rng):
    values = [rng.randrange(1 << 40) for _ in range(8)]
    masks = [rng.randrange(R) for _ in range(8)]
    com, _ = masked_db(srs8, values, masks)
    p = run_sum(srs8, values, masks)
    assert p.T == curve.mul(srs8.g2, sum(values)) + curve.mul(srs8.h2, sum(masks) % R)
    assert sum_verify(srs8, com, p)
    assert not sum_verify(srs8, com, replace(p, T=p.T + srs8.g2))
    assert not sum_verify(srs8, com, replace(p, S=p.S + srs8.g1))


def test_sum_needs_mask_term(srs8, rng):
    # dropping the h-side increment of S breaks the check on a masked commitment
    values = [rng.randrange(100) for _ in range(8)]
    masks = [rng.randrange(R) for _ in range(8)]
    com, _ = masked_db(srs8, values, masks)
    p = run_sum(srs8, values, masks)
    only_g = curve.msm("g1", srs8.sum_quotient_g1, values)
    assert not sum_verify(srs8, com, replace(p, S=only_g))


def test_decompose():
    bits = decompose([5, 0, (1 << 64) - 1], 64)
    assert [b[0] for b in bits[:4]] == [1, 0, 1, 0]
    assert all(b[2] == 1 for b in bits)
    assert sum(b[0] << k for k, b in enumerate(bits)) == 5
    with pytest.raises(ValueError):
        decompose([1 << 64])
    with pytest.raises(ValueError):
        decompose([-1])


@pytest.mark.parametrize("values", [[0] * 8, [(1 << 64) - 1] + [0] * 7,
                                    [3, 1 << 63, 77, 0, 12345678901234, 1, 2, 9]])
def test_range_honest(srs8, values):
    rng = random.Random(3)
    masks = [rng.randrange(R) for _ in range(8)]
    com, mask_com = masked_db(srs8, values, masks)
    proof = range_prove(srs8, values, mask_com, com, 4, rng)
    assert range_verify(srs8, com, proof, 4)
    assert not range_verify(srs8, com, proof, 5)


def test_range_rejects_tampering(srs8):
    rng = random.Random(4)
    values = [rng.randrange(1 << 64) for _ in range(8)]
    masks = [rng.randrange(R) for _ in range(8)]
    com, mask_com = masked_db(srs8, values, masks)
    proof = range_prove(srs8, values, mask_com, com, 1, rng)
    C = list(proof.C)
    C[0], C[1] = C[1], C[0]
    assert not range_verify(srs8, com, replace(proof, C=C), 1)
    assert not range_verify(srs8, com, replace(proof, M_star=proof.M_star + srs8.g1), 1)
    assert not range_verify(srs8, com, replace(proof, W=proof.W + srs8.g1), 1)
    assert not range_verify(srs8, com, replace(proof, rho_star=proof.rho_star + srs8.g2), 1)
    assert not range_verify(srs8, com, replace(proof, C=proof.C[:-1], C_hat=proof.C_hat[:-1]), 1)
    other, _ = masked_db(srs8, [v + 1 for v in values], masks)
    assert not range_verify(srs8, other, proof, 1)


def test_range_prover_refuses_out_of_range(srs4):
    with pytest.raises(ValueError):
        range_prove(srs4, [1 << 64, 0, 0, 0], curve.zero_g2(), curve.zero_g2(), 1)


def non_binary_bits(values, rng, bits=64):
    """Valid recomposition, but bit k at one position is 2 or 3."""
    vecs = decompose(values, bits)
    m = rng.randrange(len(values))
    k = rng.randrange(bits - 1)
    vecs[k][m] += 2
    vecs[k + 1][m] -= 1
    return [[b % R for b in v] for v in vecs]


def test_non_binary_bit_rejected(srs8):
    rng = random.Random(5)
    values = [rng.randrange(1 << 40) for _ in range(8)]
    masks = [rng.randrange(R) for _ in range(8)]
    com, mask_com = masked_db(srs8, values, masks)
    vecs = non_binary_bits(values, rng)
    proof = prove_bits(srs8, vecs, mask_com, com, 2, rng, check=False)
    assert not range_verify(srs8, com, proof, 2)
