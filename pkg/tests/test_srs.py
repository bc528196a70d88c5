import random

import pytest

from ppol import curve
from ppol.curve import R
from ppol.srs import SRS, check_range_capacity, setup, verify_structure


def test_families_match_trapdoor(srs8):
    t = srs8.trapdoor
    n = srs8.n
    g1, g2 = curve.g1(), curve.g2()
    lag = srs8.domain.lagrange_evals(t.tau)
    assert srs8.h1 == curve.mul(g1, t.eta) and srs8.h2 == curve.mul(g2, t.eta)
    assert srs8.powers_g1 == [curve.mul(g1, pow(t.tau, k, R)) for k in range(n)]
    assert srs8.powers_g2 == [curve.mul(g2, pow(t.tau, k, R)) for k in range(n + 1)]
    assert srs8.lagrange_g2 == [curve.mul(g2, l) for l in lag]
    assert srs8.lagrange_h1 == [curve.mul(g1, l * t.eta % R) for l in lag]
    tinv = pow(t.tau, R - 2, R)
    assert srs8.sum_quotient_g1 == [curve.mul(g1, (l - srs8.domain.inv_n) * tinv % R) for l in lag]
    z = pow(t.tau, n, R) - 1
    assert srs8.vanishing_g2 == curve.mul(g2, z)
    assert srs8.vanishing_h1 == curve.mul(g1, z * t.eta % R)


def test_lagrange_proof_rows_agree(srs8):
    # closed form (trapdoor) against the MSM over powers
    for i in (0, 3, 7):
        assert srs8.lagrange_proof(i, "g1") == srs8._lproof_row_msm(i, "g1")
        assert srs8.lagrange_proof(i, "g2") == srs8._lproof_row_msm(i, "g2")


def test_setup_is_deterministic():
    a, _ = setup(8, seed=9, insecure=True)
    b, _ = setup(8, seed=9, insecure=True)
    assert a.to_bytes() == b.to_bytes()


def test_setup_guards():
    with pytest.raises(ValueError):
        setup(8)
    with pytest.raises(ValueError):
        setup(7, insecure=True)
    with pytest.raises(ValueError):
        setup(1, insecure=True)


def test_range_capacity():
    check_range_capacity(1 << 20)
    with pytest.raises(ValueError):
        check_range_capacity(2, bits=254)


def test_trapdoor_not_in_repr(srs8):
    assert str(srs8.trapdoor.tau) not in repr(srs8.trapdoor)


def test_serialization_roundtrip(srs8, tmp_path):
    p = tmp_path / "srs.bin"
    srs8.save(p, include_lagrange_proofs=True)
    loaded = SRS.load(p)
    assert loaded.trapdoor is None
    assert loaded.to_bytes() == srs8.to_bytes()
    assert loaded.lagrange_proof(5, "h1") == srs8.lagrange_proof(5, "h1")
    assert loaded.lagrange_g2 == srs8.lagrange_g2


def test_loaded_without_tables_falls_back_to_msm(srs8):
    loaded = SRS.from_bytes(srs8.to_bytes())
    assert loaded.lagrange_proof(6, "g1") == srs8.lagrange_proof(6, "g1")


def test_corrupt_file_rejected(srs8):
    data = bytearray(srs8.to_bytes())
    with pytest.raises(ValueError):
        SRS.from_bytes(bytes(data[:-10]))
    data[:4] = b"XXXX"
    with pytest.raises(ValueError):
        SRS.from_bytes(bytes(data))


def test_verify_structure(srs8):
    assert verify_structure(srs8, random.Random(1))
    bad = SRS.from_bytes(srs8.to_bytes())
    bad.powers_g1[3] = bad.powers_g1[3] + bad.g1
    assert not verify_structure(bad, random.Random(1))
    bad = SRS.from_bytes(srs8.to_bytes())
    bad.lagrange_h2[2] = bad.lagrange_h2[1]
    assert not verify_structure(bad, random.Random(1))


def test_quotient_base(srs8):
    t = srs8.trapdoor.tau
    n = srs8.n
    lag = srs8.domain.lagrange_evals(t)
    z_inv = pow(pow(t, n, R) - 1, R - 2, R)
    assert srs8.quotient_base(1, 5) == curve.mul(srs8.g2, lag[1] * lag[5] * z_inv % R)
    assert srs8.quotient_base(2, 2) == curve.mul(srs8.g2, (lag[2] ** 2 - lag[2]) * z_inv % R)
