import csv
import io
import json
import random

import pytest

from ppol import cli
from ppol.domain import perm
from ppol.harness import attacks, bench
from ppol.harness.transcript import Transcript
from ppol.harness.workload import CapacityError, all_pass, replay, simulate
from ppol.pvc import Provider, User


def test_transcript_is_deterministic(srs8):
    a = simulate(srs8, 3, 0.5, 2, seed=11)
    b = simulate(srs8, 3, 0.5, 2, seed=11)
    c = simulate(srs8, 3, 0.5, 2, seed=12)
    assert a.to_bytes() == b.to_bytes()
    assert a.to_bytes() != c.to_bytes()


def test_zero_epochs_is_header_only(srs8):
    t = simulate(srs8, 0, seed=1)
    back = Transcript.from_bytes(t.to_bytes())
    assert back.epochs == [] and back.header["epochs"] == 0
    assert replay(srs8, back) == []


def test_zero_update_fraction(srs8):
    t = simulate(srs8, 2, 0.0, 2, seed=1)
    assert all(rec.updates == [] for rec in t.epochs)
    assert all(all_pass(v) for v in t.verdicts)


def test_capacity_and_fraction_errors(srs8):
    with pytest.raises(CapacityError):
        simulate(srs8, 3, 0.5, 3, seed=1)
    with pytest.raises(ValueError):
        simulate(srs8, 1, 1.5, 1, seed=1)


def test_transcript_roundtrip_and_truncation(srs8, tmp_path):
    t = simulate(srs8, 2, 0.5, 2, seed=3)
    path = t.save(tmp_path / "run")
    back = Transcript.load(tmp_path / "run")
    assert back.to_bytes() == t.to_bytes()
    assert back.verdicts == json.loads(json.dumps(t.verdicts))
    data = path.read_bytes()
    with pytest.raises(ValueError):
        Transcript.from_bytes(data[:-3])


def test_replay_reproduces_verdicts(srs16):
    t = simulate(srs16, 3, 0.5, 4, seed=5)
    again = replay(srs16, Transcript.from_bytes(t.to_bytes()))
    assert [v["epoch"] for v in again] == [1, 2, 3]
    for orig, now in zip(t.verdicts, again):
        assert orig["auditor"] == now["auditor"]
        assert orig["users"] == now["users"]
        assert all_pass(now)


def test_replay_user_role_limited_to_own_epochs(srs8):
    t = simulate(srs8, 3, 1.0, 2, seed=2)
    out = replay(srs8, t, role=0)
    # slot 0 registers in epoch 1 and, with fraction 1, updates in 2 and 3
    assert [v["epoch"] for v in out] == [1, 2, 3]
    assert all("auditor" not in v and set(v["users"]) == {"0"} for v in out)
    late = replay(srs8, t, role=perm(2, 3))  # FFT position 2 joins in epoch 2
    assert [v["epoch"] for v in late] == [2, 3]


def test_replay_rejects_other_srs(srs8, srs16):
    t = simulate(srs8, 1, seed=1)
    with pytest.raises(ValueError):
        replay(srs16, t)


def test_tampered_transcript_fails_replay(srs8):
    t = simulate(srs8, 2, 1.0, 2, seed=4)
    raw = bytearray(t.epochs[1].updates[0])
    raw[12] ^= 1  # inside the delta field
    t.epochs[1].updates[0] = bytes(raw)
    out = replay(srs8, t)
    assert not all_pass(out[1])


def test_simulator_bundles_verify(srs8):
    real = simulate(srs8, 3, 0.5, 2, seed=6, value_seed=1)
    fake = simulate(srs8, 3, 0.5, 2, seed=6, value_seed=1, simulator=True)
    assert all(all_pass(v) for v in fake.verdicts)
    assert real.to_bytes() != fake.to_bytes()
    assert all(all_pass(v) for v in replay(srs8, fake))


def test_bulk_register_matches_sequential(srs8):
    rng = random.Random(8)
    sks = [rng.randrange(1, 1 << 200) for _ in range(5)]
    seq = Provider(srs8, rng=random.Random(1))
    for sk in sks:
        seq.add_pk(User(srs8, seq.next_slot(), sk=sk).helpers)
    bulk = Provider(srs8, rng=random.Random(1))
    bench.bulk_register(bulk, sks)
    for name in ("key_com", "key_tree", "q_cols", "q_cols_h", "key_com_epoch",
                 "key_tree_epoch", "joined", "registered_epoch"):
        assert getattr(bulk, name) == getattr(seq, name), name
    assert bulk.records.keys() == seq.records.keys()
    for i, rec in seq.records.items():
        assert bulk.records[i] == rec


def test_bench_smoke(srs16):
    rows = bench.run(16, updates_per_epoch=2, repetitions=2, srs=srs16)
    phases = [r["phase"] for r in rows]
    assert phases == ["keygen", "registration", "update", "publish", "verify_auditor",
                      "verify_user"]
    text = bench.to_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert list(parsed[0]) == list(bench.COLUMNS)
    assert all(float(r["wall_time_s"]) > 0 for r in parsed)


@pytest.mark.parametrize("name", attacks.SCENARIOS)
def test_attack_detected_by_expected_verifier(srs16, name):
    base = attacks.base_run(srs16, seed=1, regs=6)
    detected, results = attacks.run_trials(name, srs16, 3, seed=1, base=base)
    assert detected == 3, results


def test_cli_setup_deterministic(tmp_path):
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    assert cli.main(["setup", "--n", "8", "--seed", "3", "--out", str(a)]) == 0
    assert cli.main(["setup", "--n", "8", "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_setup_rejects_non_power_of_two(tmp_path):
    with pytest.raises(SystemExit) as e:
        cli.main(["setup", "--n", "7", "--out", str(tmp_path / "x.bin")])
    assert e.value.code not in (0, None)


def test_cli_simulate_and_verify(tmp_path, capsys):
    srs_path = tmp_path / "srs.bin"
    out = tmp_path / "run"
    assert cli.main(["setup", "--n", "8", "--seed", "2", "--out", str(srs_path)]) == 0
    assert cli.main(["simulate", "--n", "8", "--epochs", "2", "--update-frac", "0.5",
                     "--regs-per-epoch", "2", "--seed", "4", "--srs", str(srs_path),
                     "--out", str(out)]) == 0
    assert (out / "transcript.bin").exists() and (out / "index.json").exists()
    capsys.readouterr()
    assert cli.main(["verify", str(out), "--srs", str(srs_path)]) == 0
    assert "all checks passed" in capsys.readouterr().out
    assert cli.main(["verify", str(out), "--srs", str(srs_path), "--role", "user:0"]) == 0
    assert "auditor." not in capsys.readouterr().out
    assert cli.main(["verify", str(out), "--srs", str(srs_path), "--role", "auditor"]) == 0


def test_cli_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("PPOL_N", "4")
    out = tmp_path / "e.bin"
    assert cli.main(["setup", "--out", str(out)]) == 0
    from ppol.srs import SRS
    assert SRS.load(out).n == 4


def test_cli_attack_and_bench(tmp_path, capsys):
    assert cli.main(["attack", "--scenario", "replay", "--n", "16", "--trials", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["detected"] == 2 and report["expected_verifier"] == "auditor"
    with pytest.raises(SystemExit):
        cli.main(["attack", "--scenario", "nope"])
    out = tmp_path / "b.csv"
    assert cli.main(["bench", "--n", "16", "--updates", "1", "--reps", "1",
                     "--out", str(out)]) == 0
    assert out.read_text().startswith("phase,n,wall_time_s,ops_per_s,proof_bytes")
