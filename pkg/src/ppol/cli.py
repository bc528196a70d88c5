"""Command line entry point: setup, simulate, verify, attack, bench.

Every flag can also come from an environment variable PPOL_<FLAG>, e.g.
PPOL_N=64 or PPOL_UPDATE_FRAC=0.25; explicit flags win.
"""

import argparse
import json
import os
import sys


def _env(name, default, cast=str):
    v = os.environ.get("PPOL_" + name.upper().replace("-", "_"))
    return default if v is None else cast(v)


def _role(text):
    if text in ("auditor", "all"):
        return text
    if text.startswith("user"):
        return int(text[4:].lstrip(":=()").rstrip(")"))
    raise argparse.ArgumentTypeError("role must be auditor, all or user:<index>")


def _parser():
    p = argparse.ArgumentParser(prog="ppol", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=_env("threads", None, int),
                   help="worker threads for MSM kernels (default: library choice)")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("setup", help="generate a test-mode SRS file")
    s.add_argument("--n", type=int, default=_env("n", 64, int))
    s.add_argument("--seed", type=int, default=_env("seed", 0, int))
    s.add_argument("--out", default=_env("out", "srs.bin"))
    s.add_argument("--lagrange-proofs", action="store_true",
                   help="include the per-index AMT tables for update maintenance")

    s = sub.add_parser("simulate", help="run an honest workload and write a transcript")
    s.add_argument("--n", type=int, default=_env("n", 64, int))
    s.add_argument("--epochs", type=int, default=_env("epochs", 3, int))
    s.add_argument("--update-frac", type=float, default=_env("update_frac", 1 / 64, float))
    s.add_argument("--regs-per-epoch", type=int, default=_env("regs_per_epoch", 4, int))
    s.add_argument("--seed", type=int, default=_env("seed", 0, int))
    s.add_argument("--srs", default=_env("srs", None))
    s.add_argument("--out", default=_env("out", "transcript"))
    s.add_argument("--mode", choices=("ppol", "pvc"), default=_env("mode", "ppol"))
    s.add_argument("--simulator", action="store_true",
                   help="replace balance changes with simulator-chosen dummies")

    s = sub.add_parser("verify", help="re-verify a transcript with fresh verifiers")
    s.add_argument("transcript")
    s.add_argument("--srs", default=_env("srs", None))
    s.add_argument("--seed", type=int, default=_env("seed", 0, int),
                   help="seed for a regenerated test-mode SRS when --srs is absent")
    s.add_argument("--role", type=_role, default=_env("role", "all", _role))

    s = sub.add_parser("attack", help="run a cheating-provider scenario")
    s.add_argument("--scenario", required=True)
    s.add_argument("--n", type=int, default=_env("n", 64, int))
    s.add_argument("--trials", type=int, default=_env("trials", 10, int))
    s.add_argument("--seed", type=int, default=_env("seed", 0, int))
    s.add_argument("--srs", default=_env("srs", None))

    s = sub.add_parser("bench", help="phase timings as CSV")
    s.add_argument("--n", type=int, default=_env("n", 1 << 10, int))
    s.add_argument("--updates", type=int, default=_env("updates", None, int),
                   help="updates per epoch (default n/64)")
    s.add_argument("--reps", type=int, default=_env("reps", 3, int))
    s.add_argument("--seed", type=int, default=_env("seed", 0, int))
    s.add_argument("--out", default=_env("out", None))
    return p


def _load_srs(path, n, seed):
    from .srs import SRS, setup
    if path:
        srs = SRS.load(path)
        if n is not None and srs.n != n:
            raise SystemExit(f"SRS at {path} has n = {srs.n}, expected {n}")
        return srs
    print(f"note: no --srs given, generating a test-mode SRS (n={n}, seed={seed})",
          file=sys.stderr)
    return setup(n, seed=seed, insecure=True)[0]


def cmd_setup(a):
    from .srs import setup
    try:
        srs, _ = setup(a.n, seed=a.seed, insecure=True)
    except ValueError as e:
        raise SystemExit(f"error: {e}")
    if a.lagrange_proofs:
        srs.materialize_lagrange_proofs()
    srs.save(a.out, include_lagrange_proofs=a.lagrange_proofs)
    print(f"wrote {a.out} (n={a.n}, test mode)")
    return 0


def cmd_simulate(a):
    from .harness.workload import CapacityError, all_pass, simulate
    srs = _load_srs(a.srs, a.n, a.seed)
    try:
        t = simulate(srs, a.epochs, a.update_frac, a.regs_per_epoch, seed=a.seed,
                     ppol=a.mode == "ppol", simulator=a.simulator)
    except (CapacityError, ValueError) as e:
        raise SystemExit(f"error: {e}")
    path = t.save(a.out)
    bad = [v for v in t.verdicts if not all_pass(v)]
    print(f"wrote {path}: {len(t.epochs)} epochs, {len(bad)} failing")
    return 1 if bad else 0


def _flatten(v):
    out = {}
    for k, ok in (v.get("auditor") or {}).items():
        out[f"auditor.{k}"] = ok
    for i, checks in v.get("users", {}).items():
        for k, ok in checks.items():
            out[f"user{i}.{k}"] = ok
    return out


def cmd_verify(a):
    from .harness.transcript import Transcript
    from .harness.workload import replay
    t = Transcript.load(a.transcript)
    srs = _load_srs(a.srs, t.header["n"], a.seed)
    results = replay(srs, t, a.role)
    failed = False
    recorded = {v["epoch"]: v for v in results}
    for v in results:
        flat = _flatten(v)
        for name, ok in flat.items():
            print(f"epoch {v['epoch']:>4}  {name:<28} {'PASS' if ok else 'FAIL'}")
            failed |= not ok
    if t.verdicts:
        for rec, orig in zip(t.epochs, t.verdicts):
            if orig is None or rec.epoch not in recorded:
                continue
            now = _flatten(recorded[rec.epoch])
            then = {k: x for k, x in _flatten(orig).items() if k in now}
            if then != {k: now[k] for k in then}:
                print(f"epoch {rec.epoch}: verdicts differ from the recorded run")
    print("all checks passed" if not failed else "some checks FAILED")
    return 1 if failed else 0


def cmd_attack(a):
    from .harness.attacks import EXPECTED, SCENARIOS, run_trials
    if a.scenario not in SCENARIOS:
        raise SystemExit(f"unknown scenario {a.scenario!r}; choose from {', '.join(SCENARIOS)}")
    srs = _load_srs(a.srs, a.n, a.seed)
    detected, results = run_trials(a.scenario, srs, a.trials, seed=a.seed)
    caught = {}
    for _, names in results:
        for c in names:
            key = "user:" + c.split(":", 1)[1] if c.startswith("user") else c
            caught[key] = caught.get(key, 0) + 1
    print(json.dumps({"scenario": a.scenario, "trials": a.trials, "detected": detected,
                      "expected_verifier": EXPECTED[a.scenario],
                      "failing_checks": caught}, indent=2, sort_keys=True))
    return 0 if detected == a.trials else 1


def cmd_bench(a):
    from .harness.bench import run, to_csv
    text = to_csv(run(a.n, a.updates, a.reps, a.seed))
    if a.out:
        with open(a.out, "w") as f:
            f.write(text)
    sys.stdout.write(text)
    return 0


def main(argv=None):
    a = _parser().parse_args(argv)
    if a.threads:
        os.environ["RAYON_NUM_THREADS"] = str(a.threads)
    return {"setup": cmd_setup, "simulate": cmd_simulate, "verify": cmd_verify,
            "attack": cmd_attack, "bench": cmd_bench}[a.verb](a)


if __name__ == "__main__":
    sys.exit(main())
