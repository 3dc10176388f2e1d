"""Command-line front end: generate parity data, estimate amplitudes and
energies, profile the decay rate, and inspect measurement schedules.

Every command is deterministic for a fixed configuration.  The seed falls
back to the ``RAE_SEED`` environment variable and then to 0, per-term and
per-row substreams are derived from spawn keys that encode only the position
in the work grid, JSON is written with sorted keys, and no timestamp is
emitted unless ``--stamp`` is given.  Running the same invocation twice
therefore produces byte-identical output files, and computing the cells of a
sweep in any order (or in parallel) gives the same table.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 unreadable or
malformed input file, 4 computation failure (unidentifiable model, fit that
does not converge).
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import sys

import numpy as np

from .energy import direct_baseline, estimate_term, rmse_sweep, simulate_dataset
from .fisher import advantage_verdict, crb_rmse, direct_mse_model
from .inference import (
    BOOTSTRAP_REPLICATES,
    DatasetFormatError,
    IdentifiabilityError,
    MLEGrid,
    load_dataset,
    rmse_stats,
    save_dataset,
)
from .noisefit import FitError, lambda_profile, load_curve, simulate_curve
from .pauli import (
    AnsatzSpec,
    PauliString,
    builtin_problem,
    load_hamiltonian,
    oracle_expectation,
)
from .schedules import (
    LayerSchedule,
    eis,
    lis,
    noise_robust_schedule,
    polynomial,
    query_cost,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FORMAT = 3
EXIT_COMPUTE = 4

_BUILTIN_PROBLEMS = ("one_qubit", "two_qubit")


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("RAE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"RAE_SEED must be an integer, got {env!r}") from None
    return 0


def _load_problem(spec: str, theta: float | None):
    """Builtin problem name or path to a saved Hamiltonian file."""
    if spec in _BUILTIN_PROBLEMS:
        return builtin_problem(spec, theta)
    h, ansatz = load_hamiltonian(spec)
    if theta is not None:
        if ansatz is None:
            raise ValueError(
                f"--theta given but {spec} carries no ansatz to apply it to"
            )
        ansatz = AnsatzSpec(ansatz.kind, float(theta))
    return h, ansatz


def _config_digest(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _utc_stamp(enabled: bool) -> str | None:
    if not enabled:
        return None
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _grid_from_args(args: argparse.Namespace) -> MLEGrid:
    return MLEGrid(
        pi_points=args.grid_pi,
        lambda_points=args.grid_lambda,
        lambda_max=args.grid_lambda_max,
    )


def _build_schedule(
    family: str,
    i_max: int,
    n_shots: int,
    degree: int,
    c: float,
    lam: float | None = None,
    pi_prior: float | None = None,
) -> LayerSchedule:
    if family == "lis":
        return lis(i_max, n_shots)
    if family == "eis":
        return eis(i_max, n_shots)
    if family == "poly":
        return polynomial(degree, i_max, n_shots)
    if family == "nris":
        if lam is None or pi_prior is None:
            raise ValueError(
                "the noise-robust schedule needs both --lambda and an amplitude prior"
            )
        return noise_robust_schedule(pi_prior, lam, n_shots, c)
    raise ValueError(f"unknown schedule family {family!r}")


def _budget_builder(family: str, degree: int):
    """Schedule constructor keyed by a single size parameter, for sweeps."""
    if family == "lis":
        return lis
    if family == "eis":
        return eis
    if family == "poly":
        return lambda i_max, n_shots: polynomial(degree, i_max, n_shots)
    raise ValueError(
        f"sweeps need a schedule family with a single size axis, not {family!r}"
    )


def _fmt(x: float) -> str:
    # repr round-trips exactly, so reruns stay byte-identical
    return repr(float(x))


def cmd_generate(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    h, ansatz = _load_problem(args.hamiltonian, args.theta)
    if ansatz is None:
        raise ValueError(
            "dataset generation needs an ansatz; the Hamiltonian file has none"
        )
    terms = h.non_identity_terms()
    if not terms:
        raise ValueError("the Hamiltonian has no non-identity terms to measure")
    config = {
        "command": "generate",
        "hamiltonian": args.hamiltonian,
        "ansatz": ansatz.kind,
        "theta": ansatz.theta,
        "lambda": args.lam,
        "schedule": args.schedule,
        "i_max": args.i_max,
        "degree": args.degree,
        "c": args.c,
        "shots": args.shots,
        "seed": seed,
    }
    digest = _config_digest(config)
    stamp = _utc_stamp(args.stamp)
    os.makedirs(args.out, exist_ok=True)
    for j, (_, string) in enumerate(terms):
        prior = None
        if args.schedule == "nris":
            prior = oracle_expectation(ansatz, string)
        schedule = _build_schedule(
            args.schedule, args.i_max, args.shots, args.degree, args.c,
            lam=args.lam, pi_prior=prior,
        )
        dataset = simulate_dataset(
            ansatz, string, args.lam, schedule,
            seed=np.random.SeedSequence(seed, spawn_key=(j,)),
        )
        dataset.metadata["seed"] = seed
        dataset.metadata["config_sha256"] = digest
        if schedule.origin:
            dataset.metadata["schedule_origin"] = schedule.origin
        if stamp is not None:
            dataset.metadata["generated_at"] = stamp
        path = os.path.join(args.out, f"{string.word}.json")
        save_dataset(path, dataset)
        print(
            f"wrote {path}: {len(dataset.records)} depths, "
            f"{query_cost(schedule)} queries"
        )
    return EXIT_OK


def _reference_expectation(dataset) -> float | None:
    """Oracle value recorded in the metadata, when enough of it is present."""
    meta = dataset.metadata
    if meta.get("ansatz") is None or meta.get("theta") is None:
        return None
    try:
        ansatz = AnsatzSpec(str(meta["ansatz"]), float(meta["theta"]))
        return oracle_expectation(ansatz, PauliString(dataset.pauli))
    except (ValueError, TypeError):
        return None


def cmd_estimate(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    datasets = [(path, load_dataset(path)) for path in args.files]
    provenance = {
        (d.metadata.get("ansatz"), d.metadata.get("theta"), d.metadata.get("lam"))
        for _, d in datasets
    }
    if len(provenance) > 1 and not args.force:
        raise ValueError(
            "input datasets disagree on ansatz/theta/lambda metadata; "
            "pass --force to combine them anyway"
        )
    grid = _grid_from_args(args)
    config = {
        "command": "estimate",
        "files": list(args.files),
        "bootstrap": args.bootstrap,
        "band": args.band,
        "force": bool(args.force),
        "grid_pi": args.grid_pi,
        "grid_lambda": args.grid_lambda,
        "grid_lambda_max": args.grid_lambda_max,
        "seed": seed,
    }
    digest = _config_digest(config)
    rows = []
    for j, (path, dataset) in enumerate(datasets):
        m = args.bootstrap
        if m is None:
            m = BOOTSTRAP_REPLICATES.get(len(dataset.pauli))
            if m is None:
                raise ValueError(
                    f"no default replicate count for {len(dataset.pauli)}-qubit "
                    "terms; pass --bootstrap"
                )
        result, reps = estimate_term(
            dataset, m, grid=grid,
            seed=np.random.SeedSequence(seed, spawn_key=(j,)),
        )
        direct_route = dataset.layer_values() == (0,)
        pi_ref = _reference_expectation(dataset)
        reference = pi_ref if pi_ref is not None else result.pi_hat
        stats = rmse_stats(reps.pi_hats, reference)
        n_queries = sum((2 * r.layers + 1) * r.n_shots for r in dataset.records)
        crb = None
        note = None
        shot_counts = {r.n_shots for r in dataset.records}
        if direct_route:
            note = "single-depth data: decay rate pinned at 0, no joint error bound"
        elif len(shot_counts) != 1:
            note = "records carry unequal shot counts, no closed-form bound reported"
        else:
            schedule = LayerSchedule(dataset.layer_values(), shot_counts.pop())
            pi_bound = min(max(result.pi_hat, -1.0 + 1e-9), 1.0 - 1e-9)
            try:
                crb = crb_rmse(pi_bound, result.lambda_hat, schedule)
            except IdentifiabilityError as exc:
                note = str(exc)
        mse_direct = direct_mse_model(result.pi_hat, result.lambda_hat, n_queries)
        verdict = None
        if crb is not None:
            verdict = advantage_verdict(
                stats.rmse, stats.sigma_rmse, crb, mse_direct, k=args.band
            ).value
        rows.append({
            "file": path,
            "term": dataset.pauli,
            "method": "direct" if direct_route else "mle",
            "pi_hat": float(result.pi_hat),
            "lambda_hat": float(result.lambda_hat),
            "degenerate_maximum": bool(result.degenerate_maximum),
            "n_queries": int(n_queries),
            "n_bootstrap": int(m),
            "pi_ref": None if pi_ref is None else float(pi_ref),
            "reference": "oracle" if pi_ref is not None else "pi_hat",
            "rmse": float(stats.rmse),
            "sigma_rmse": float(stats.sigma_rmse),
            "crb": None if crb is None else float(crb),
            "mse_direct": float(mse_direct),
            "verdict": verdict,
            "note": note,
        })
    doc = {
        "version": 1,
        "config": config,
        "config_sha256": digest,
        "timestamp": _utc_stamp(args.stamp),
        "terms": rows,
    }
    if args.out:
        _write_text(args.out, _json_text(doc))
    for row in rows:
        line = (
            f"{row['term']}: pi_hat={row['pi_hat']:+.6f} "
            f"lambda_hat={row['lambda_hat']:.6f} rmse={row['rmse']:.3e} "
            f"[{row['method']}]"
        )
        if row["verdict"] is not None:
            line += f" verdict={row['verdict']}"
        print(line)
        if row["note"] is not None:
            print(f"  note: {row['note']}")
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def sweep_cell(ansatz, string, lam, schedule, m_bootstrap, grid, seed, position):
    """One (budget row, term) cell of a sweep.

    The substreams depend only on the base seed and the cell position, so
    cells can be computed in any order, or concurrently, and still reproduce
    the sequential table.
    """
    i, j = position
    data_seed = np.random.SeedSequence(seed, spawn_key=(i, j, 0))
    boot_seed = np.random.SeedSequence(seed, spawn_key=(i, j, 1))
    dataset = simulate_dataset(ansatz, string, lam, schedule, seed=data_seed)
    result, reps = estimate_term(dataset, m_bootstrap, grid=grid, seed=boot_seed)
    stats = rmse_stats(reps.pi_hats, oracle_expectation(ansatz, string))
    return result, stats


def cmd_sweep(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    h, ansatz = _load_problem(args.hamiltonian, args.theta)
    if ansatz is None:
        raise ValueError("sweeps need an ansatz; the Hamiltonian file has none")
    builder = _budget_builder(args.schedule, args.degree)
    grid = _grid_from_args(args)
    terms = h.non_identity_terms()
    config = {
        "command": "sweep",
        "hamiltonian": args.hamiltonian,
        "ansatz": ansatz.kind,
        "theta": ansatz.theta,
        "lambda": args.lam,
        "schedule": args.schedule,
        "i_max": args.i_max,
        "degree": args.degree,
        "shots": args.shots,
        "bootstrap": args.bootstrap,
        "grid_pi": args.grid_pi,
        "grid_lambda": args.grid_lambda,
        "grid_lambda_max": args.grid_lambda_max,
        "seed": seed,
    }
    lines = ["term,l_max,n_queries,pi_hat,lambda_hat,rmse,sigma_rmse"]
    json_rows = []
    for i, budget in enumerate(range(args.i_max + 1)):
        schedule = builder(budget, args.shots)
        for j, (_, string) in enumerate(terms):
            result, stats = sweep_cell(
                ansatz, string, args.lam, schedule, args.bootstrap, grid,
                seed, (i, j),
            )
            l_max = max(schedule.layers)
            n_queries = query_cost(schedule)
            lines.append(",".join([
                string.word, str(l_max), str(n_queries),
                _fmt(result.pi_hat), _fmt(result.lambda_hat),
                _fmt(stats.rmse), _fmt(stats.sigma_rmse),
            ]))
            json_rows.append({
                "term": string.word,
                "l_max": int(l_max),
                "n_queries": int(n_queries),
                "pi_hat": float(result.pi_hat),
                "lambda_hat": float(result.lambda_hat),
                "rmse": float(stats.rmse),
                "sigma_rmse": float(stats.sigma_rmse),
            })
    _write_text(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(lines) - 1} rows)")
    if args.json:
        doc = {
            "version": 1,
            "config": config,
            "config_sha256": _config_digest(config),
            "timestamp": _utc_stamp(args.stamp),
            "rows": json_rows,
        }
        _write_text(args.json, _json_text(doc))
        print(f"wrote {args.json}")
    return EXIT_OK


def cmd_energy(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    h, ansatz = _load_problem(args.hamiltonian, args.theta)
    if ansatz is None:
        raise ValueError("energy sweeps need an ansatz; the Hamiltonian file has none")
    builder = _budget_builder(args.schedule, args.degree)
    grid = _grid_from_args(args)
    config = {
        "command": "energy",
        "hamiltonian": args.hamiltonian,
        "ansatz": ansatz.kind,
        "theta": ansatz.theta,
        "lambda": args.lam,
        "schedule": args.schedule,
        "i_max": args.i_max,
        "degree": args.degree,
        "shots": args.shots,
        "bootstrap": args.bootstrap,
        "grid_pi": args.grid_pi,
        "grid_lambda": args.grid_lambda,
        "grid_lambda_max": args.grid_lambda_max,
        "seed": seed,
    }
    rows = rmse_sweep(
        h, ansatz, args.lam, builder, tuple(range(args.i_max + 1)),
        args.shots, args.bootstrap, seed=seed, grid=grid,
    )
    lines = ["l_max,n_queries,rmse,bias,variance"]
    json_rows = []
    for row in rows:
        lines.append(",".join([
            str(row.l_max), str(row.n_queries_per_term),
            _fmt(row.rmse), _fmt(row.bias), _fmt(row.variance),
        ]))
        baseline = direct_baseline(h, ansatz, args.lam, row.n_queries_per_term)
        json_rows.append({
            "l_max": int(row.l_max),
            "n_queries_per_term": int(row.n_queries_per_term),
            "energy": float(row.energy),
            "bias": float(row.bias),
            "variance": float(row.variance),
            "rmse": float(row.rmse),
            "baseline_rmse": float(baseline.rmse),
        })
    _write_text(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(rows)} rows)")
    if args.json:
        doc = {
            "version": 1,
            "config": config,
            "config_sha256": _config_digest(config),
            "timestamp": _utc_stamp(args.stamp),
            "rows": json_rows,
        }
        _write_text(args.json, _json_text(doc))
        print(f"wrote {args.json}")
    return EXIT_OK


def cmd_fit_lambda(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    if args.files and args.simulate:
        raise ValueError("give saved curve files or --simulate, not both")
    if args.files:
        curves = [load_curve(path) for path in args.files]
    elif args.simulate:
        _, ansatz = _load_problem(args.hamiltonian, args.theta)
        if ansatz is None:
            raise ValueError("--simulate needs an ansatz kind from the problem")
        string = PauliString(args.term)
        pi_values = np.linspace(0.0, 1.0, args.points)
        curves = [
            simulate_curve(
                ansatz.kind, string, layers, args.lam, args.shots,
                seed=np.random.SeedSequence(seed, spawn_key=(layers,)),
                pi_values=pi_values,
            )
            for layers in args.layers
        ]
    else:
        raise ValueError("need saved curve files or --simulate")
    profile = lambda_profile(
        curves, instability_threshold=args.threshold, lambda_max=args.lambda_max
    )
    print("  L  lambda_hat    delta_lambda")
    for row in profile.rows:
        print(f"{row.layers:>3d}  {row.lambda_hat:<12.6f} {row.delta_lambda:.6f}")
    if np.isfinite(profile.variation):
        print(f"relative variation: {100.0 * profile.variation:.1f}%")
    else:
        print("relative variation: unbounded (a fitted rate is 0)")
    verdict = "unstable" if profile.unstable else "stable"
    print(f"verdict: {verdict} (threshold {100.0 * args.threshold:.1f}%)")
    if args.out:
        doc = {
            "version": 1,
            "timestamp": _utc_stamp(args.stamp),
            "rows": [
                {
                    "layers": int(r.layers),
                    "lambda_hat": float(r.lambda_hat),
                    "delta_lambda": float(r.delta_lambda),
                }
                for r in profile.rows
            ],
            "variation": float(profile.variation),
            "unstable": bool(profile.unstable),
            "threshold": float(args.threshold),
        }
        _write_text(args.out, _json_text(doc))
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_schedule(args: argparse.Namespace) -> int:
    schedule = _build_schedule(
        args.schedule, args.i_max, args.shots, args.degree, args.c,
        lam=args.lam, pi_prior=args.pi,
    )
    print(f"layers: {' '.join(str(layer) for layer in schedule.layers)}")
    print(f"shots per layer: {schedule.shots_per_layer}")
    print(f"query cost: {query_cost(schedule)}")
    if schedule.origin:
        print(f"origin: {schedule.origin}")
    prefixes = []
    if args.pi is not None and args.lam is not None:
        for k in range(1, len(schedule.layers) + 1):
            sub = LayerSchedule(schedule.layers[:k], schedule.shots_per_layer)
            try:
                bound = crb_rmse(args.pi, args.lam, sub)
            except IdentifiabilityError:
                bound = None
            prefixes.append({
                "layers": list(sub.layers),
                "n_queries": int(query_cost(sub)),
                "crb": None if bound is None else float(bound),
            })
        print("best-case rmse by schedule prefix:")
        for row in prefixes:
            if row["crb"] is None:
                text = "n/a (depth set not identifiable)"
            else:
                text = f"{row['crb']:.6e}"
            print(
                f"  L<={row['layers'][-1]:>4d}  queries={row['n_queries']:>9d}  "
                f"crb={text}"
            )
    if args.out:
        doc = {
            "version": 1,
            "timestamp": _utc_stamp(args.stamp),
            "layers": list(schedule.layers),
            "shots_per_layer": int(schedule.shots_per_layer),
            "origin": schedule.origin,
            "n_queries": int(query_cost(schedule)),
            "pi": args.pi,
            "lambda": args.lam,
            "prefixes": prefixes,
        }
        _write_text(args.out, _json_text(doc))
        print(f"wrote {args.out}")
    return EXIT_OK


def _parse_layer_list(text: str) -> tuple[int, ...]:
    try:
        layers = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None
    if not layers:
        raise argparse.ArgumentTypeError("need at least one layer count")
    return layers


def build_parser() -> argparse.ArgumentParser:
    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument(
        "--hamiltonian", default="two_qubit",
        help="builtin problem (one_qubit, two_qubit) or path to a saved "
             "Hamiltonian JSON (default: two_qubit)",
    )
    problem.add_argument(
        "--theta", type=float, default=None,
        help="ansatz angle override (default: the problem's ground-state angle)",
    )

    seeding = argparse.ArgumentParser(add_help=False)
    seeding.add_argument(
        "--seed", type=int, default=None,
        help="base seed (default: RAE_SEED environment variable, then 0)",
    )
    seeding.add_argument(
        "--stamp", action="store_true",
        help="embed a UTC timestamp in outputs (off by default so reruns "
             "are byte-identical)",
    )

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid-pi", type=int, default=10000,
                      help="amplitude grid points (default: 10000)")
    grid.add_argument("--grid-lambda", type=int, default=100,
                      help="decay-rate grid points (default: 100)")
    grid.add_argument("--grid-lambda-max", type=float, default=0.5,
                      help="decay-rate grid upper edge (default: 0.5)")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument(
        "--schedule", choices=("lis", "eis", "poly", "nris"), default="lis",
        help="layer schedule family (default: lis)",
    )
    family.add_argument("--i-max", type=int, default=8,
                        help="schedule size parameter (default: 8)")
    family.add_argument("--degree", type=int, default=2,
                        help="growth exponent for poly schedules (default: 2)")
    family.add_argument("--c", type=float, default=1.0,
                        help="edge-guard width multiplier for nris (default: 1)")
    family.add_argument("--shots", type=int, default=8192,
                        help="shots per layer (default: 8192)")

    parser = argparse.ArgumentParser(
        prog="rae",
        description="Amplitude estimation with noisy Grover circuits: "
                    "simulate parity data, run the joint likelihood fit, and "
                    "assemble ground-state energies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "generate", parents=[problem, family, seeding],
        help="simulate parity datasets, one JSON file per Pauli term",
    )
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="depolarizing rate per layer (default: 0)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser(
        "estimate", parents=[grid, seeding],
        help="joint amplitude and decay-rate estimates for saved datasets",
    )
    p.add_argument("files", nargs="+", help="dataset JSON files")
    p.add_argument("--bootstrap", type=int, default=None,
                   help="bootstrap replicates (default: 15000 for 1-qubit "
                        "terms, 10000 for 2-qubit terms)")
    p.add_argument("--band", type=float, default=2.0,
                   help="uncertainty band width for the advantage verdict "
                        "(default: 2)")
    p.add_argument("--force", action="store_true",
                   help="estimate even if the files disagree on provenance")
    p.add_argument("--out", default=None, help="write a JSON report here")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser(
        "sweep", parents=[problem, family, grid, seeding],
        help="per-term estimation error versus schedule size, as CSV",
    )
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="depolarizing rate per layer (default: 0)")
    p.add_argument("--bootstrap", type=int, default=300,
                   help="bootstrap replicates per cell (default: 300)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--json", default=None, help="also write a JSON report here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "energy", parents=[problem, family, grid, seeding],
        help="ground-state energy error versus schedule size, as CSV",
    )
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="depolarizing rate per layer (default: 0)")
    p.add_argument("--bootstrap", type=int, default=300,
                   help="bootstrap replicates per term (default: 300)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--json", default=None, help="also write a JSON report here")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser(
        "fit-lambda", parents=[problem, seeding],
        help="fit the decay rate from likelihood curves and report stability",
    )
    p.add_argument("files", nargs="*", help="saved curve JSON files")
    p.add_argument("--simulate", action="store_true",
                   help="simulate the curves instead of reading files")
    p.add_argument("--term", default="Z",
                   help="Pauli word to sweep when simulating (default: Z)")
    p.add_argument("--layers", type=_parse_layer_list, default=(1, 2, 3, 4, 5),
                   help="comma-separated layer counts for --simulate "
                        "(default: 1,2,3,4,5)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.045,
                   help="depolarizing rate for --simulate (default: 0.045)")
    p.add_argument("--shots", type=int, default=100000,
                   help="shots per curve point for --simulate (default: 100000)")
    p.add_argument("--points", type=int, default=10,
                   help="amplitudes per curve for --simulate (default: 10)")
    p.add_argument("--threshold", type=float, default=0.20,
                   help="relative-variation threshold flagging an unstable "
                        "fit (default: 0.20)")
    p.add_argument("--lambda-max", type=float, default=5.0,
                   help="upper edge of the decay-rate search (default: 5)")
    p.add_argument("--out", default=None, help="write a JSON report here")
    p.set_defaults(func=cmd_fit_lambda)

    p = sub.add_parser(
        "schedule", parents=[family, seeding],
        help="print a schedule's layers, query cost, and best-case rmse",
    )
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="depolarizing rate (needed for nris and rmse bounds)")
    p.add_argument("--pi", type=float, default=None,
                   help="amplitude prior (needed for nris and rmse bounds)")
    p.add_argument("--out", default=None, help="write a JSON report here")
    p.set_defaults(func=cmd_schedule)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DatasetFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (IdentifiabilityError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except KeyError as exc:
        print(f"error: missing field {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        name = getattr(exc, "filename", None) or exc
        print(f"error: cannot read {name}", file=sys.stderr)
        return EXIT_FORMAT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
