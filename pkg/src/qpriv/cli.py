"""Command-line front end: single-shot computations and experiment tables.

Subcommands:

* ``divergence`` prints one distinguishability measure of two JSON states.
* ``certify`` runs the privacy certification search on a JSON channel.
* ``reproduce`` regenerates the experiment tables (CSV or JSON).

Exit codes: 0 success or certified, 1 negative finding (not certified, or a
scan violation), 2 I/O or parse error, 3 validation error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import applications, contraction, divergences, hypothesis, privacy
from . import quantum_core as qc
from .errors import ComputationError, ValidationError

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_IO = 2
EXIT_VALIDATION = 3

_EPS_GRID_TRACE = (0.25, 1.0, math.log(3.0), 2.0)
_EPS_GRID_AUX = (0.5, 1.0, 2.0)
_EPS_DELTA_GRID = tuple(
    (e, d) for e in (0.5, 1.0, math.log(3.0)) for d in (0.1, 0.3)
)


@dataclass
class RunConfig:
    """Driver configuration; flags override JSON config file entries."""

    seed: int = 0
    trials: int = 2000
    tolerances: dict = field(default_factory=dict)
    output_path: str = "."
    format: str = "csv"

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cfg = cls()
        if getattr(args, "config", None):
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
            cfg.seed = int(raw.get("seed", cfg.seed))
            cfg.trials = int(raw.get("trials", cfg.trials))
            cfg.tolerances = dict(raw.get("tolerances", {}))
            cfg.output_path = raw.get("output_path", cfg.output_path)
            cfg.format = raw.get("format", cfg.format)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.trials is not None:
            cfg.trials = args.trials
        if args.out is not None:
            cfg.output_path = args.out
        if args.format is not None:
            cfg.format = args.format
        for item in args.tol or ():
            key, _, value = item.partition("=")
            if not _:
                raise ValidationError(f"--tol expects KEY=VALUE, got {item!r}")
            cfg.tolerances[key] = float(value)
        if cfg.trials < 1:
            raise ValidationError("trials must be >= 1")
        return cfg

    @property
    def tol_scan(self) -> float:
        return float(self.tolerances.get("tol_scan", contraction.TOL_SCAN))


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_table(rows: list[dict], columns: list[str], path: str, fmt: str) -> None:
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                [{c: row.get(c) for c in columns} for row in rows],
                fh,
                indent=2,
                default=str,
            )
            fh.write("\n")
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in columns])


# ---------------------------------------------------------------------------
# divergence
# ---------------------------------------------------------------------------

_DIVERGENCE_KINDS = {
    "trace": lambda a, b, g: divergences.trace_distance(a, b),
    "fidelity": lambda a, b, g: divergences.fidelity(a, b),
    "bures": lambda a, b, g: divergences.bures_squared(a, b),
    "hockey": lambda a, b, g: divergences.hockey_stick_extended(a, b, g),
    "relent": lambda a, b, g: divergences.relative_entropy(a, b),
    "dmax": lambda a, b, g: divergences.max_relative_entropy(a, b),
}


def _cmd_divergence(args) -> int:
    try:
        a = qc.load_state(args.state_a)
        b = qc.load_state(args.state_b)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: cannot parse state file: {exc}", file=sys.stderr)
        return EXIT_IO
    gamma = args.gamma
    if args.kind == "hockey" and gamma is None:
        print("error: hockey needs --gamma", file=sys.stderr)
        return EXIT_VALIDATION
    value = _DIVERGENCE_KINDS[args.kind](a, b, gamma)
    print(f"{value:.12f}" if math.isfinite(value) else "inf")
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------


def _cmd_certify(args) -> int:
    try:
        channel = qc.load_channel(args.channel)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: cannot parse channel file: {exc}", file=sys.stderr)
        return EXIT_IO
    params = privacy.PrivacyParams(args.epsilon, args.delta)
    budget = privacy.SearchBudget(restarts=args.budget)
    result = privacy.certify(channel, params, budget, seed=args.seed or 0)
    print(
        json.dumps(
            {
                "certified": result.certified,
                "worst_value": result.worst_value,
                "epsilon": args.epsilon,
                "delta": args.delta,
                "iterations": result.iterations,
            }
        )
    )
    return EXIT_OK if result.certified else EXIT_FINDING


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


def _contraction_rows(cfg: RunConfig) -> list[dict]:
    tasks = []
    for i, eps in enumerate(_EPS_GRID_TRACE):
        tasks.append(("trace", privacy.PrivacyParams(eps), None, cfg.seed * 1000 + i))
    for i, eps in enumerate(_EPS_GRID_TRACE):
        tasks.append(("hockey_grid", privacy.PrivacyParams(eps), None, cfg.seed * 1000 + 100 + i))
    for i, (eps, delta) in enumerate(_EPS_DELTA_GRID):
        tasks.append(("trace", privacy.PrivacyParams(eps, delta), None, cfg.seed * 1000 + 200 + i))
    for i, eps in enumerate(_EPS_GRID_AUX):
        tasks.append(("bures", privacy.PrivacyParams(eps), None, cfg.seed * 1000 + 300 + i))
    for i, eps in enumerate(_EPS_GRID_AUX):
        tasks.append(("relent", privacy.PrivacyParams(eps), None, cfg.seed * 1000 + 400 + i))

    def run(task):
        kind, params, gamma, seed = task
        if kind == "hockey_grid":
            grid = np.geomspace(math.exp(-params.epsilon), math.exp(params.epsilon), 11)
            return contraction.scan_hockey_grid(
                params, grid, trials=cfg.trials, seed=seed, tol_scan=cfg.tol_scan
            )
        return [
            contraction.scan(
                kind, params, gamma, trials=cfg.trials, seed=seed, tol_scan=cfg.tol_scan
            )
        ]

    reports = []
    for result in _pooled_map(run, tasks):
        reports.extend(result)
    rows = []
    for rep in reports:
        rows.append(
            {
                "divergence_id": rep.divergence_id,
                "epsilon": rep.epsilon,
                "delta": rep.delta,
                "gamma": rep.gamma,
                "theory_bound": rep.theory_bound,
                "empirical_sup": rep.empirical_sup,
                "relative_to": rep.relative_to,
                "witness_kind": rep.witness_kind,
                "violation": rep.violation,
                "trials": rep.trials,
                "seed": cfg.seed,
            }
        )
    return rows


_CONTRACTION_COLUMNS = [
    "divergence_id",
    "epsilon",
    "delta",
    "gamma",
    "theory_bound",
    "empirical_sup",
    "relative_to",
    "witness_kind",
    "violation",
    "trials",
    "seed",
]


def _sample_complexity_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    alpha, p = 0.1, 0.5
    for i, eps in enumerate((0.5, 1.0, math.log(3.0))):
        mech = privacy.build_qldp_mechanism([[1.0, 0.0], [0.0, 0.0]], eps)
        rho = qc.DensityMatrix([[1.0, 0.0], [0.0, 0.0]])
        sigma = qc.DensityMatrix([[0.0, 0.0], [0.0, 1.0]])
        out = hypothesis.HypothesisInstance(
            qc.apply(mech, rho), qc.apply(mech, sigma), p, alpha
        )
        exact = hypothesis.exact_sample_complexity(out)
        bounds = hypothesis.orthogonal_sc_bounds(eps, p, alpha)
        rows.append(
            {
                "epsilon": eps,
                "delta": 0.0,
                "alpha": alpha,
                "p": p,
                "T": 1.0,
                "dB2": 2.0,
                "sc_exact": exact.exact,
                "sc_lower": bounds.lower,
                "sc_upper": bounds.upper,
                "method": exact.method,
                "seed": cfg.seed,
            }
        )
    count = max(4, min(20, cfg.trials // 100))
    rng = qc.as_rng(cfg.seed)
    eps = 1.0
    for _ in range(count):
        rho = qc.random_density_matrix(2, seed=rng)
        sigma = qc.random_density_matrix(2, seed=rng)
        t = divergences.trace_distance(rho, sigma)
        if t < 0.5:
            continue
        inst = hypothesis.HypothesisInstance(rho, sigma, p, alpha)
        ww, vv = np.linalg.eigh(rho.entries - sigma.entries)
        m_opt = (vv * (ww > 0)) @ vv.conj().T
        mech = privacy.build_qldp_mechanism(m_opt, eps)
        out = hypothesis.HypothesisInstance(
            qc.apply(mech, rho), qc.apply(mech, sigma), p, alpha
        )
        exact = hypothesis.exact_sample_complexity(out)
        bounds = hypothesis.private_sc_bounds(inst, eps)
        rows.append(
            {
                "epsilon": eps,
                "delta": 0.0,
                "alpha": alpha,
                "p": p,
                "T": t,
                "dB2": divergences.bures_squared(rho, sigma),
                "sc_exact": exact.exact,
                "sc_lower": bounds.lower,
                "sc_upper": bounds.upper,
                "method": exact.method,
                "seed": cfg.seed,
            }
        )
    return rows


_SAMPLE_COLUMNS = [
    "epsilon",
    "delta",
    "alpha",
    "p",
    "T",
    "dB2",
    "sc_exact",
    "sc_lower",
    "sc_upper",
    "method",
    "seed",
]


def _applications_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    pairs = max(10, min(500, cfg.trials))
    povm = qc.Povm((np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
    for i, (eps, delta) in enumerate(((math.log(3.0), 0.0), (1.0, 0.1), (0.5, 0.3))):
        params = privacy.PrivacyParams(eps, delta)
        mech = privacy.build_eps_delta_mechanism([[1.0, 0.0], [0.0, 0.0]], params)
        holds, margin = applications.fairness_certificate(
            mech, povm, params, 0.4, pairs=pairs, seed=cfg.seed * 1000 + i
        )
        rows.append(
            {
                "check": "fairness",
                "epsilon": eps,
                "delta": delta,
                "alpha_bound": 0.4,
                "value": margin,
                "bound": 0.4 * contraction.trace_contraction_coefficient(params),
                "holds": holds,
                "seed": cfg.seed,
            }
        )
    rng = qc.as_rng(cfg.seed + 77)
    for eps in (0.5, 1.0, 2.0):
        mech = privacy.build_qldp_mechanism([[1.0, 0.0], [0.0, 0.0]], eps)
        worst = -math.inf
        holds_all = True
        bound = eps * (math.exp(eps) - 1.0) / (math.exp(eps) + 1.0)
        for _ in range(10):
            states = tuple(qc.random_density_matrix(2, seed=rng) for _ in range(4))
            ens = applications.Ensemble(np.full(4, 0.25), states)
            holds, value, bound = applications.holevo_stability_check(ens, mech, eps)
            worst = max(worst, value)
            holds_all = holds_all and holds
        rows.append(
            {
                "check": "holevo",
                "epsilon": eps,
                "delta": 0.0,
                "alpha_bound": None,
                "value": worst,
                "bound": bound,
                "holds": holds_all,
                "seed": cfg.seed,
            }
        )
    return rows


_APPLICATION_COLUMNS = [
    "check",
    "epsilon",
    "delta",
    "alpha_bound",
    "value",
    "bound",
    "holds",
    "seed",
]


def _pooled_map(fn, tasks):
    """Run tasks on a thread pool, preserving task order in the results."""
    workers = os.environ.get("QPRIV_THREADS")
    max_workers = int(workers) if workers else min(8, os.cpu_count() or 1)
    if max_workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(fn, tasks))


def _cmd_reproduce(args) -> int:
    cfg = RunConfig.from_args(args)
    os.makedirs(cfg.output_path, exist_ok=True)
    suites = (
        ["contraction", "sample_complexity", "applications"]
        if args.suite == "all"
        else [args.suite]
    )
    any_violation = False
    for suite in suites:
        if suite == "contraction":
            rows, columns = _contraction_rows(cfg), _CONTRACTION_COLUMNS
            any_violation |= any(r["violation"] for r in rows)
        elif suite == "sample_complexity":
            rows, columns = _sample_complexity_rows(cfg), _SAMPLE_COLUMNS
            any_violation |= any(
                r["sc_exact"] is not None
                and not (r["sc_lower"] - 1 < r["sc_exact"] <= math.ceil(r["sc_upper"]))
                for r in rows
            )
        else:
            rows, columns = _applications_rows(cfg), _APPLICATION_COLUMNS
            any_violation |= any(not r["holds"] for r in rows)
        path = os.path.join(cfg.output_path, f"{suite}.{cfg.format}")
        _write_table(rows, columns, path, cfg.format)
        print(f"wrote {path} ({len(rows)} rows)")
    if any_violation:
        print("VIOLATION detected; see tables", file=sys.stderr)
        return EXIT_FINDING
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpriv",
        description="Private quantum channels: divergences, certification, experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_div = sub.add_parser("divergence", help="evaluate a divergence of two JSON states")
    p_div.add_argument("kind", choices=sorted(_DIVERGENCE_KINDS))
    p_div.add_argument("state_a")
    p_div.add_argument("state_b")
    p_div.add_argument("--gamma", type=float, default=None)
    p_div.set_defaults(func=_cmd_divergence)

    p_cert = sub.add_parser("certify", help="certify a JSON channel at (epsilon, delta)")
    p_cert.add_argument("channel")
    p_cert.add_argument("--epsilon", type=float, required=True)
    p_cert.add_argument("--delta", type=float, default=0.0)
    p_cert.add_argument("--budget", type=int, default=privacy.DEFAULT_RESTARTS)
    p_cert.add_argument("--seed", type=int, default=0)
    p_cert.set_defaults(func=_cmd_certify)

    p_rep = sub.add_parser("reproduce", help="regenerate experiment tables")
    p_rep.add_argument(
        "suite", choices=["contraction", "sample_complexity", "applications", "all"]
    )
    p_rep.add_argument("--seed", type=int, default=None)
    p_rep.add_argument("--trials", type=int, default=None)
    p_rep.add_argument("--tol", action="append", metavar="KEY=VALUE")
    p_rep.add_argument("--out", default=None)
    p_rep.add_argument("--format", choices=["csv", "json"], default=None)
    p_rep.add_argument("--config", default=None, help="optional JSON RunConfig file")
    p_rep.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDING
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
