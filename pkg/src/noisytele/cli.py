"""Command-line front end: ``run``, ``sweep`` and ``verify``.

Exit codes: 0 success, 2 bad arguments or config, 3 internal invariant
violation, 4 unwritable output, 5 oracle and dense simulator disagree.

Numbers are printed in fixed notation with 12 digits after the point.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from noisytele.fidelity import (
    DiscrepancyRow,
    FidelityEstimate,
    average_fidelity_exact,
    average_fidelity_mc,
    fidelity_pure,
    paper_average_fidelity,
)
from noisytele.noise import NoiseParams
from noisytele.oracle import cross_check, enumerate_map, random_parameter_points
from noisytele.protocol import ProtocolSchedule, effective_channel_runs, paper_output_state, run_protocol
from noisytele.states import bloch_qubit, haar_random_qubit
from noisytele.tensor import TOL, check_physical

log = logging.getLogger("noisytele")

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_OUTPUT, EXIT_ORACLE = 0, 2, 3, 4, 5

METHODS = ("eq9", "sim-exact", "sim-mc", "oracle")
SWEEP_METHODS = ("sim-exact", "sim-mc", "oracle")
PARAMS = ("p1", "p2", "eta", "F")
CSV_HEADER = ["p1", "p2", "eta", "F", "f_eq9", "f_sim_exact", "delta", "agreement_class"]
ORACLE_TOLERANCE = 1e-12


class UsageError(Exception):
    pass


class InvariantError(Exception):
    pass


def fmt(x: float) -> str:
    s = f"{x:.12f}"
    return "0.000000000000" if s == "-0.000000000000" else s


def _schedule(args) -> ProtocolSchedule:
    return ProtocolSchedule(
        cnot_noisy=not args.no_cnot_noise,
        hadamard_noisy=not args.no_hadamard_noise,
        measurement_noisy=not args.no_measurement_noise,
        correction_noisy=not args.no_correction_noise,
        apply_noisy_identity_correction=not args.ideal_identity_correction,
    )


def _params(p1, p2, eta, F) -> NoiseParams:
    try:
        return NoiseParams(float(p1), float(p2), float(eta), float(F))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _check_fidelity(value: float, what: str = "fidelity") -> None:
    if not (math.isfinite(value) and -TOL.algebraic <= value <= 1 + TOL.algebraic):
        raise InvariantError(f"{what}={value} outside [0, 1]")


def _check_runs(runs, channel) -> None:
    for r in runs:
        total = sum(b.probability for b in r.branches)
        if abs(total - 1) > TOL.algebraic:
            raise InvariantError(f"branch probabilities sum to {total}")
        if not check_physical(r.averaged).ok():
            raise InvariantError("averaged output state is not physical")
    if channel.trace_deviation() > TOL.algebraic:
        raise InvariantError("effective channel is not trace preserving")


# ---------------------------------------------------------------- run


def _average(method: str, params: NoiseParams, schedule: ProtocolSchedule, mc_samples: int, seed: int) -> FidelityEstimate:
    if method == "eq9":
        return FidelityEstimate(paper_average_fidelity(params), "analytic-eq9")
    if method == "oracle":
        omap = enumerate_map(params, schedule)
        total = sum(b.probability for b in omap.branches)
        if abs(total - 1) > TOL.algebraic:
            raise InvariantError(f"oracle branch probabilities sum to {total}")
        return FidelityEstimate(omap.haar_average_fidelity(), "oracle", 0.0, len(omap.branches))
    channel, runs = effective_channel_runs(params, schedule)
    _check_runs(runs, channel)
    if method == "sim-mc":
        return average_fidelity_mc(channel, mc_samples, seed)
    return average_fidelity_exact(channel)


def cmd_run(args) -> int:
    params = _params(args.p1, args.p2, args.eta, args.werner_f)
    schedule = _schedule(args)
    if args.mc_samples < 100:
        raise UsageError("--mc-samples must be at least 100")

    est = _average(args.method, params, schedule, args.mc_samples, args.seed)
    _check_fidelity(est.value)
    record: dict = {
        "p1": params.p1,
        "p2": params.p2,
        "eta": params.eta,
        "F": params.F,
        "fidelity": est.value,
        "method": est.method,
        "std_error": est.std_error,
        "n_samples": est.n_samples,
    }

    psi = None
    if args.state is not None:
        try:
            theta, phi = (float(x) for x in args.state.split(","))
            psi = bloch_qubit(theta, phi)
        except ValueError as exc:
            raise UsageError(f"--state expects THETA,PHI: {exc}") from exc
    elif args.haar_seed is not None:
        psi = haar_random_qubit(args.haar_seed)

    if psi is not None:
        record["alpha"] = f"{psi.alpha.real:.12f}{psi.alpha.imag:+.12f}j"
        record["beta"] = f"{psi.beta.real:.12f}{psi.beta.imag:+.12f}j"
        if args.method == "eq9":
            state_f = fidelity_pure(psi, paper_output_state(psi, params))
        elif args.method == "oracle":
            state_f = fidelity_pure(psi, enumerate_map(params, schedule)(psi.density()))
        else:
            result = run_protocol(psi, params, schedule)
            total = sum(b.probability for b in result.branches)
            if abs(total - 1) > TOL.algebraic:
                raise InvariantError(f"branch probabilities sum to {total}")
            for b in result.branches:
                record[f"p_{b.m1}{b.m2}"] = b.probability
            state_f = fidelity_pure(psi, result.averaged)
        if args.method != "eq9":
            _check_fidelity(state_f, "state_fidelity")
        record["state_fidelity"] = state_f

    if args.json:
        print(json.dumps(record, sort_keys=False))
    else:
        for key, value in record.items():
            print(f"{key}={fmt(value) if isinstance(value, float) else value}")
    return EXIT_OK


# ---------------------------------------------------------------- sweep


@dataclass(frozen=True)
class Axis:
    start: float
    stop: float
    count: int = 1
    inclusive: bool = True

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.start > self.stop:
            raise ValueError("start must not exceed stop")
        if not (0 <= self.start <= 1 and 0 <= self.stop <= 1):
            raise ValueError("axis bounds must lie in [0, 1]")

    def values(self) -> list[float]:
        if self.count == 1:
            return [float(self.start)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count, endpoint=self.inclusive)]


@dataclass(frozen=True)
class SweepSpec:
    axes: dict[str, Axis] = field(default_factory=dict)
    method: str = "sim-exact"
    mc_samples: int = 200_000
    seed: int = 0
    output: str | None = None

    @classmethod
    def from_json(cls, text: str) -> "SweepSpec":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise UsageError("sweep config must be a JSON object")
        unknown = set(raw) - {"axes", "method", "mc_samples", "seed", "output"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        axes_raw = raw.get("axes", {})
        if not isinstance(axes_raw, dict) or set(axes_raw) - set(PARAMS):
            raise UsageError(f"axes must be an object keyed by {PARAMS}")
        axes = {}
        try:
            for name in PARAMS:
                spec = axes_raw.get(name, 1.0)
                if isinstance(spec, (int, float)) and not isinstance(spec, bool):
                    axes[name] = Axis(float(spec), float(spec), 1)
                elif isinstance(spec, dict):
                    axes[name] = Axis(
                        float(spec["start"]),
                        float(spec.get("stop", spec["start"])),
                        int(spec.get("count", 1)),
                        bool(spec.get("inclusive", True)),
                    )
                else:
                    raise ValueError(f"bad axis definition {spec!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"axis {name}: {exc}") from exc
        method = raw.get("method", "sim-exact")
        if method not in SWEEP_METHODS:
            raise UsageError(f"method must be one of {SWEEP_METHODS}")
        mc_samples, seed = raw.get("mc_samples", 200_000), raw.get("seed", 0)
        if not isinstance(mc_samples, int) or mc_samples < 100:
            raise UsageError("mc_samples must be an integer >= 100")
        if not isinstance(seed, int) or seed < 0:
            raise UsageError("seed must be a non-negative integer")
        output = raw.get("output")
        if output is not None and not isinstance(output, str):
            raise UsageError("output must be a path string")
        return cls(axes, method, mc_samples, seed, output)

    def grid(self) -> list[NoiseParams]:
        return [NoiseParams(*combo) for combo in itertools.product(*(self.axes[n].values() for n in PARAMS))]


def _csv_text(rows: Sequence[DiscrepancyRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([*(fmt(v) for v in r.params.as_tuple()), fmt(r.f_paper), fmt(r.f_sim), fmt(r.delta), r.agreement_class])
    return buf.getvalue()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _simulated(params: NoiseParams, schedule: ProtocolSchedule, method: str, mc_samples: int, rng) -> float:
    if method == "oracle":
        return enumerate_map(params, schedule).haar_average_fidelity()
    channel, runs = effective_channel_runs(params, schedule)
    _check_runs(runs, channel)
    if method == "sim-mc":
        return average_fidelity_mc(channel, mc_samples, rng).value
    return average_fidelity_exact(channel).value


def sweep_rows(spec: SweepSpec, schedule: ProtocolSchedule) -> list[DiscrepancyRow]:
    grid = spec.grid()
    streams = np.random.SeedSequence(spec.seed).spawn(len(grid))
    rows = []
    for params, ss in zip(grid, streams):
        f_sim = _simulated(params, schedule, spec.method, spec.mc_samples, np.random.Generator(np.random.PCG64(ss)))
        _check_fidelity(f_sim)
        rows.append(DiscrepancyRow.compute(params, f_sim))
    log.info("invariants passed for %d/%d grid points", len(rows), len(grid))
    return rows


def cmd_sweep(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    spec = SweepSpec.from_json(text)
    rows = sweep_rows(spec, _schedule(args))
    try:
        _write(_csv_text(rows), args.out or spec.output)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return EXIT_OK


# ---------------------------------------------------------------- verify


def anchor_points() -> dict[str, list[NoiseParams]]:
    return {
        "resource_only(p1=p2=eta=1)": [NoiseParams(1, 1, 1, F) for F in (0.25, 0.5, 0.7, 0.85, 1.0)],
        "cnot_only(p1=eta=F=1)": [NoiseParams(1, p2, 1, 1) for p2 in (0.0, 0.25, 0.5, 0.75, 0.9, 1.0)],
        "readout_only(p1=p2=F=1)": [NoiseParams(1, 1, eta, 1) for eta in (1.0, 0.9, 0.8)],
    }


def _corners() -> list[NoiseParams]:
    return [NoiseParams(*map(float, c)) for c in itertools.product((0, 1), repeat=4)]


def cmd_verify(args) -> int:
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    schedule = _schedule(args)
    axis = [float(v) for v in np.linspace(0, 1, args.grid)]
    grid = [NoiseParams(*c) for c in itertools.product(axis, repeat=4)]
    anchors = anchor_points()
    points = list(dict.fromkeys(grid + [p for pts in anchors.values() for p in pts]))

    rows = []
    for params in points:
        channel, runs = effective_channel_runs(params, schedule)
        _check_runs(runs, channel)
        f_sim = average_fidelity_exact(channel).value
        _check_fidelity(f_sim)
        rows.append(DiscrepancyRow.compute(params, f_sim))
    by_params = {r.params: r for r in rows}
    report = sorted(rows, key=lambda r: -abs(r.delta))

    check_points = list(dict.fromkeys(points + random_parameter_points(25, args.seed) + _corners()))
    deviation = cross_check(check_points, schedule)

    try:
        _write(_csv_text(report), args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT

    counts = {c: sum(r.agreement_class == c for r in rows) for c in ("exact", "approximate", "divergent")}
    print(f"rows={len(rows)} " + " ".join(f"{k}={v}" for k, v in counts.items()))
    print("thresholds: exact<=1e-9 approximate<=1e-3 (delta = f_sim_exact - f_eq9)")
    print(f"max_abs_delta={fmt(max(abs(r.delta) for r in rows))}")
    print(f"oracle_points={len(check_points)} oracle_max_deviation={deviation:.3e}")
    for name, pts in anchors.items():
        classes = sorted({by_params[p].agreement_class for p in pts})
        print(f"anchor {name}: rows={len(pts)} classes={','.join(classes)}")
    for p in anchors["readout_only(p1=p2=F=1)"]:
        r = by_params[p]
        print(f"anchor eta={p.eta:g}: class={r.agreement_class} f_eq9={fmt(r.f_paper)} f_sim_exact={fmt(r.f_sim)}")
    if deviation >= ORACLE_TOLERANCE:
        print(f"FAIL oracle deviation {deviation:.3e} >= {ORACLE_TOLERANCE:g}")
        return EXIT_ORACLE
    print("PASS oracle and dense simulator agree")
    return EXIT_OK


# ---------------------------------------------------------------- entry


def _add_schedule_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("schedule")
    g.add_argument("--no-cnot-noise", action="store_true", help="run Alice's CNOT ideally")
    g.add_argument("--no-hadamard-noise", action="store_true", help="run Alice's Hadamard ideally")
    g.add_argument("--no-measurement-noise", action="store_true", help="read out with eta=1")
    g.add_argument("--no-correction-noise", action="store_true", help="run Bob's correction ideally")
    g.add_argument("--ideal-identity-correction", action="store_true", help="skip noise on Bob's (0,0) identity")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisytele", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log invariant checks to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="average (and optionally per-state) fidelity at one parameter point")
    run.add_argument("--p1", type=float, default=1.0)
    run.add_argument("--p2", type=float, default=1.0)
    run.add_argument("--eta", type=float, default=1.0)
    run.add_argument("--werner-f", type=float, default=1.0)
    state = run.add_mutually_exclusive_group()
    state.add_argument("--state", metavar="THETA,PHI", help="Bloch angles of the message")
    state.add_argument("--haar-seed", type=int, metavar="N", help="Haar-random message from seed N")
    run.add_argument("--method", choices=METHODS, default="sim-exact")
    run.add_argument("--mc-samples", type=int, default=200_000)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--json", action="store_true")
    _add_schedule_flags(run)
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="grid sweep from a JSON config, CSV out")
    sweep.add_argument("config")
    sweep.add_argument("--out", metavar="PATH", help="overrides the config's output path; '-' for stdout")
    _add_schedule_flags(sweep)
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="closed form vs simulator report plus oracle cross-check")
    verify.add_argument("--grid", type=int, default=5, metavar="N", help="points per axis")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out", metavar="PATH", default="verify_report.csv")
    _add_schedule_flags(verify)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantError, ValueError) as exc:
        # arguments are validated up front, so a ValueError here is internal
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
