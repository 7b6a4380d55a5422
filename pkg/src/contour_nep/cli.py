"""Batch experiment runner: ``contour-nep run config.yaml``.

Config files are YAML (JSON is accepted too)::

    problem:
      name: delay-2x2          # gallery name, or give `coefficients` / `file`
      params: {tau: 1.0}
    contour: {kind: circle, center: [-1.0, 0.0], radius: 6.0}
    solver: {K: 3, l: 2, N: 150, identity_probe: true}
    sweep: [20, 40, 60, 80, 100, 150]
    verify: true
    output: results/delay

Outputs in the output directory: ``eigenvalues.csv``, ``singular_values.csv``,
``convergence.csv`` (with a sweep) and ``summary.json``.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, List, Optional

import numpy as np
import yaml

from .contour import Contour
from .matfunc import DomainError, PolynomialMatrixFunction, make_gallery_problem
from .moments import NodeFailure
from .oracle import OracleError, newton_refine, polyeig_oracle
from .solver import (
    EigenResult,
    RankGapNotFound,
    ReducedEigenproblemError,
    SolverConfig,
    solve,
)

log = logging.getLogger("contour_nep")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4
SOLVER_ERRORS = (NodeFailure, RankGapNotFound, ReducedEigenproblemError, DomainError, OracleError)


class ConfigError(ValueError):
    pass


def _strict(cls, data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a mapping, got {type(data).__name__}")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(repr(k) for k in unknown)}")
    return data


def _complex(value, where):
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{where}: expected a number or [re, im], got {value!r}")


@dataclass
class ProblemSpec:
    name: Optional[str] = None
    params: dict = field(default_factory=dict)
    coefficients: Optional[list] = None
    coefficients_imag: Optional[list] = None
    file: Optional[str] = None

    @classmethod
    def from_dict(cls, d):
        spec = cls(**_strict(cls, d, "problem"))
        given = [k for k in ("name", "coefficients", "file") if getattr(spec, k) is not None]
        if len(given) != 1:
            raise ConfigError("problem: give exactly one of 'name', 'coefficients', 'file'")
        if not isinstance(spec.params, dict):
            raise ConfigError("problem.params: expected a mapping")
        return spec

    def build(self, base: Path = Path(".")):
        if self.name is not None:
            return make_gallery_problem(self.name, self.params)
        if self.file is not None:
            path = Path(self.file)
            arr = np.load(path if path.is_absolute() else base / path)
            return PolynomialMatrixFunction(list(arr), name="polynomial")
        re = np.asarray(self.coefficients, dtype=float)
        im = np.zeros_like(re) if self.coefficients_imag is None else np.asarray(self.coefficients_imag, dtype=float)
        if re.ndim != 3 or re.shape[1] != re.shape[2] or im.shape != re.shape:
            raise ConfigError("problem.coefficients: expected a list of equally sized square matrices")
        return PolynomialMatrixFunction(list(re + 1j * im), name="polynomial")


@dataclass
class ContourSpec:
    kind: str = "circle"
    center: Any = field(default_factory=lambda: [0.0, 0.0])
    radius: Optional[float] = None
    semi_axes: Optional[list] = None

    @classmethod
    def from_dict(cls, d):
        spec = cls(**_strict(cls, d, "contour"))
        c = _complex(spec.center, "contour.center")
        spec.center = [c.real, c.imag]
        spec.build()
        return spec

    def build(self) -> Contour:
        center = _complex(self.center, "contour.center")
        try:
            if self.kind == "circle":
                if self.radius is None:
                    raise ConfigError("contour.radius: required for a circle")
                return Contour.circle(center, self.radius)
            if self.kind == "ellipse":
                if self.semi_axes is None or len(self.semi_axes) != 2:
                    raise ConfigError("contour.semi_axes: required as [a, b] for an ellipse")
                return Contour.ellipse(center, *self.semi_axes)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"contour: {exc}") from exc
        raise ConfigError(f"contour.kind: expected 'circle' or 'ellipse', got {self.kind!r}")


def solver_config_from_dict(d) -> SolverConfig:
    d = dict(_strict(SolverConfig, d or {}, "solver"))
    if "shift" in d:
        d["shift"] = _complex(d["shift"], "solver.shift")
    return SolverConfig(**d)


def solver_config_to_dict(cfg: SolverConfig) -> dict:
    d = asdict(cfg)
    if d["shift"] is not None:
        d["shift"] = [d["shift"].real, d["shift"].imag]
    return d


@dataclass
class ExperimentConfig:
    problem: ProblemSpec
    contour: ContourSpec
    solver: SolverConfig = field(default_factory=SolverConfig)
    sweep: Optional[List[int]] = None
    verify: bool = False
    output: str = "results"

    @classmethod
    def from_dict(cls, d) -> "ExperimentConfig":
        d = _strict(cls, d, "config")
        for key in ("problem", "contour"):
            if key not in d:
                raise ConfigError(f"config: missing required key {key!r}")
        sweep = d.get("sweep")
        if sweep is not None:
            if not isinstance(sweep, list) or not all(isinstance(n, int) and n > 0 for n in sweep):
                raise ConfigError("sweep: expected a list of positive integers")
        try:
            solver = solver_config_from_dict(d.get("solver"))
        except TypeError as exc:
            raise ConfigError(f"solver: {exc}") from exc
        return cls(
            ProblemSpec.from_dict(d["problem"]),
            ContourSpec.from_dict(d["contour"]),
            solver,
            sweep,
            bool(d.get("verify", False)),
            str(d.get("output", "results")),
        )

    def to_dict(self) -> dict:
        return {
            "problem": {k: v for k, v in asdict(self.problem).items() if v is not None and v != {}},
            "contour": {k: v for k, v in asdict(self.contour).items() if v is not None},
            "solver": solver_config_to_dict(self.solver),
            "sweep": self.sweep,
            "verify": self.verify,
            "output": self.output,
        }


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return ExperimentConfig.from_dict(data)


# ------------------------------------------------------------------ running


def _num(x) -> str:
    return repr(float(x))


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def eigenvalue_rows(result: EigenResult):
    return [
        [_num(p.value.real), _num(p.value.imag), _num(p.residual), p.status]
        for p in result.candidates
    ]


def track(reference, values, cutoff):
    """Nearest-neighbour match of each reference value; None when farther than cutoff."""
    out = []
    values = np.asarray(values, dtype=complex)
    for ref in reference:
        if values.size == 0:
            out.append(None)
            continue
        d = np.abs(values - ref)
        i = int(np.argmin(d))
        out.append(values[i] if d[i] <= cutoff else None)
    return out


def verify_result(problem, contour, result, rtol=1e-6):
    """Cross-check accepted eigenvalues against an oracle; returns (ok, report)."""
    report = {"checked": 0, "mismatches": []}
    if isinstance(problem, PolynomialMatrixFunction):
        ref = polyeig_oracle(problem)
        report["method"] = "companion-pencil"
        R = contour.scale
        for lam in result.eigenvalues:
            report["checked"] += 1
            err = float(np.min(np.abs(ref - lam))) if ref.size else np.inf
            if err > rtol * max(1.0, abs(lam)):
                report["mismatches"].append({"lambda": [lam.real, lam.imag], "error": err})
        interior = [z for z in ref if contour.contains(z) and contour.distance(z) > 0.02 * R]
        report["oracle_interior"] = len(interior)
        for z in interior:
            err = float(np.min(np.abs(result.eigenvalues - z))) if result.accepted else np.inf
            if err > rtol * max(1.0, abs(z)):
                report["mismatches"].append({"missed": [z.real, z.imag], "error": err})
    elif problem.has_derivative:
        report["method"] = "newton"
        for p in result.accepted:
            report["checked"] += 1
            try:
                nr = newton_refine(problem, p.value, p.vector, tol=1e-10 * max(1.0, np.linalg.norm(problem.evaluate(p.value), 2)))
                err = abs(nr.value - p.value)
            except OracleError as exc:
                report["mismatches"].append({"lambda": [p.value.real, p.value.imag], "error": str(exc)})
                continue
            if err > rtol * max(1.0, abs(p.value)):
                report["mismatches"].append({"lambda": [p.value.real, p.value.imag], "error": err})
    else:
        report["method"] = "none"
    return not report["mismatches"], report


def run(config: ExperimentConfig, base: Path = Path(".")) -> int:
    """Run one experiment and write its result files; returns the exit code."""
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    summary = {"status": "ok"}
    t0 = time.perf_counter()
    try:
        problem = config.problem.build(base)
        contour = config.contour.build()
        cfg = config.solver.resolve(problem.dimension, contour)
    except (ValueError, OSError) as exc:
        log.error("config error: %s", exc)
        _dump_summary(out, {"status": "config-error", "error": str(exc)})
        return EXIT_CONFIG
    resolved = replace(config, solver=cfg)
    summary["config"] = resolved.to_dict()
    timings = {}

    try:
        t = time.perf_counter()
        result = solve(problem, contour, cfg)
        timings["solve"] = time.perf_counter() - t
    except SOLVER_ERRORS as exc:
        log.error("solver failure: %s", exc)
        summary.update(status="solver-failure", error=str(exc))
        _dump_summary(out, summary)
        return EXIT_SOLVER

    _write_csv(out / "eigenvalues.csv", ["re", "im", "residual", "status"], eigenvalue_rows(result))
    summary.update(
        k=result.rank_k,
        config_used=result.config_used,
        accepted=len(result.accepted),
        rejected=len(result.rejected),
        eigenvalues=[[p.value.real, p.value.imag, p.residual] for p in result.accepted],
    )

    sweep_results = {}
    if config.sweep:
        t = time.perf_counter()
        for N in sorted(set(config.sweep)):
            try:
                sweep_results[N] = solve(problem, contour, replace(cfg, N=N))
            except SOLVER_ERRORS as exc:
                log.warning("sweep N=%d failed: %s", N, exc)
                sweep_results[N] = exc
        timings["sweep"] = time.perf_counter() - t
    else:
        sweep_results[cfg.N] = result

    width = max((len(r.singular_values) for r in sweep_results.values() if isinstance(r, EigenResult)), default=0)
    rows = []
    for N, r in sweep_results.items():
        if isinstance(r, EigenResult):
            sv = [_num(s) for s in r.singular_values]
            rows.append([N, r.rank_k] + sv + [""] * (width - len(sv)))
        else:
            rows.append([N, ""] + [""] * width)
    _write_csv(out / "singular_values.csv", ["N", "k"] + [f"sigma_{i + 1}" for i in range(width)], rows)

    ok = True
    if config.verify:
        try:
            t = time.perf_counter()
            ok, report = verify_result(problem, contour, result)
            timings["verify"] = time.perf_counter() - t
        except OracleError as exc:
            ok, report = False, {"error": str(exc)}
        summary["verification"] = report

    if config.sweep:
        summary["convergence_reference"] = _write_convergence(out, problem, contour, config, sweep_results)

    timings["total"] = time.perf_counter() - t0
    summary["timings"] = timings
    if not ok:
        summary["status"] = "verification-mismatch"
    _dump_summary(out, summary)
    return EXIT_OK if ok else EXIT_VERIFY


def _write_convergence(out, problem, contour, config, sweep_results):
    good = {N: r for N, r in sweep_results.items() if isinstance(r, EigenResult)}
    if not good:
        _write_csv(out / "convergence.csv", ["N", "ref", "ref_re", "ref_im", "re", "im", "error", "tracked"], [])
        return "none"
    if config.verify and isinstance(problem, PolynomialMatrixFunction):
        ref = [z for z in polyeig_oracle(problem) if contour.contains(z)]
        source = "oracle"
    else:
        ref = list(good[max(good)].eigenvalues)
        source = f"N={max(good)}"
    cutoff = 0.1 * contour.scale
    rows = []
    for N, r in good.items():
        for i, (z, hit) in enumerate(zip(ref, track(ref, r.eigenvalues, cutoff))):
            if hit is None:
                rows.append([N, i, _num(z.real), _num(z.imag), "", "", "", "untracked"])
            else:
                rows.append([N, i, _num(z.real), _num(z.imag), _num(hit.real), _num(hit.imag), _num(abs(hit - z)), "tracked"])
    _write_csv(out / "convergence.csv", ["N", "ref", "ref_re", "ref_im", "re", "im", "error", "tracked"], rows)
    return source


def _dump_summary(out, summary):
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, default=str)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="contour-nep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run an experiment from a config file")
    p.add_argument("config")
    p.add_argument("--output", help="output directory (overrides config)")
    p.add_argument("--seed", type=int, help="probe RNG seed (overrides config)")
    p.add_argument("--sweep", help='comma-separated node counts, e.g. "20,40,80"')
    p.add_argument("--verify", action="store_true", help="cross-check against an oracle")
    p.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")

    try:
        config = load_config(args.config)
        if args.output:
            config.output = args.output
        if args.seed is not None:
            config.solver = replace(config.solver, seed=args.seed)
        if args.sweep:
            try:
                config.sweep = [int(s) for s in args.sweep.split(",") if s.strip()]
            except ValueError as exc:
                raise ConfigError(f"--sweep: {exc}") from exc
        if args.verify:
            config.verify = True
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code = run(config, base=Path(args.config).resolve().parent)
    if code == EXIT_OK:
        print(f"results written to {config.output}")
    return code


if __name__ == "__main__":
    sys.exit(main())
