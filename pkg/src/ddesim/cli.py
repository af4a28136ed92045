"""Command line interface.

    ddesim spectrum|converge|chart|floquet|solve --config <path>
           [--N int] [--M int] [--out path] [--fail-on-unstable]

Exit codes: 0 on success, 1 on configuration or numerical errors, 2 when
``--fail-on-unstable`` is given and the verdict is unstable.  Every CSV
starts with a ``#``-prefixed comment block echoing the resolved
configuration as JSON; numbers are written with 17 significant digits so
doubles round-trip exactly.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .collocate import collocation_solve
from .config import ConfigError, RunConfig, load_run_config
from .evolution import SingularOperatorError, evolution_matrix
from .expressions import parse_coefficient
from .model import shift_problem
from .interp import GridPair
from .oracles import target_for_builtin
from .problems import builtin_defaults
from .spectra import SpectrumResult, dominant_multiplier, monodromy, multipliers

__all__ = ["ConvergenceReport", "main", "entry", "run_convergence"]

NONCOMPACT_WARNING = (
    "window shorter than the delay; the evolution operator is not compact in this regime"
)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path, header_cols, rows, echo_json, comments=()):
    lines = [f"# config: {echo_json}"]
    lines.extend(f"# {c}" for c in comments)
    lines.append(",".join(header_cols))
    for row in rows:
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _spectrum_rows(result: SpectrumResult) -> list[list[str]]:
    cluster_of = {}
    for cid, cl in enumerate(result.clusters):
        for member in cl.members:
            cluster_of[member] = cid
    rows = []
    for i, mu in enumerate(result.multipliers):
        cl = result.clusters[cluster_of[i]]
        rows.append(
            [
                _fmt(mu.real),
                _fmt(mu.imag),
                _fmt(abs(mu)),
                str(cluster_of[i]),
                _fmt(cl.mean.real),
                _fmt(cl.mean.imag),
                str(cl.count),
            ]
        )
    return rows


_SPECTRUM_HEADER = [
    "re",
    "im",
    "modulus",
    "cluster_id",
    "cluster_mean_re",
    "cluster_mean_im",
    "cluster_count",
]


def _spectrum_of(cfg: RunConfig, problem) -> SpectrumResult:
    mats = evolution_matrix(problem, cfg.n, cfg.m_resolved, cfg.rule())
    return multipliers(
        mats,
        zero_rel_tol=cfg.zero_rel_tol,
        cluster_tol=cfg.cluster_tol,
        margin=cfg.margin,
    )


def cmd_spectrum(cfg: RunConfig, out: str, fail_on_unstable: bool) -> int:
    problem = cfg.problem.build()
    comments = []
    if problem.rs < problem.tau:
        comments.append(f"warning: {NONCOMPACT_WARNING}")
        print(f"warning: {NONCOMPACT_WARNING}", file=sys.stderr)
    result = _spectrum_of(cfg, problem)
    _write_csv(out, _SPECTRUM_HEADER, _spectrum_rows(result), cfg.echo_json(), comments)
    top = abs(result.multipliers[0])
    print(f"verdict: {result.verdict} (dominant modulus = {_fmt(top)})")
    if fail_on_unstable and result.verdict == "unstable":
        return 2
    return 0


@dataclass
class ConvergenceReport:
    """Dominant-multiplier errors against a trusted target, per degree."""

    target: complex
    provenance: str
    degrees: list[int] = field(default_factory=list)
    dominants: list[complex] = field(default_factory=list)
    errors: list[float] = field(default_factory=list)

    @property
    def ratios(self) -> list[float]:
        """Decay diagnostic: consecutive error ratios (nan for the first row)."""
        out = [float("nan")]
        for prev, curr in zip(self.errors, self.errors[1:]):
            if prev == 0.0:
                out.append(float("nan") if curr == 0.0 else float("inf"))
            else:
                out.append(curr / prev)
        return out

    def monotone_ok(self, slack: float = 2.0, floor: float = 1e-13) -> bool:
        """Errors never grow by more than ``slack`` above the resolution floor."""
        for prev, curr in zip(self.errors, self.errors[1:]):
            if curr > floor and curr > slack * max(prev, floor):
                return False
        return True


def run_convergence(cfg: RunConfig) -> ConvergenceReport:
    problem_spec = cfg.problem
    window = problem_spec.r - problem_spec.s
    if cfg.target is not None:
        target = cfg.target
        provenance = "explicit target from configuration"
    else:
        if problem_spec.builtin is None:
            raise ConfigError(
                "no oracle is registered for expression problems; "
                "provide target_re/target_im in [converge] or use a builtin"
            )
        oracle = target_for_builtin(problem_spec.builtin, problem_spec.params, window)
        if oracle is None:
            raise ConfigError(
                f"no oracle is registered for builtin {problem_spec.builtin!r} "
                "with these parameters; provide target_re/target_im"
            )
        target, provenance = oracle.multiplier, oracle.provenance
    if target.imag < 0:
        target = target.conjugate()

    report = ConvergenceReport(target=target, provenance=provenance)
    for n in cfg.n_list:
        problem = problem_spec.build()
        mats = evolution_matrix(problem, n, None, cfg.rule(n))
        result = multipliers(
            mats,
            zero_rel_tol=cfg.zero_rel_tol,
            cluster_tol=cfg.cluster_tol,
            margin=cfg.margin,
        )
        mu = dominant_multiplier(result)
        report.degrees.append(n)
        report.dominants.append(mu)
        report.errors.append(abs(mu - target))
    return report


def cmd_converge(cfg: RunConfig, out: str) -> int:
    report = run_convergence(cfg)
    rows = [
        [str(n), _fmt(mu.real), _fmt(mu.imag), _fmt(err), _fmt(ratio)]
        for n, mu, err, ratio in zip(
            report.degrees, report.dominants, report.errors, report.ratios
        )
    ]
    comments = [
        f"target: {_fmt(report.target.real)},{_fmt(report.target.imag)} ({report.provenance})"
    ]
    _write_csv(
        out,
        ["N", "dominant_re", "dominant_im", "abs_error", "ratio_to_prev"],
        rows,
        cfg.echo_json(),
        comments,
    )
    print(f"target: {report.target} ({report.provenance})")
    print(f"final error at N={cfg.n_list[-1]}: {_fmt(report.errors[-1])}")
    return 0


def cmd_chart(cfg: RunConfig, out: str) -> int:
    chart = cfg.chart
    if cfg.problem.builtin is None:
        raise ConfigError("chart requires a builtin problem with named parameters")
    known = builtin_defaults(cfg.problem.builtin)
    for key in (chart["param1"], chart["param2"]):
        if key not in known:
            raise ConfigError(
                f"builtin {cfg.problem.builtin!r} has no parameter {key!r}; "
                f"expected one of {sorted(known)}"
            )
    rows = []
    for v1 in chart["values1"]:
        for v2 in chart["values2"]:
            overrides = {chart["param1"]: v1, chart["param2"]: v2}
            try:
                problem = cfg.problem.build(overrides=overrides)
                result = _spectrum_of(cfg, problem)
                rows.append(
                    [
                        _fmt(v1),
                        _fmt(v2),
                        _fmt(abs(result.multipliers[0])),
                        result.verdict,
                    ]
                )
            except (SingularOperatorError, ValueError, np.linalg.LinAlgError):
                # a failed grid point is recorded, not fatal
                rows.append([_fmt(v1), _fmt(v2), "nan", "error"])
    _write_csv(out, ["p1", "p2", "dominant_modulus", "verdict"], rows, cfg.echo_json())
    print(f"chart: {len(rows)} grid points written")
    return 0


def _periodicity_warning(problem, omega: float) -> str | None:
    """Probe the coefficients for omega-periodicity at a few sample points."""
    ts = [problem.s + f * min(problem.tau, omega) for f in (0.0, 0.3, 0.7)]
    worst = 0.0
    for t in ts:
        for coeff in (problem.a, problem.b):
            if coeff is not None:
                worst = max(worst, float(np.abs(coeff(t + omega) - coeff(t)).max()))
        if problem.c is not None:
            for theta in (-problem.tau, -0.5 * problem.tau, 0.0):
                worst = max(
                    worst,
                    float(np.abs(problem.c(t + omega, theta) - problem.c(t, theta)).max()),
                )
    if worst > 1e-10:
        return (
            f"coefficients do not look {omega}-periodic "
            f"(max deviation {worst:.3e} at probe points)"
        )
    return None


def cmd_floquet(cfg: RunConfig, out: str, fail_on_unstable: bool) -> int:
    problem = cfg.problem.build()
    omega = cfg.omega
    comments = []
    warning = _periodicity_warning(problem, omega)
    if warning is not None:
        comments.append(f"warning: {warning}")
        print(f"warning: {warning}", file=sys.stderr)
    k = cfg.k if cfg.k is not None else max(1, math.ceil(problem.tau / omega - 1e-12))
    cfg.k = k
    window = k * omega
    mats = monodromy(problem, omega, k=k, n=cfg.n, m=cfg.m_resolved, rule=cfg.rule())
    result = multipliers(
        mats,
        zero_rel_tol=cfg.zero_rel_tol,
        cluster_tol=cfg.cluster_tol,
        margin=cfg.margin,
    )
    comments.append(f"k: {k}")
    comments.append(f"window: {_fmt(window)}")
    if k > 1:
        comments.append(
            "multipliers are eigenvalues of the k-th power of the period map; "
            "no roots are extracted"
        )
    if window < problem.tau:
        comments.append(f"warning: {NONCOMPACT_WARNING}")
    _write_csv(out, _SPECTRUM_HEADER, _spectrum_rows(result), cfg.echo_json(), comments)
    top = abs(result.multipliers[0])
    print(f"verdict: {result.verdict} (dominant modulus = {_fmt(top)}, k = {k})")
    if fail_on_unstable and result.verdict == "unstable":
        return 2
    return 0


def cmd_solve(cfg: RunConfig, out: str) -> int:
    problem = cfg.problem.build()
    phi_expr = parse_coefficient(cfg.phi, allow_theta=True, allow_t=False)

    def phi(theta):
        return phi_expr(theta=theta)

    shifted = shift_problem(problem)
    grids = GridPair.build(cfg.n, cfg.m_resolved, shifted.rs, problem.tau)
    sol = collocation_solve(shifted, phi, grids, cfg.rule())
    header = ["t"]
    for j in range(problem.dim):
        header.extend([f"re_{j}", f"im_{j}"])
    rows = []
    for t in np.linspace(0.0, shifted.rs, cfg.samples):
        val = np.atleast_1d(sol(t))
        row = [_fmt(t)]
        for j in range(problem.dim):
            row.extend([_fmt(val[j].real), _fmt(val[j].imag)])
        rows.append(row)
    _write_csv(out, header, rows, cfg.echo_json())
    print(f"solve: {cfg.samples} samples written on [0, {_fmt(shifted.rs)}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddesim",
        description="Stability spectra of linear delay differential equations "
        "by collocation of the evolution operator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "multipliers and stability verdict"),
        ("converge", "dominant-multiplier error against an oracle target, per N"),
        ("chart", "stability chart over a 2-parameter grid"),
        ("floquet", "Floquet multipliers of a periodic problem"),
        ("solve", "solve the initial value problem by collocation"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the configuration file")
        p.add_argument("--N", type=int, default=None, help="override collocation degree")
        p.add_argument("--M", type=int, default=None, help="override history node count")
        p.add_argument("--out", default=None, help=f"output CSV path (default {name}.csv)")
        if name in ("spectrum", "floquet"):
            p.add_argument(
                "--fail-on-unstable",
                action="store_true",
                help="exit with code 2 when the verdict is unstable",
            )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = args.out if args.out is not None else f"{args.command}.csv"
    try:
        cfg = load_run_config(args.config, args.command, args.N, args.M)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, out, args.fail_on_unstable)
        if args.command == "converge":
            return cmd_converge(cfg, out)
        if args.command == "chart":
            return cmd_chart(cfg, out)
        if args.command == "floquet":
            return cmd_floquet(cfg, out, args.fail_on_unstable)
        return cmd_solve(cfg, out)
    except (ConfigError, SingularOperatorError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
