"""Run configuration: flat key-value files with bracketed sections.

The format is a plain-text subset easy to parse in any language::

    [problem]
    builtin = hayes
    a = 0.0
    b = -1.0
    tau = 1.0

    [discretization]
    N = 20

Full-line comments start with ``#``; values may be wrapped in double
quotes (required for expressions).  Every command echoes the fully
resolved configuration as a JSON comment in its output so runs are
reproducible from the artifact alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .model import DdeProblem, matrix_problem, scalar_problem
from .problems import BUILTINS, builtin_defaults, make_builtin
from .quadrature import QuadratureRule, default_rule, make_rule

__all__ = ["ConfigError", "ProblemSpec", "RunConfig", "parse_config_text", "load_run_config"]

_WINDOW_KEYS = {"tau", "s", "r", "rs", "dim"}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def parse_config_text(text: str) -> dict[str, dict[str, str]]:
    """Parse the sectioned key-value format into nested dicts."""
    sections: dict[str, dict[str, str]] = {}
    current = sections.setdefault("", {})
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = sections.setdefault(line[1:-1].strip(), {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if len(value) >= 2 and value[0] == '"' and value[-1] == '"':
            value = value[1:-1]
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        current[key] = value
    sections.pop("", None)
    return sections


def _get_float(section: dict, key: str, default=None) -> float | None:
    if key not in section:
        return default
    try:
        return float(section[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected a number, got {section[key]!r}") from exc


def _get_int(section: dict, key: str, default=None) -> int | None:
    if key not in section:
        return default
    try:
        return int(section[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected an integer, got {section[key]!r}") from exc


def _parse_expression_grid(source: str) -> str | list[list[str]]:
    """Split a ``;``/``,``-separated grid of expressions (functions are unary,
    so these separators never occur inside an expression)."""
    if ";" not in source and "," not in source:
        return source
    return [[e.strip() for e in row.split(",")] for row in source.split(";")]


@dataclass
class ProblemSpec:
    """Serializable description of a problem, rebuildable with overrides."""

    builtin: str | None
    params: dict[str, float]
    a: str | None
    b: str | None
    c: str | None
    dim: int
    tau: float
    s: float
    r: float

    @classmethod
    def from_section(cls, section: dict[str, str]) -> "ProblemSpec":
        tau = _get_float(section, "tau")
        s = _get_float(section, "s", 0.0)
        r = _get_float(section, "r")
        rs = _get_float(section, "rs")
        builtin = section.get("builtin")
        if builtin is not None:
            if builtin not in BUILTINS:
                raise ConfigError(
                    f"unknown builtin {builtin!r}; available: {sorted(BUILTINS)}"
                )
            defaults = builtin_defaults(builtin)
            params = dict(defaults)
            for key, value in section.items():
                if key in ("builtin",) or key in _WINDOW_KEYS - {"tau"}:
                    continue
                if key == "tau":
                    params["tau"] = float(value)
                    continue
                if key not in defaults:
                    raise ConfigError(
                        f"builtin {builtin!r} has no parameter {key!r}; "
                        f"expected one of {sorted(defaults)}"
                    )
                params[key] = float(value)
            tau = params["tau"]
            a = b = c = None
            dim = 1
        else:
            if tau is None:
                raise ConfigError("expression problems require a 'tau' key")
            allowed = {"a", "b", "c"} | _WINDOW_KEYS
            unknown = set(section) - allowed
            if unknown:
                raise ConfigError(
                    f"unknown [problem] keys {sorted(unknown)}; "
                    f"expected a subset of {sorted(allowed)} (or 'builtin = <name>')"
                )
            params = {}
            a = section.get("a")
            b = section.get("b")
            c = section.get("c")
            dim = _get_int(section, "dim", 1)
        if r is None:
            r = s + (rs if rs is not None else tau)
        elif rs is not None:
            raise ConfigError("give either 'r' or 'rs', not both")
        return cls(
            builtin=builtin, params=params, a=a, b=b, c=c, dim=dim, tau=tau, s=s, r=r
        )

    def build(
        self,
        overrides: dict[str, float] | None = None,
        s: float | None = None,
        r: float | None = None,
    ) -> DdeProblem:
        s = self.s if s is None else s
        r = self.r if r is None else r
        if self.builtin is not None:
            params = dict(self.params)
            params.update(overrides or {})
            return make_builtin(self.builtin, params, s=s, r=r)
        if overrides:
            raise ConfigError(
                "parameter overrides only apply to builtin problems; "
                "expression problems have no named parameters"
            )
        build_args = {}
        for key, source in (("a", self.a), ("b", self.b), ("c", self.c)):
            build_args[key] = None if source is None else _parse_expression_grid(source)
        if self.dim == 1:
            return scalar_problem(tau=self.tau, s=s, r=r, **build_args)
        return matrix_problem(dim=self.dim, tau=self.tau, s=s, r=r, **build_args)

    def echo(self) -> dict:
        out: dict = {"tau": self.tau, "s": self.s, "r": self.r, "dim": self.dim}
        if self.builtin is not None:
            out["builtin"] = self.builtin
            out["params"] = dict(sorted(self.params.items()))
        else:
            for key, source in (("a", self.a), ("b", self.b), ("c", self.c)):
                if source is not None:
                    out[key] = source
        return out


@dataclass
class RunConfig:
    """Fully resolved configuration for one CLI command."""

    command: str
    problem: ProblemSpec
    n: int = 16
    m: int | None = None
    quad_kind: str = "gauss_legendre"
    quad_points: int | None = None
    zero_rel_tol: float = 1e-10
    cluster_tol: float | None = None
    margin: float = 1e-9
    n_list: tuple[int, ...] = ()
    target: complex | None = None
    chart: dict | None = None
    omega: float | None = None
    k: int | None = None
    phi: str | None = None
    samples: int = 201

    @property
    def m_resolved(self) -> int:
        return self.n if self.m is None else self.m

    def rule(self, n: int | None = None) -> QuadratureRule:
        n = self.n if n is None else n
        if self.quad_points is None:
            if self.quad_kind == "gauss_legendre":
                return default_rule(n)
            return make_rule(self.quad_kind, max(n + 3, 8))
        return make_rule(self.quad_kind, self.quad_points)

    def echo_json(self) -> str:
        data = {
            "command": self.command,
            "problem": self.problem.echo(),
            "N": self.n,
            "M": self.m_resolved,
            "quad_kind": self.quad_kind,
            "quad_points": self.quad_points,
            "zero_rel_tol": self.zero_rel_tol,
            "cluster_tol": self.cluster_tol,
            "margin": self.margin,
        }
        if self.command == "converge":
            data["N_list"] = list(self.n_list)
            if self.target is not None:
                data["target"] = [self.target.real, self.target.imag]
        if self.command == "chart" and self.chart is not None:
            data["chart"] = {
                "param1": self.chart["param1"],
                "values1": list(self.chart["values1"]),
                "param2": self.chart["param2"],
                "values2": list(self.chart["values2"]),
            }
        if self.command == "floquet":
            data["omega"] = self.omega
            data["k"] = self.k
        if self.command == "solve":
            data["phi"] = self.phi
            data["samples"] = self.samples
        return json.dumps(data, sort_keys=True, separators=(", ", ": "))


def _parse_number_list(text: str, kind=float) -> list:
    items = text.replace(",", " ").split()
    if not items:
        raise ConfigError("empty list value")
    return [kind(x) for x in items]


def load_run_config(
    path: str,
    command: str,
    n_override: int | None = None,
    m_override: int | None = None,
) -> RunConfig:
    """Read and resolve a configuration file for ``command``."""
    with open(path, "r", encoding="utf-8") as fh:
        sections = parse_config_text(fh.read())
    if "problem" not in sections:
        raise ConfigError("missing [problem] section")
    problem = ProblemSpec.from_section(sections["problem"])

    disc = sections.get("discretization", {})
    tols = sections.get("tolerances", {})
    cfg = RunConfig(
        command=command,
        problem=problem,
        n=_get_int(disc, "N", 16),
        m=_get_int(disc, "M"),
        quad_kind=disc.get("quad_kind", "gauss_legendre"),
        quad_points=_get_int(disc, "quad_points"),
        zero_rel_tol=_get_float(tols, "zero_rel_tol", 1e-10),
        cluster_tol=_get_float(tols, "cluster_tol"),
        margin=_get_float(tols, "margin", 1e-9),
    )
    if cfg.quad_kind not in ("gauss_legendre", "clenshaw_curtis"):
        raise ConfigError(f"unknown quad_kind {cfg.quad_kind!r}")
    if n_override is not None:
        cfg.n = n_override
    if m_override is not None:
        cfg.m = m_override
    if cfg.n < 1 or cfg.m_resolved < 1:
        raise ConfigError("N and M must be positive")

    if command == "converge":
        conv = sections.get("converge", {})
        if "N_list" not in conv:
            raise ConfigError("converge requires an 'N_list' key in [converge]")
        cfg.n_list = tuple(_parse_number_list(conv["N_list"], int))
        tre, tim = _get_float(conv, "target_re"), _get_float(conv, "target_im", 0.0)
        if tre is not None:
            cfg.target = complex(tre, tim)
    elif command == "chart":
        chart = sections.get("chart", {})
        for key in ("param1", "values1", "param2", "values2"):
            if key not in chart:
                raise ConfigError(f"chart requires the {key!r} key in [chart]")
        cfg.chart = {
            "param1": chart["param1"],
            "values1": _parse_number_list(chart["values1"]),
            "param2": chart["param2"],
            "values2": _parse_number_list(chart["values2"]),
        }
    elif command == "floquet":
        flo = sections.get("floquet", {})
        omega = _get_float(flo, "omega")
        if omega is None:
            raise ConfigError("floquet requires an 'omega' key in [floquet]")
        if omega <= 0:
            raise ConfigError("omega must be positive")
        cfg.omega = omega
        k = _get_int(flo, "k", 0)
        cfg.k = None if k == 0 else k
    elif command == "solve":
        sol = sections.get("solve", {})
        if "phi" not in sol:
            raise ConfigError("solve requires a 'phi' key in [solve]")
        cfg.phi = sol["phi"]
        cfg.samples = _get_int(sol, "samples", 201)
        if cfg.samples < 2:
            raise ConfigError("samples must be at least 2")
    return cfg
