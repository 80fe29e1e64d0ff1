"""Command-line front end: config parsing, pipeline dispatch, result files.

Config and result documents are JSON.  A run writes a single result
document, a trajectory CSV and a best-effort SVG plot into the output
directory.  Exit codes: 0 certified (or all conditions pass), 1 usage or
config error, 2 solved but not certified, 3 a hypothesis audit failed.
"""
from __future__ import annotations

import argparse
import copy
import csv
import dataclasses
import importlib
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path

import jsonschema
import numpy as np

from .action import DirectActionContext, DualActionContext
from .certify import (
    Certificate,
    check_hamiltonian_conditions,
    check_potential_conditions,
    energy_drift,
    infmax_audit,
    minimal_period_certificate,
    ode_residual,
)
from .models import (
    FenchelError,
    HamiltonianModel,
    PotentialModel,
    builtin_hamiltonian,
    builtin_potential,
    fenchel_transform,
    quadratic_hamiltonian,
    sphere_directions,
)
from .nehari import SolverConfig, SolverError, direct_orbit, recover_orbit
from .pipeline import ConditionFailure, SolveResult, solve_direct, solve_dual
from .symfun import Symmetry, make_space

__all__ = ["RunConfig", "ModelSpec", "OutputSpec", "CONFIG_SCHEMA", "load_config", "run", "main",
           "build_model", "emit_outputs", "sweep", "ConfigError"]

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_NOT_CERTIFIED, EXIT_CONDITIONS = 0, 1, 2, 3
MODES = ("solve_direct", "solve_dual", "check_conditions", "fenchel_table", "certify")

_SOLVER_PROPS = {
    "restarts": {"type": "integer", "minimum": 1},
    "max_outer_iters": {"type": "integer", "minimum": 1},
    "initial_step": {"type": "number", "exclusiveMinimum": 0},
    "shrink": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    "growth": {"type": "number", "exclusiveMinimum": 1},
    "max_step": {"type": "number", "exclusiveMinimum": 0},
    "armijo": {"type": "number", "exclusiveMinimum": 0},
    "grad_tol": {"type": "number", "exclusiveMinimum": 0},
    "newton_tol": {"type": ["number", "null"], "exclusiveMinimum": 0},
    "newton_max_iter": {"type": "integer", "minimum": 0},
    "gradient_mode": {"enum": ["auto", "sampling"]},
    "seed": {"type": "integer"},
    "workers": {"type": "integer", "minimum": 1},
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["mode", "model"],
    "properties": {
        "mode": {"enum": list(MODES)},
        "formulation": {"enum": ["direct", "dual"]},
        "model": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "name": {"type": "string"},
                "params": {"type": "object"},
                "plugin": {"type": ["string", "null"], "pattern": "^[A-Za-z_][\\w.]*:[A-Za-z_]\\w*$"},
                "kind": {"enum": ["potential", "hamiltonian", None]},
            },
            "anyOf": [{"required": ["name"]}, {"required": ["plugin"]}],
        },
        "period_T": {"type": "number", "exclusiveMinimum": 0},
        "dimension": {"type": ["integer", "null"], "minimum": 1},
        "symmetry_class": {"enum": [s.value for s in Symmetry]},
        "num_modes": {"type": ["integer", "null"], "minimum": 1},
        "solver": {"type": "object", "additionalProperties": False, "properties": _SOLVER_PROPS},
        "audit_rays": {"type": "integer", "minimum": 1},
        "force": {"type": "boolean"},
        "truncation_check": {"type": "boolean"},
        "sweep_periods": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "fenchel_points": {"type": "integer", "minimum": 1},
        "input": {"type": ["string", "null"]},
        "coefficients": {"type": ["array", "null"]},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dir": {"type": "string"},
                "result": {"type": "string"},
                "trajectory": {"type": "string"},
                "plot": {"type": "string"},
            },
        },
    },
    "allOf": [
        {"if": {"properties": {"mode": {"enum": ["solve_direct", "solve_dual", "certify"]}}},
         "then": {"required": ["period_T"]}},
    ],
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    name: str | None = None
    params: dict = field(default_factory=dict)
    plugin: str | None = None
    kind: str | None = None


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "."
    result: str = "result.json"
    trajectory: str = "trajectory.csv"
    plot: str = "orbit.svg"


@dataclass(frozen=True)
class RunConfig:
    mode: str
    model: ModelSpec
    period_T: float | None = None
    formulation: str = "direct"
    dimension: int | None = None
    symmetry_class: str = "E1"
    num_modes: int | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    audit_rays: int = 100
    force: bool = False
    truncation_check: bool = True
    sweep_periods: tuple = ()
    fenchel_points: int = 100
    input: str | None = None
    coefficients: list | None = None
    output: OutputSpec = field(default_factory=OutputSpec)

    @property
    def is_dual(self) -> bool:
        return self.formulation == "dual"

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            jsonschema.validate(d, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"invalid config at {where}: {exc.message}") from None
        d = copy.deepcopy(d)
        mode = d["mode"]
        if mode in ("solve_dual", "fenchel_table"):
            if d.setdefault("formulation", "dual") != "dual":
                raise ConfigError(f"mode {mode} needs formulation 'dual'")
        elif mode == "solve_direct" and d.setdefault("formulation", "direct") != "direct":
            raise ConfigError("mode solve_direct needs formulation 'direct'")
        dual = d.get("formulation", "direct") == "dual"
        model = ModelSpec(**d.pop("model"))
        if model.kind is None:
            model = dataclasses.replace(model, kind="hamiltonian" if dual else "potential")
        if d.get("dimension") is None:
            d["dimension"] = 2 if model.kind == "hamiltonian" else 1
        if d.get("num_modes") is None:
            d["num_modes"] = 16 if dual else 8
        solver = SolverConfig(**d.pop("solver", {}))
        output = OutputSpec(**d.pop("output", {}))
        periods = tuple(float(t) for t in d.pop("sweep_periods", ()))
        return cls(model=model, solver=solver, output=output, sweep_periods=periods, **d)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["sweep_periods"] = list(self.sweep_periods)
        for k in ("input", "coefficients"):
            if d[k] is None:
                del d[k]
        if d["period_T"] is None:
            del d["period_T"]
        return d


def _set_path(d: dict, dotted: str, value):
    keys = dotted.split(".")
    cur = d
    for k in keys[:-1]:
        cur = cur.setdefault(k, {})
        if not isinstance(cur, dict):
            raise ConfigError(f"cannot set {dotted!r}: {k!r} is not a mapping")
    cur[keys[-1]] = value


def parse_override(text: str) -> tuple[str, object]:
    """key=value with value read as JSON when possible, else as a string."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def load_config(path: str | None, overrides=(), mode: str | None = None,
                sweep: bool = False) -> RunConfig:
    d: dict = {}
    if path is not None:
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError("config root must be an object")
    if mode is not None:
        d["mode"] = mode
    for key, value in overrides:
        _set_path(d, key, value)
    # the reference instance: |x|^4/4 (direct) or |z|^4/4 (dual)
    m = d.setdefault("model", {})
    if isinstance(m, dict) and not m.get("name") and not m.get("plugin"):
        m["name"] = "power"
        m.setdefault("params", {"beta": 4})
    if sweep and "period_T" not in d and d.get("sweep_periods"):
        d["period_T"] = d["sweep_periods"][0]
    return RunConfig.from_dict(d)


# ---------------------------------------------------------------------------
# models


def build_model(spec: ModelSpec, dim: int):
    """Instantiate a built-in model or a plug-in given as "module:attr".

    A plug-in attribute is either a model instance or a callable taking
    (params, dim) and returning one.
    """
    if spec.plugin:
        mod, attr = spec.plugin.split(":")
        try:
            obj = getattr(importlib.import_module(mod), attr)
        except (ImportError, AttributeError) as exc:
            raise ConfigError(f"cannot load plugin {spec.plugin}: {exc}") from None
        model = obj if isinstance(obj, (PotentialModel, HamiltonianModel)) else obj(dict(spec.params), dim)
        want = HamiltonianModel if spec.kind == "hamiltonian" else PotentialModel
        if not isinstance(model, want):
            raise ConfigError(f"plugin {spec.plugin} did not produce a {want.__name__}")
        return model
    try:
        if spec.kind == "hamiltonian":
            if spec.name == "quadratic":
                return quadratic_hamiltonian(dim)
            return builtin_hamiltonian(spec.name, spec.params, dim=dim)
        return builtin_potential(spec.name, spec.params, dim=dim)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad model {spec.name!r}: {exc}") from None


# ---------------------------------------------------------------------------
# result documents


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(doc: dict) -> str:
    # json uses repr for floats, the shortest string that round-trips
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _candidate_block(res: SolveResult) -> dict:
    sp = res.ctx.space
    return {
        "action_value": res.candidate.value,
        "space": {"period_T": sp.period_T, "dim_N": sp.dim_N,
                  "symmetry_class": sp.symmetry_class.value, "num_modes": sp.num_modes,
                  "grid_points": sp.grid_points},
        "freqs": sp.freqs.tolist(),
        "kinds": ["cos" if k == 0 else "sin" for k in sp.kinds],
        "coefficients": res.candidate.point.coeffs.tolist(),
        "amplitude": res.amplitude,
        "fine_action_value": res.fine_value,
        **{k: v for k, v in res.extras.items()},
    }


def _new_doc(cfg: RunConfig) -> dict:
    return {"library": {"name": "nehari_orbits", "version": _version()},
            "config": cfg.to_dict(), "seed": cfg.solver.seed, "errors": []}


def _solve(cfg: RunConfig, model, period_T: float) -> SolveResult:
    kw = dict(solver=cfg.solver, audit_rays=cfg.audit_rays, force=cfg.force,
              truncation_check=cfg.truncation_check)
    if cfg.is_dual:
        return solve_dual(model, period_T, cfg.num_modes, **kw)
    return solve_direct(model, period_T, cfg.num_modes, Symmetry(cfg.symmetry_class), **kw)


def _run_solve(cfg, model, doc) -> tuple[int, SolveResult | None]:
    try:
        res = _solve(cfg, model, cfg.period_T)
    except ConditionFailure as exc:
        doc["conditions"] = exc.report.as_dict()
        doc["errors"].append(str(exc))
        doc["status"] = "condition_failure"
        return EXIT_CONDITIONS, None
    except SolverError as exc:
        doc["errors"].append(str(exc))
        doc["status"] = "solver_failure"
        return EXIT_NOT_CERTIFIED, None
    doc["candidate"] = _candidate_block(res)
    doc["certificate"] = res.certificate.as_dict()
    ok = res.certificate.certified
    doc["status"] = "certified" if ok else "not_certified"
    return (EXIT_OK if ok else EXIT_NOT_CERTIFIED), res


def _run_conditions(cfg, model, doc) -> int:
    if isinstance(model, HamiltonianModel):
        rep = check_hamiltonian_conditions(model)
    else:
        rep = check_potential_conditions(model)
    doc["conditions"] = rep.as_dict()
    doc["status"] = "conditions_pass" if not rep.failed else "condition_failure"
    return EXIT_CONDITIONS if rep.failed else EXIT_OK


def _run_fenchel(cfg, model, doc) -> int:
    if not isinstance(model, HamiltonianModel):
        raise ConfigError("the fenchel table needs a Hamiltonian model")
    try:
        pair = fenchel_transform(model)
        rng = np.random.default_rng(cfg.solver.seed)
        n = cfg.fenchel_points
        y = sphere_directions(model.dim, n, rng) * np.geomspace(1e-2, 1e2, n)[:, None]
        G = pair.G(y)
        rows = []
        closed = None
        if pair.closed_form is not None:
            closed = pair.closed_form[0](y)
        for i in range(n):
            row = {"y": y[i].tolist(), "G": float(G[i])}
            if closed is not None:
                row["G_closed"] = float(closed[i])
                row["rel_err"] = abs(float(G[i]) - float(closed[i])) / abs(float(closed[i]))
            rows.append(row)
        x = rng.uniform(-10, 10, (n, model.dim))
        young = np.abs(pair.G(model.grad(x)) + model.H(x) - np.sum(x * model.grad(x), axis=1))
        young_rel = young / (1 + np.abs(np.sum(x * model.grad(x), axis=1)))
    except FenchelError as exc:
        doc["errors"].append(str(exc))
        doc["status"] = "fenchel_failure"
        return EXIT_CONDITIONS
    doc["fenchel"] = {
        "alpha": pair.alpha, "beta_hat": pair.beta_hat, "rows": rows,
        "max_rel_err": max((r.get("rel_err", 0.0) for r in rows), default=0.0) if closed is not None else None,
        "young_max_rel": float(young_rel.max()),
    }
    doc["status"] = "ok"
    return EXIT_OK


def _run_certify(cfg, model, doc) -> tuple[int, SolveResult | None]:
    """Certify stored coefficients: from a previous result document or inline."""
    refined = False
    if cfg.input:
        try:
            prev = json.loads(Path(cfg.input).read_text())
            coeffs = np.asarray(prev["candidate"]["coefficients"], dtype=float)
            refined = bool(prev.get("certificate", {}).get("candidate", {}).get("refined", False))
        except (OSError, KeyError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read input document {cfg.input}: {exc}") from None
    elif cfg.coefficients is not None:
        coeffs = np.asarray(cfg.coefficients, dtype=float)
    else:
        raise ConfigError("certify needs either 'input' or 'coefficients'")
    if cfg.is_dual:
        pair = fenchel_transform(model)
        sp = make_space(cfg.period_T, model.dim, Symmetry.FULL_MEANZERO, cfg.num_modes)
        ctx = DualActionContext(sp, pair)
    else:
        sp = make_space(cfg.period_T, model.dim, Symmetry(cfg.symmetry_class), cfg.num_modes)
        ctx = DirectActionContext(sp, model)
    if coeffs.size != sp.n_basis * sp.dim_N:
        raise ConfigError(f"expected {sp.n_basis * sp.dim_N} coefficients, got {coeffs.size}")
    point = ctx.wrap(coeffs.reshape(sp.shape))
    value = ctx.value(point.coeffs)
    residual = float(np.linalg.norm(ctx.gradient(point.coeffs)))
    refined = refined and residual < cfg.solver.newton_tolerance(ctx.kind)
    if cfg.is_dual:
        orbit = recover_orbit(ctx, point)
        base = pair.base
    else:
        orbit = direct_orbit(point)
        base = model
    trunc = None
    if cfg.truncation_check and refined:
        res = _solve(dataclasses.replace(cfg, truncation_check=False, num_modes=2 * cfg.num_modes),
                     model, cfg.period_T)
        trunc = abs(res.candidate.value - value) / max(abs(value), 1e-300)
    summary = {"value": value, "refined": refined, "residual_norm": residual,
               "source": "input" if cfg.input else "coefficients"}
    cert = Certificate(
        candidate=summary,
        ode_residual_sup=ode_residual(orbit, base, relative=True),
        energy_drift=energy_drift(orbit, base, relative=True),
        minimal_period=minimal_period_certificate(point, ctx=ctx, value=value),
        infmax_audit=infmax_audit(ctx, point, n_rays=cfg.audit_rays, seed=cfg.solver.seed),
        truncation_agreement=trunc,
        ode_residual_abs=ode_residual(orbit, base),
        energy_drift_abs=energy_drift(orbit, base),
    )
    doc["certificate"] = cert.as_dict()
    ok = cert.certified
    doc["status"] = "certified" if ok else "not_certified"
    res = SolveResult(ctx.kind, ctx, _PlainCandidate(point, value), orbit, cert)
    doc["candidate"] = _candidate_block(res)
    return (EXIT_OK if ok else EXIT_NOT_CERTIFIED), res


@dataclass
class _PlainCandidate:
    point: object
    value: float


def sweep(cfg: RunConfig, model) -> tuple[int, dict, list]:
    """One solve + certify per period; failures are recorded and the sweep goes on."""
    periods = list(cfg.sweep_periods)
    if not periods:
        raise ConfigError("sweep needs a nonempty sweep_periods list")
    if any(b <= a for a, b in zip(periods, periods[1:])):
        raise ConfigError("sweep_periods must be strictly increasing")
    table, results = [], []
    for T in periods:
        row = {"period_T": T}
        try:
            res = _solve(cfg, model, T)
            row.update(action_value=res.candidate.value,
                       residual=res.certificate.ode_residual_sup,
                       amplitude=res.amplitude,
                       certified=res.certificate.certified)
            results.append(res)
        except (ConditionFailure, SolverError) as exc:
            row.update(action_value=None, residual=None, certified=False, error=str(exc))
            results.append(None)
        table.append(row)
    code = EXIT_OK if all(r["certified"] for r in table) else EXIT_NOT_CERTIFIED
    return code, {"rows": table}, results


# ---------------------------------------------------------------------------
# outputs


def write_trajectory(path: Path, orbit) -> None:
    N = orbit.x.shape[1]
    header = ["t"] + [f"x_{i + 1}" for i in range(N)] + [f"v_{i + 1}" for i in range(N)]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for t, x, v in zip(orbit.times, orbit.x, orbit.xdot):
            w.writerow([repr(float(t))] + [repr(float(a)) for a in x] + [repr(float(a)) for a in v])


def write_plot(path: Path, orbit=None, sweep_rows=None) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    panels = (orbit is not None) + (sweep_rows is not None)
    fig, axes = plt.subplots(1, panels, figsize=(4.5 * panels, 4), squeeze=False)
    ax = axes[0]
    i = 0
    if orbit is not None:
        x = np.vstack([orbit.x, orbit.x[:1]])
        v = np.vstack([orbit.xdot, orbit.xdot[:1]])
        if orbit.x.shape[1] == 1:
            ax[i].plot(x[:, 0], v[:, 0])
            ax[i].set_xlabel("x")
            ax[i].set_ylabel("dx/dt")
        else:
            ax[i].plot(x[:, 0], x[:, 1])
            ax[i].set_xlabel("x_1")
            ax[i].set_ylabel("x_2")
            ax[i].set_aspect("equal", adjustable="datalim")
        ax[i].set_title("orbit")
        i += 1
    if sweep_rows is not None:
        pts = [(r["period_T"], r["action_value"]) for r in sweep_rows if r["action_value"] is not None]
        if pts:
            T, c = zip(*pts)
            ax[i].loglog(T, c, "o-")
        ax[i].set_xlabel("T")
        ax[i].set_ylabel("c_T")
        ax[i].set_title("inf-max value vs period")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_outputs(doc: dict, out: OutputSpec, orbit=None, sweep_rows=None) -> dict:
    """Write result document, trajectory CSV and plot; returns the paths written."""
    d = Path(out.dir)
    d.mkdir(parents=True, exist_ok=True)
    paths = {"result": str(d / out.result)}
    if orbit is not None:
        write_trajectory(d / out.trajectory, orbit)
        paths["trajectory"] = str(d / out.trajectory)
    if orbit is not None or sweep_rows is not None:
        try:
            write_plot(d / out.plot, orbit, sweep_rows)
            paths["plot"] = str(d / out.plot)
        except Exception as exc:  # plots are a convenience, never fatal
            log.warning("plot not written: %s", exc)
            doc["errors"].append(f"plot not written: {exc}")
    doc["outputs"] = paths
    (d / out.result).write_text(dumps(doc))
    return paths


def run(cfg: RunConfig, sweep_mode: bool = False) -> tuple[int, dict]:
    t0 = time.perf_counter()
    doc = _new_doc(cfg)
    model = build_model(cfg.model, cfg.dimension)
    orbit = sweep_rows = None
    if sweep_mode:
        if cfg.mode not in ("solve_direct", "solve_dual"):
            raise ConfigError("sweep runs solve_direct or solve_dual")
        code, summary, results = sweep(cfg, model)
        doc["sweep"] = summary
        doc["status"] = "certified" if code == EXIT_OK else "not_certified"
        sweep_rows = summary["rows"]
    elif cfg.mode in ("solve_direct", "solve_dual"):
        code, res = _run_solve(cfg, model, doc)
        orbit = None if res is None else res.orbit
    elif cfg.mode == "check_conditions":
        code = _run_conditions(cfg, model, doc)
    elif cfg.mode == "fenchel_table":
        code = _run_fenchel(cfg, model, doc)
    else:
        code, res = _run_certify(cfg, model, doc)
        orbit = res.orbit
    doc["exit_code"] = code
    doc["timings"] = {"total_s": time.perf_counter() - t0}
    emit_outputs(doc, cfg.output, orbit, sweep_rows)
    return code, doc


_SUBCOMMANDS = {
    "solve-direct": "solve_direct",
    "solve-dual": "solve_dual",
    "check-conditions": "check_conditions",
    "fenchel": "fenchel_table",
    "certify": "certify",
    "sweep": None,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nehari-orbits",
                                description="Periodic orbits with prescribed minimal period via inf-max.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON run config")
        s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (dotted path, JSON value)")
        s.add_argument("--out", help="output directory")
        s.add_argument("--seed", type=int)
        s.add_argument("--modes", type=int)
        s.add_argument("--period", type=float)
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    mode = _SUBCOMMANDS[args.command]
    try:
        overrides = [parse_override(s) for s in args.set]
        if args.out is not None:
            overrides.append(("output.dir", args.out))
        if args.seed is not None:
            overrides.append(("solver.seed", args.seed))
        if args.modes is not None:
            overrides.append(("num_modes", args.modes))
        if args.period is not None:
            overrides.append(("period_T", args.period))
        if mode is None:
            base = json.loads(Path(args.config).read_text()) if args.config else {}
            sweep_mode_name = base.get("mode", "solve_direct")
            cfg = load_config(args.config, overrides, mode=sweep_mode_name, sweep=True)
            code, doc = run(cfg, sweep_mode=True)
        else:
            cfg = load_config(args.config, overrides, mode=mode)
            code, doc = run(cfg)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"{doc.get('status', '?')}: {doc['outputs']['result']}")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
