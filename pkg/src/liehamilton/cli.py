"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import group as grp
from . import leaf
from .integrate import IntegrationError, TDSystem, coefficient_from_dict, drift, integrate, random_trig
from .kks import basis_fields, kks_bivector
from .lie_algebra import CATALOG_NAMES, catalog
from .table1 import LABELS, canonical_fields
from .verify import FAULTS, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ------------------------------------------------------------ JSON output

def _dump(obj, indent=2, level=0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return f"{x:.17g}" if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_dump(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _dump(v, indent, level + 1) for v in obj) + "\n" + pad + "]"
    return json.dumps(str(obj))


def dumps(obj) -> str:
    return _dump(obj)


def _emit(args, data: dict, text: str):
    print(dumps(data) if args.json else text)


# ------------------------------------------------------------ config

@dataclass
class RunConfig:
    system: dict
    coefficients: object
    t_span: tuple
    x0: list | None = None
    tol: float = 1e-10
    samples: int | None = None
    seed: int = 42
    output: dict = field(default_factory=dict)
    mode: str = "integrate"

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        schema = json.loads(resources.files(__package__).joinpath("config.schema.json").read_text())
        try:
            jsonschema.validate(data, schema)
        except jsonschema.ValidationError as exc:
            raise UsageError(f"invalid config: {exc.message}") from None
        data["t_span"] = tuple(data["t_span"])
        return cls(**data)


def _build_system(cfg: RunConfig, rng):
    s = cfg.system
    if "algebra" in s:
        try:
            entry = catalog(s["algebra"], r=s.get("r"), eta=s.get("eta"))
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        fields = basis_fields(kks_bivector(entry.sc))
        invariants = {str(C): C.numeric() for C in entry.casimirs}
        x0 = cfg.x0
        model = None
    else:
        try:
            model = grp.group_model(s["group"], r=s.get("r"), eta=s.get("eta"))
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        fields = list(model.right_fields)
        invariants = {}
        x0 = cfg.x0 if cfg.x0 is not None else [float(v) for v in model.identity]
    if x0 is None:
        raise UsageError("x0 is required for algebra systems")
    if len(x0) != fields[0].ring.ncoords:
        raise UsageError(f"x0 has {len(x0)} entries, the system has dimension {fields[0].ring.ncoords}")
    if cfg.coefficients == "random_trig":
        coeffs = [random_trig(rng) for _ in fields]
    else:
        if len(cfg.coefficients) != len(fields):
            raise UsageError(f"{len(fields)} coefficients expected, got {len(cfg.coefficients)}")
        try:
            coeffs = [coefficient_from_dict(c) for c in cfg.coefficients]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if model is not None:
        sysm = grp.automorphic_system(model, coeffs)
    else:
        sysm = TDSystem(len(x0), tuple(fields), tuple(coeffs))
    return sysm, x0, invariants, coeffs


def cmd_integrate(args) -> int:
    cfg = RunConfig.load(args.config)
    tol = args.tol if args.tol is not None else cfg.tol
    if not tol > 0:
        raise UsageError("tol must be positive")
    seed = args.seed if args.seed is not None else cfg.seed
    rng = np.random.default_rng(seed)
    sysm, x0, invariants, coeffs = _build_system(cfg, rng)
    t0, t1 = cfg.t_span
    t_eval = np.linspace(t0, t1, cfg.samples) if cfg.samples else None
    try:
        tr = integrate(sysm, x0, (t0, t1), tol, t_eval=t_eval)
    except IntegrationError as exc:
        data = {"error": type(exc).__name__, "message": str(exc), "t": exc.t}
        print(dumps(data) if args.json else f"integration failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {"system": cfg.system, "tol": tol, "seed": seed, "t_span": [t0, t1],
              "coefficients": [c.to_dict() for c in coeffs], "final": tr.final.tolist(),
              "stats": tr.stats, "drift": {k: drift(tr, f) for k, f in invariants.items()}}
    out = cfg.output or {}
    if out.get("csv"):
        tr.to_csv(out["csv"])
    if out.get("json"):
        Path(out["json"]).write_text(dumps(report) + "\n")
    lines = [f"steps {tr.stats['steps']} (rejected {tr.stats['rejected']}), "
             f"final state {', '.join(f'{v:.12g}' for v in tr.final)}"]
    lines += [f"drift of {k}: {v:.3e}" for k, v in report["drift"].items()]
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


# ------------------------------------------------------------ catalog

def _entry_data(name) -> dict:
    e = catalog(name)
    data = {"name": e.name, "kind": "algebra", "dim": e.sc.dim, "relations": e.sc.relations(),
            "structure_constants": e.sc.to_json(), "casimirs": [str(C) for C in e.casimirs],
            "table_row": e.table_row, "notes": e.notes, "params": {k: list(v) if isinstance(v, tuple) else v
                                                                    for k, v in e.params.items()}}
    if e.table_row:
        cls = canonical_fields(e.table_row, **({"eta": e.params["eta"]} if "eta" in e.params else
                                               {"r": e.params["r"]} if "r" in e.params else {}))
        data["table_basis"] = [str(X) for X in cls.fields]
        data["omega"] = cls.omega
    return data


def _label_data(label) -> dict:
    cls = canonical_fields(label)
    return {"name": label, "kind": "table1", "algebra": cls.algebra, "basis": [str(X) for X in cls.fields],
            "omega": cls.omega}


def _group_data(name) -> dict:
    m = grp.group_model(name)
    return {"name": name, "kind": "group", "coordinates": list(m.ring.names), "algebra": m.algebra.name,
            "left_fields": [str(X) for X in m.left_fields], "right_fields": [str(X) for X in m.right_fields]}


def _describe(d: dict) -> str:
    lines = [f"{d['name']} ({d['kind']})"]
    for key in ("relations", "casimirs", "table_basis", "basis", "left_fields", "right_fields"):
        if d.get(key):
            lines.append(f"  {key.replace('_', ' ')}:")
            lines += [f"    {x}" for x in d[key]]
    for key in ("omega", "notes"):
        if d.get(key):
            lines.append(f"  {key}: {d[key]}")
    return "\n".join(lines)


def cmd_catalog(args) -> int:
    if args.name is None:
        data = {"algebras": [_entry_data(n) for n in CATALOG_NAMES], "table1": list(LABELS),
                "groups": list(grp.GROUP_NAMES)}
        text = "\n".join(_describe(d) for d in data["algebras"])
        text += "\nnormal forms: " + ", ".join(LABELS) + "\ngroups: " + ", ".join(grp.GROUP_NAMES)
        _emit(args, data, text)
        return EXIT_OK
    if args.name in CATALOG_NAMES:
        d = _entry_data(args.name)
    elif args.name in LABELS:
        d = _label_data(args.name)
    elif args.name in grp.GROUP_NAMES:
        d = _group_data(args.name)
    else:
        raise UsageError(f"unknown name {args.name!r}")
    _emit(args, d, _describe(d))
    return EXIT_OK


# ------------------------------------------------------------ classify

_CHART_FOR = {"sl2": "sl2_e12", "so3": "so3", "iso2": "iso2", "iso11": "iso11"}


def cmd_classify(args) -> int:
    if args.algebra not in _CHART_FOR:
        raise UsageError(f"classification supports {', '.join(_CHART_FOR)}; got {args.algebra!r}")
    entry = catalog(args.algebra)
    try:
        label = leaf.classify_leaf(entry, args.k)
        chart = leaf.builtin_chart(_CHART_FOR[args.algebra], args.k)
    except leaf.LeafError as exc:
        raise UsageError(str(exc)) from None
    rng = np.random.default_rng(args.seed if args.seed is not None else 42)
    pts = [chart.forward(p) for p in chart.sample(rng, 20)]
    data = {"algebra": args.algebra, "k": args.k, "label": str(label), "evidence": dict(label.evidence)}
    if args.algebra in ("sl2", "so3"):
        det = leaf.tensor_determinant(leaf.casimir_tensor(entry))
        if args.algebra == "sl2":
            ref = lambda e: e[0] ** 2 * args.k  # noqa: E731
        else:
            ref = lambda e: e[2] ** 2 * args.k ** 2  # noqa: E731
        worst = float(max(abs(det.evaluate(e) - ref(e)) for e in pts))
        data["sampled_check"] = {"points": len(pts), "max_abs_det_minus_closed_form": worst}
    else:
        data["sampled_check"] = {"points": len(pts), "dim_Vk": label.evidence.get("dim_Vk")}
    text = [f"{args.algebra}, k = {args.k:g}: {label}"]
    text += [f"  {k}: {v}" for k, v in label.evidence.items()]
    text += [f"  sampled: {data['sampled_check']}"]
    _emit(args, data, "\n".join(text))
    return EXIT_OK


# ------------------------------------------------------------ project

def cmd_project(args) -> int:
    eta = tuple(args.eta) if args.eta else None
    try:
        m = grp.group_model(args.group, r=args.r, eta=eta)
        q = grp.quotient(m, args.quotient)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    rng = np.random.default_rng(args.seed if args.seed is not None else 42)
    pts = m.sample(rng, args.points)
    V = grp.left_wedge(m, 4, 5) if m.name == "SL2_semi_R2" else grp.left_wedge(m, 1, 2)
    checks = [
        grp.check_report(m, "intertwining", pts, grp.intertwining_residual(q, pts), 1e-8),
        grp.check_report(m, "coset_invariance", pts[:5], grp.translation_invariance_residual(q, pts[:5], rng), 1e-9),
        grp.check_report(m, "projectability", pts, grp.projectability_residual(m, V, q, pts), 1e-10),
    ]
    pc = grp.projected_poisson_check(m, V, q, pts)
    checks.append(grp.check_report(m, "pushforward_schouten", pts, pc.pushforward_schouten, 1e-9))
    Vpi = grp.projected_bivector(V, q, pts[0])[0, 1]
    data = {"model": m.name, "quotient": q.name, "projected_fields": [str(X) for X in q.projected_fields],
            "subgroup_generators": [str(Y) for Y in q.subgroup_generators],
            "bivector_upstairs_schouten_zero": pc.upstairs_zero, "projected_bivector_at_sample": Vpi,
            "checks": checks}
    ok = all(c["pass"] for c in checks)
    text = [f"{m.name} -> {q.name}", "  projected fields:"] + [f"    {x}" for x in data["projected_fields"]]
    text += [f"  {c['check']}: {c['max_residual']:.3e} {'ok' if c['pass'] else 'FAIL'}" for c in checks]
    _emit(args, data, "\n".join(text))
    return EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------ verify

def cmd_verify(args) -> int:
    tol = args.tol if args.tol is not None else 1e-10
    seed = args.seed if args.seed is not None else 42
    rep = run_suite(args.suite, seed, tol, args.inject_fault)
    data = rep.to_dict()
    lines = [f"{'ok  ' if c.passed else 'FAIL'} {c.id}" + (f"  {c.value:.3e}" if c.value is not None else "")
             for c in rep.checks]
    lines.append(f"{len(rep.checks) - len(rep.failures)}/{len(rep.checks)} checks passed")
    if rep.failures:
        lines.append("failing: " + ", ".join(c.id for c in rep.failures))
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_FAIL


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default 42)")
    common.add_argument("--tol", type=float, default=None, help="integration tolerance")

    p = argparse.ArgumentParser(prog="liehamilton", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="list algebras, planar normal forms and groups")
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("integrate", parents=[common], help="integrate a t-dependent system from a config")
    c.add_argument("-c", "--config", required=True)
    c.set_defaults(func=cmd_integrate)

    c = sub.add_parser("classify", parents=[common], help="normal-form class of a symplectic leaf")
    c.add_argument("algebra")
    c.add_argument("k", type=float)
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("project", parents=[common], help="quotient projection checks for a group")
    c.add_argument("group", choices=grp.GROUP_NAMES)
    c.add_argument("quotient", nargs="?", default="default")
    c.add_argument("--r", type=int, default=None)
    c.add_argument("--eta", nargs="+", default=None)
    c.add_argument("--points", type=int, default=20)
    c.set_defaults(func=cmd_project)

    c = sub.add_parser("verify", parents=[common], help="run invariant suites")
    c.add_argument("suite", choices=SUITES + ("all",))
    c.add_argument("--inject-fault", choices=FAULTS, default=None, help=argparse.SUPPRESS)
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is not None and not args.tol > 0:
        parser.error("--tol must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
