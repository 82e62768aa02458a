"""``subeq-lab`` command-line front end.

Every command reads the ODE coefficients from ``--json FILE`` and/or the
``--a --c1 ... --c7`` flags (flags win), runs one stage of the analysis
and writes a JSON document (``"schema": 1``) to stdout.  Exact values are
written as ``{"exact": "<text>"}`` and floating-point ones as
``{"float": ...}``.

Exit codes: 0 success, 1 verification failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .cyclofield import CycloNumber, parse_cyclo
from .laurent import (
    DEFAULT_DEPTH,
    OdeInstance,
    check_fuchs_indices,
    expand_laurent,
    indicial_polynomial,
    ode_residual,
)
from .residues import enumerate_conditions, match_elliptic_families
from .solutions import (
    DegenerateParameter,
    NoRoot,
    build_closed_form,
    canonical_subequation,
    classify_family,
    sample_points,
    verify_numeric,
)
from .solutions.families import FAMILY_DEGREE
from .subeq import fit_subequation

log = logging.getLogger("subeq_lab")

SCHEMA = 1
COEFF_NAMES = ("a", "c1", "c2", "c4", "c5", "c6", "c7")
EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

__all__ = [
    "PipelineConfig",
    "PipelineReport",
    "derive_c6",
    "emit_report",
    "main",
    "parse_input",
    "run_pipeline",
]


class InputError(ValueError):
    pass


def exact(x) -> dict:
    return {"exact": str(x)}


def flt(x) -> dict:
    if isinstance(x, complex):
        return {"float": [x.real, x.imag]}
    return {"float": float(x)}


# -- configuration -------------------------------------------------------------
@dataclass
class PipelineConfig:
    ode: OdeInstance
    depth: int = DEFAULT_DEPTH
    degrees: tuple = (1, 2, 3)
    kmax: int = 4
    nmax: int = 10
    tol: float = 1e-9
    points: int = 20
    seed: int = 1
    e0: CycloNumber | None = None
    z0: complex = 0j
    branch: int | None = None

    def __post_init__(self):
        self.degrees = tuple(sorted(set(int(d) for d in self.degrees)))
        if not self.degrees or any(d not in (1, 2, 3) for d in self.degrees):
            raise InputError("degrees must be a non-empty subset of {1, 2, 3}")
        if self.depth < 2 * max(self.degrees) + 10:
            raise InputError(f"depth must be at least 2*max(degrees) + 10 = "
                             f"{2 * max(self.degrees) + 10}")
        if not self.tol > 0:
            raise InputError("tol must be positive")
        if self.points < 1:
            raise InputError("points must be positive")
        if self.kmax < 0 or self.nmax < 1:
            raise InputError("need kmax >= 0 and nmax >= 1")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def parse_input(args: argparse.Namespace, json_file: str | None = None) -> PipelineConfig:
    """Coefficients from the JSON file overlaid with command-line flags."""
    data: dict = {}
    path = json_file if json_file is not None else getattr(args, "json", None)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
        if not isinstance(data, dict):
            raise InputError(f"{path}: expected a JSON object of coefficients")
    for name in COEFF_NAMES + ("c0",):
        val = getattr(args, name, None)
        if val is not None:
            data[name] = val
    extra = set(data) - set(COEFF_NAMES) - {"c0", "c3"}
    if extra:
        raise InputError(f"unknown coefficient names: {sorted(extra)}")
    coeffs = {}
    for k, v in data.items():
        try:
            coeffs[k] = parse_cyclo(str(v))
        except ValueError as exc:
            raise InputError(f"{k}: {exc}") from None
    try:
        ode = OdeInstance.from_mapping(coeffs)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    kwargs = {}
    for name in ("depth", "kmax", "nmax", "tol", "points", "seed", "branch"):
        val = getattr(args, name, None)
        if val is not None:
            kwargs[name] = val
    if getattr(args, "degrees", None):
        kwargs["degrees"] = _int_list(args.degrees, "degrees")
    if getattr(args, "e0", None) is not None:
        try:
            kwargs["e0"] = parse_cyclo(args.e0)
        except ValueError as exc:
            raise InputError(f"--e0: {exc}") from None
    if getattr(args, "z0", None) is not None:
        kwargs["z0"] = _parse_complex(args.z0)
    if getattr(args, "derive_c6", False):
        if "e0" not in kwargs:
            raise InputError("--derive-c6 needs --e0")
        ode = derive_c6(ode, kwargs["e0"])
    return PipelineConfig(ode=ode, **kwargs)


def derive_c6(ode: OdeInstance, e0: CycloNumber) -> OdeInstance:
    """Replace c6 by the value that makes ``e0`` a root of the family cubic.

    S3b: e0**3 - 3 k5**2 e0 + k6 = 0 with k5**2 = -c5/16; S3a: e0**3 + 20 k1**3
    + k6 = 0 with k1 = c1/(12 a**2); in both c6 = 4 k6.
    """
    a, c0 = ode.a, ode.c0
    if not ode.c1 and not ode.c2 and not ode.c4 and ode.c7 == ode.c5 * ode.c5 / 128:
        k6 = -(e0 ** 3 + 3 * (ode.c5 / 16) * e0)
    elif not ode.c2 and not ode.c5 and not ode.c7 and ode.c4 == ode.c1 * ode.c1 / (12 * c0):
        k1 = ode.c1 / (12 * a * a)
        k6 = -(e0 ** 3 + 20 * k1 ** 3)
    else:
        raise InputError("--derive-c6 applies only to S3a or S3b coefficient sets")
    return ode.replace(c6=4 * k6)


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of integers") from None


# -- stage serializers -------------------------------------------------------------
def _ode_json(ode: OdeInstance) -> dict:
    out = {k: exact(v) for k, v in ode.coefficients().items()}
    out["c0"] = exact(ode.c0)
    return out


def _subeq_json(s) -> dict | None:
    if s is None:
        return None
    d = s.to_json()
    for t in d["terms"]:
        t["coeff"] = exact(t["coeff"])
    d["text"] = str(s)
    return d


def _fit_json(fr) -> dict:
    d = fr.to_json()
    d["subequation"] = _subeq_json(fr.subequation)
    if fr.subequation is not None:
        d["normalized"] = _subeq_json(fr.subequation.normalized())
    return d


def _verify_json(rep) -> dict:
    return {
        "points": [flt(z) for z in rep.points],
        "max_rel_ode_residual": flt(rep.max_rel_ode_residual),
        "max_rel_subeq_residual": flt(rep.max_rel_subeq_residual),
        "passed": rep.passed,
        "notes": list(rep.notes),
    }


def stage_expand(ode: OdeInstance, depth: int, branches=(0, 1, 2)) -> list[dict]:
    out = []
    roots = ode.branches()
    for b in branches:
        u = expand_laurent(ode, roots[b], depth)
        res = ode_residual(u, ode)
        out.append({
            "branch": b,
            "residue": exact(roots[b]),
            "lead": u.lead,
            "order": u.order,
            "coefficients": [exact(c) for c in u.coeffs],
            "ode_residual_vanishes": res.is_zero(),
        })
    return out


def stage_indices(ode: OdeInstance) -> list[dict]:
    out = []
    for b, r in enumerate(ode.branches()):
        poly = indicial_polynomial(ode, r)
        rep = check_fuchs_indices(poly)
        out.append({
            "branch": b,
            "residue": exact(r),
            "indicial_polynomial": [exact(c) for c in poly],
            "integer_roots": rep.integer_roots,
            "has_nonneg_integer": rep.has_nonneg_integer,
        })
    return out


def stage_residues(ode: OdeInstance, kmax: int, nmax: int) -> dict:
    violated = enumerate_conditions(ode, kmax, nmax)
    return {
        "kmax": kmax,
        "nmax": nmax,
        "violated": [{"k": c.k, "n": c.n, "value": exact(c.value)} for c in violated],
        "elliptic_family": match_elliptic_families(ode),
    }


def stage_classify(ode: OdeInstance) -> dict:
    m = classify_family(ode)
    d = m.to_json()
    d["params"] = {k: exact(v) for k, v in sorted(m.params.items())}
    if m.family == "S3a":
        d["notes"].append("S3a reading: c4 = c1^2/(12 c0), c0 = a^3")
    return d


def stage_solve(ode: OdeInstance, cfg: PipelineConfig, fit=None):
    cf = build_closed_form(ode, None, fit, e0=cfg.e0, z0=cfg.z0, branch=cfg.branch,
                           tol=cfg.tol, points=cfg.points, seed=cfg.seed)
    return cf


def stage_verify(ode: OdeInstance, cf, cfg: PipelineConfig):
    family = next((n.split()[1] for n in cf.notes if n.startswith("family ")), None)
    s = canonical_subequation(ode, family) if family else None
    pts = sample_points(cf, cfg.points, cfg.seed)
    return verify_numeric(cf, ode, s, pts, cfg.tol)


# -- pipeline -----------------------------------------------------------------------
@dataclass
class PipelineReport:
    sections: dict = field(default_factory=dict)
    exit_status: int = EXIT_OK

    def to_json(self) -> dict:
        return {"schema": SCHEMA, **self.sections, "exit_status": self.exit_status}

    @classmethod
    def from_json(cls, data: dict) -> PipelineReport:
        data = dict(data)
        if data.pop("schema", None) != SCHEMA:
            raise ValueError("unsupported report schema")
        status = data.pop("exit_status")
        return cls(data, status)


def run_pipeline(cfg: PipelineConfig) -> PipelineReport:
    """All stages in order; a failing stage is recorded and the rest still run."""
    ode = cfg.ode
    sec: dict = {"command": "pipeline", "ode": _ode_json(ode), "errors": []}
    sec["config"] = {
        "depth": cfg.depth, "degrees": list(cfg.degrees), "kmax": cfg.kmax, "nmax": cfg.nmax,
        "tol": flt(cfg.tol), "points": cfg.points, "seed": cfg.seed,
        "e0": None if cfg.e0 is None else exact(cfg.e0), "z0": flt(cfg.z0),
    }
    sec["laurent"] = stage_expand(ode, cfg.depth)
    sec["fuchs"] = stage_indices(ode)
    sec["residue_conditions"] = stage_residues(ode, cfg.kmax, cfg.nmax)
    fits = {}
    sec["fits"] = {}
    for m in cfg.degrees:
        try:
            fits[m] = fit_subequation(ode, m)
            sec["fits"][str(m)] = _fit_json(fits[m])
        except Exception as exc:  # recorded, pipeline continues
            sec["errors"].append(f"fit degree {m}: {exc}")
    sec["classification"] = stage_classify(ode)
    family = sec["classification"]["family"]
    sec["closed_form"] = None
    sec["verification"] = None
    status = EXIT_OK
    if family is None:
        sec["summary"] = "no meromorphic solution family matched"
    else:
        try:
            fit = fits.get(FAMILY_DEGREE[family])
            cf = stage_solve(ode, cfg, fit)
            sec["closed_form"] = cf.to_json()
            rep = stage_verify(ode, cf, cfg)
            sec["verification"] = _verify_json(rep)
            status = EXIT_OK if rep.passed else EXIT_FAILED
            built = next((n.split()[1] for n in cf.notes if n.startswith("family ")), family)
            sec["summary"] = f"family {built}: verification {'passed' if rep.passed else 'FAILED'}"
        except (DegenerateParameter, NoRoot, ValueError) as exc:
            sec["errors"].append(f"solve: {exc}")
            sec["summary"] = f"family {family}: no closed form ({exc})"
            status = EXIT_FAILED
    return PipelineReport(sec, status)


# -- output ---------------------------------------------------------------------------
def _fmt(v) -> str:
    if isinstance(v, dict) and "exact" in v:
        return v["exact"]
    if isinstance(v, dict) and "float" in v:
        f = v["float"]
        return f"{complex(*f):.6g}" if isinstance(f, list) else f"{f:.3g}"
    return str(v)


def _text(doc: dict) -> str:
    lines = []
    if "ode" in doc:
        lines.append("ode: " + ", ".join(f"{k}={_fmt(v)}" for k, v in doc["ode"].items()))
    cls = doc.get("classification")
    if cls is None and "family" in doc:
        cls = doc
    if cls is not None:
        lines.append(f"family: {cls['family'] or 'none'}")
        for k, v in cls.get("params", {}).items():
            lines.append(f"  {k} = {_fmt(v)}")
    for m, fr in sorted(doc.get("fits", {}).items()):
        lines.append(f"fit degree {m}: {fr['status']}")
        if fr.get("normalized"):
            lines.append(f"  {fr['normalized']['text']}")
    if "fit" in doc:
        fr = doc["fit"]
        lines.append(f"fit degree {fr['degree']}: {fr['status']}")
        if fr.get("normalized"):
            lines.append(f"  {fr['normalized']['text']}")
    for br in doc.get("laurent", []) if "laurent" in doc else doc.get("branches", []):
        if "coefficients" in br:
            head = ", ".join(_fmt(c) for c in br["coefficients"][:4])
            lines.append(f"branch {br['branch']} (residue {_fmt(br['residue'])}): {head}, ...")
    for br in doc.get("fuchs", []) if "fuchs" in doc else doc.get("branches", []):
        if "indicial_polynomial" in br:
            roots = ", ".join(map(str, br["integer_roots"])) or "none"
            lines.append(f"branch {br['branch']} (residue {_fmt(br['residue'])}): "
                         f"integer Fuchs indices {roots}")
    if doc.get("residue_conditions"):
        rc = doc["residue_conditions"]
        pairs = ", ".join(f"({c['k']},{c['n']})" for c in rc["violated"]) or "none"
        lines.append(f"violated residue conditions: {pairs}")
    cf = doc.get("closed_form")
    if cf:
        lines.append(f"closed form: {cf['kind']} ({cf['selection']})")
        for k, v in cf["params"].items():
            lines.append(f"  {k} = {_fmt(v)}")
    ver = doc.get("verification")
    if ver:
        mark = "passed" if ver["passed"] else "FAILED"
        lines.append(f"verification: {mark} (ode {_fmt(ver['max_rel_ode_residual'])}, "
                     f"subequation {_fmt(ver['max_rel_subeq_residual'])})")
    if doc.get("summary"):
        lines.append(doc["summary"])
    for e in doc.get("errors", []):
        lines.append(f"error: {e}")
    return "\n".join(lines) + "\n"


def emit_report(r: PipelineReport | dict, fmt: str = "json") -> bytes:
    doc = r.to_json() if isinstance(r, PipelineReport) else r
    if fmt == "json":
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "text":
        return _text(doc).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


# -- argument parsing -------------------------------------------------------------
def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="FILE", help="JSON object of coefficients")
    for name in COEFF_NAMES + ("c0",):
        common.add_argument(f"--{name}", metavar="Q", help=f"exact value of {name}")
    common.add_argument("--format", choices=("json", "text"), default="json")

    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--e0", help="exact root of the family cubic (degree 3)")
    numeric.add_argument("--derive-c6", action="store_true",
                         help="set c6 from --e0 (S3a/S3b) instead of reading it")
    numeric.add_argument("--z0", help="integration constant, e.g. 0.1+0.2j")
    numeric.add_argument("--branch", type=int, choices=(0, 1, 2),
                         help="degree 2: residue branch placed at z0")
    numeric.add_argument("--tol", type=float, default=None)
    numeric.add_argument("--points", type=int, default=None)
    numeric.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="subeq-lab", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", parents=[common], help="Laurent series on each branch")
    e.add_argument("--depth", dest="series_depth", type=int, default=None)
    e.add_argument("--branches", default="0,1,2")
    sub.add_parser("indices", parents=[common], help="indicial polynomial and Fuchs indices")
    r = sub.add_parser("residue-conditions", parents=[common], help="violated residue sums")
    r.add_argument("--kmax", type=int, default=None)
    r.add_argument("--nmax", type=int, default=None)
    f = sub.add_parser("fit", parents=[common], help="fit a first-order subequation")
    f.add_argument("--degree", type=int, choices=(1, 2, 3), required=True)
    f.add_argument("--branches", default=None)
    f.add_argument("--extra-orders", type=int, default=4)
    sub.add_parser("classify", parents=[common], help="family of the coefficients")
    sub.add_parser("solve", parents=[common, numeric], help="closed-form solution")
    sub.add_parser("verify", parents=[common, numeric], help="solve and verify numerically")
    pl = sub.add_parser("pipeline", parents=[common, numeric], help="all stages")
    pl.add_argument("--depth", type=int, default=None)
    pl.add_argument("--degrees", default=None)
    pl.add_argument("--kmax", type=int, default=None)
    pl.add_argument("--nmax", type=int, default=None)
    return p


def _configure_logging() -> None:
    level = os.environ.get("SUBEQ_LAB_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _run(args) -> tuple[dict, int]:
    cfg = parse_input(args)
    ode = cfg.ode
    doc: dict = {"schema": SCHEMA, "command": args.command, "ode": _ode_json(ode)}
    status = EXIT_OK
    cmd = args.command
    if cmd == "expand":
        branches = _int_list(args.branches, "branches")
        if any(b not in (0, 1, 2) for b in branches):
            raise InputError("branches must be among 0, 1, 2")
        depth = args.series_depth or cfg.depth
        if depth < 2:
            raise InputError("--depth must be at least 2")
        doc["depth"] = depth
        doc["branches"] = stage_expand(ode, depth, branches)
    elif cmd == "indices":
        doc["branches"] = stage_indices(ode)
    elif cmd == "residue-conditions":
        doc["residue_conditions"] = stage_residues(ode, cfg.kmax, cfg.nmax)
    elif cmd == "fit":
        branches = _int_list(args.branches, "branches") if args.branches else None
        if args.extra_orders < 0:
            raise InputError("--extra-orders must be non-negative")
        try:
            fr = fit_subequation(ode, args.degree, branches, args.extra_orders)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        doc["fit"] = _fit_json(fr)
    elif cmd == "classify":
        doc.update(stage_classify(ode))
    elif cmd in ("solve", "verify"):
        doc["classification"] = stage_classify(ode)
        if doc["classification"]["family"] is None:
            raise InputError("no meromorphic solution family matched; nothing to solve")
        try:
            cf = stage_solve(ode, cfg)
        except (DegenerateParameter, NoRoot, ValueError) as exc:
            raise InputError(str(exc)) from None
        doc["closed_form"] = cf.to_json()
        if cmd == "verify":
            rep = stage_verify(ode, cf, cfg)
            doc["verification"] = _verify_json(rep)
            status = EXIT_OK if rep.passed else EXIT_FAILED
            if not rep.passed:
                doc["summary"] = "verification FAILED"
    elif cmd == "pipeline":
        rep = run_pipeline(cfg)
        return rep.to_json(), rep.exit_status
    return doc, status


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        doc, status = _run(args)
    except InputError as exc:
        print(f"subeq-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = emit_report(doc, args.format)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
