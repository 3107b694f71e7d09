"""Command-line entry point: reports, verification runs and exports.

Every JSON report is deterministic for a fixed configuration: keys are
sorted, exact rationals are written as ``"p/q"`` strings and no timings or
host data are included. The exit status is 0 when every verdict in the
report is good, otherwise it encodes the first failing verdict (see
``EXIT_CODES``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .cas import Scalar
from .cas.serialize import to_json as scalar_json
from .cas.serialize import to_latex as scalar_latex
from .forms import DifferentialForm
from .frames import CALIBRATION, calibration_fingerprint, compose_PP, curvature
from .nurowski import ParameterSet, build_apolys, build_coframe, distribution_check, metric_gF
from .verdict import GOOD, Verdict

SCHEMA_VERSION = 1
WORKERS_ENV = "AMBIENTG2_WORKERS"

EXIT_CODES = {
    "FAIL": 1,
    "NOT-OBSTRUCTED": 1,
    "UNOBSTRUCTED": 1,
    "MISMATCH": 3,
    "INCONCLUSIVE": 4,
    "NOT-APPLICABLE": 4,
    "UNDECIDED": 4,
}
EXIT_USAGE = 2
EXIT_OUTPUT = 5


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: ParameterSet
    convention: str = "resolved"
    fmt: str = "json"
    output: str | None = None
    mode: str = "symbolic"
    n: int = 50
    seed: int = 7
    max_order: int = 2
    points: int = 3
    target: str | None = None
    case: str = "all"
    obj: str | None = None
    workers: int = 1


@dataclass
class Report:
    kind: str
    config: RunConfig
    result: dict = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    latex: str | None = None

    def exit_status(self) -> int:
        for v in self.verdicts:
            if v.status not in GOOD:
                return EXIT_CODES.get(v.status, 1)
        return 0

    def to_json(self) -> dict:
        cfg = self.config
        return {
            "schema": f"ambientg2.{self.kind}/{SCHEMA_VERSION}",
            "engine_version": __version__,
            "command": cfg.command,
            "params": cfg.params.as_dict(),
            "convention": cfg.convention,
            "calibration": dict(CALIBRATION, fingerprint=calibration_fingerprint()),
            "verdicts": [v.to_json() for v in self.verdicts],
            "status": "PASS" if self.exit_status() == 0 else "FAIL",
            "result": self.result,
        }

    def to_text(self) -> str:
        lines = [f"{self.kind} [{self.config.params.describe()}, {self.config.convention}] "
                 f"calibration {calibration_fingerprint()}"]
        lines += [f"  {v.status:<14} {v.name}" for v in self.verdicts]
        lines.append(f"exit {self.exit_status()}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# serialization

def _default(obj):
    if isinstance(obj, Scalar):
        return scalar_json(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Verdict):
        return obj.to_json()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, default=_default, ensure_ascii=False) + "\n"


def _matrix_json(M) -> list[list[dict]]:
    return [[scalar_json(v) for v in row] for row in M]


def coframe_json(cf) -> dict:
    return {"name": cf.name, "chart": cf.chart.name, "coordinates": list(cf.chart.coords),
            "index_base": cf.offset, "matrix": _matrix_json(cf.matrix)}


# ---------------------------------------------------------------------------
# commands

def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{WORKERS_ENV} must be positive")
    return n


def cmd_build(cfg: RunConfig) -> Report:
    if cfg.target != "gf":
        raise UsageError(f"unknown build target {cfg.target!r}")
    hat, theta = build_coframe(cfg.params, cfg.convention)
    fm = metric_gF(cfg.params, cfg.convention)
    A = build_apolys(cfg.params, cfg.convention)
    dist = distribution_check(cfg.params)
    result = {
        "coframe": coframe_json(theta),
        "coframe_hat": coframe_json(hat),
        "metric": {"basis": theta.name, "matrix": [[str(v) for v in row] for row in fm.G]},
        "metric_latex": fm.symmetric().to_latex(),
        "A": {f"A{k}": scalar_json(A[k]) for k in range(2, 7)},
    }
    verdicts = [Verdict.of("distribution-235", dist["pass"], {k: v for k, v in dist.items() if k != "pass"})]
    return Report("build-gf", cfg, result, verdicts, latex=fm.symmetric().to_latex())


def cmd_curvature(cfg: RunConfig) -> Report:
    from .frames import riemann_symmetry_defects, weyl_trace_defects

    cp = curvature(metric_gF(cfg.params, cfg.convention), with_bach=True)
    PP = compose_PP(cp.schouten, cp.fm)
    verdicts = [
        Verdict.of("riemann-symmetries", not riemann_symmetry_defects(cp.riemann, cp.fm.n)),
        Verdict.of("weyl-trace-free", not weyl_trace_defects(cp.weyl, cp.fm)),
        Verdict.of("schouten-nilpotent", all(v.is_zero() for v in PP.comps.values())),
    ]
    return Report("curvature-report", cfg, cp.to_json(), verdicts, latex=cp.to_latex())


def _verify_ambient(cfg: RunConfig) -> tuple[dict, list[Verdict]]:
    from .ambient import gF_ambient, nabamb_check, verify_ricci_flat

    am = gF_ambient(cfg.params, convention=cfg.convention)
    ric = verify_ricci_flat(am, cfg.mode, n=cfg.n, seed=cfg.seed)
    cp = curvature(am.g, with_cotton=False)
    PP = compose_PP(cp.schouten, cp.fm)
    nab = nabamb_check(am)
    verdicts = [
        Verdict.of("ambient-ricci-flat", ric.passed, ric.to_json()),
        Verdict.of("schouten-nilpotent", all(v.is_zero() for v in PP.comps.values())),
        Verdict.of("ambient-connection-u0", all(nab.values()), {"identities": nab}),
        Verdict.of("ambient-homogeneous", not am.homogeneity_defects()),
    ]
    return {"ricci": ric.to_json(), "nabamb": nab}, verdicts


def _verify_spinor(cfg: RunConfig) -> tuple[dict, list[Verdict]]:
    from .spin import clifford_check, clifford_pairing_check, parallel_spinor_check, psi_printed, spin_metric_check

    psi = psi_printed(cfg.params)
    par = parallel_spinor_check(cfg.params, psi, convention=cfg.convention)
    verbatim = parallel_spinor_check(cfg.params, psi_printed(cfg.params, corrected=False),
                                     convention=cfg.convention)
    # the displayed spinor is compared separately; a failure there is a transcription mismatch
    printed = Verdict("printed-psi", "MATCH" if verbatim.passed and verbatim.detail["norm_is_4sqrt6"] else "MISMATCH",
                      {"nonzero": verbatim.detail["nonzero"], "norm": verbatim.detail["norm"],
                       "resolution": "prefactor e^(-bx/3) on the fifth and eighth entries"})
    norm = Verdict.of("spinor-norm-4sqrt6", par.detail["norm_is_4sqrt6"], {"norm": par.detail["norm"]})
    verdicts = [clifford_check(), spin_metric_check(), clifford_pairing_check(psi), par, norm, printed]
    return {"psi": [str(v) for v in psi], "nabla_psi": par.detail["residual"]}, verdicts


def _verify_omega(cfg: RunConfig) -> tuple[dict, list[Verdict]]:
    from .spin import ambient_omega, omega_closure, omega_comparison, printed_omega

    om = ambient_omega(cfg.params, convention=cfg.convention)
    closure = omega_closure(om)
    verbatim = omega_comparison(om, printed_omega(cfg.params, om.basis))
    corrected = omega_comparison(om, printed_omega(cfg.params, om.basis, corrected=True))
    bad = [r["monomial"] for r in verbatim if not r["match"]]
    verdicts = [
        Verdict.of("omega-closed", closure["d_omega_zero"]),
        Verdict.of("omega-coclosed", closure["d_star_omega_zero"]),
        Verdict("printed-omega", "MISMATCH" if bad else "MATCH", {"mismatched": bad}),
        Verdict("printed-omega-corrected", "MATCH" if all(r["match"] for r in corrected) else "MISMATCH",
                {"mismatched": [r["monomial"] for r in corrected if not r["match"]]}),
    ]
    return {"omega": om.to_json(), "comparison": verbatim}, verdicts


def _verify_special(cfg: RunConfig) -> tuple[dict, list[Verdict]]:
    from .ambient import brinkmann_check, einstein_toy

    br = brinkmann_check()
    et = einstein_toy()
    verdicts = [
        Verdict.of("brinkmann-ricci-flat", br["ricci_flat"] and br["d_u_parallel"] and br["d_u_null"]),
        Verdict.of("einstein-toy", et["einstein"] and et["mu2_is_Lambda2_g"] and et["ricci_flat"]),
        Verdict.of("cone-factorization", et["cone_dt_du"] and et["cone_block"], {"c": str(et["c"])}),
    ]
    return {"brinkmann": br, "einstein_toy": {k: str(v) if isinstance(v, Scalar) else v for k, v in et.items()}}, \
        verdicts


VERIFY: dict[str, Callable[[RunConfig], tuple[dict, list[Verdict]]]] = {
    "ambient": _verify_ambient,
    "spinor": _verify_spinor,
    "omega": _verify_omega,
    "special": _verify_special,
}


def cmd_verify(cfg: RunConfig) -> Report:
    targets = list(VERIFY) if cfg.target == "all" else [cfg.target]
    result, verdicts = {}, []
    for t in targets:
        if t not in VERIFY:
            raise UsageError(f"unknown verify target {t!r}")
        r, v = VERIFY[t](cfg)
        result[t] = r
        verdicts += v
    return Report(f"verify-{cfg.target}", cfg, result, verdicts)


def cmd_conformance(cfg: RunConfig) -> Report:
    from .nurowski import conformance_report

    if cfg.target != "appendix":
        raise UsageError(f"unknown conformance target {cfg.target!r}")
    rows = conformance_report(cfg.params, cfg.convention)
    verdicts = [Verdict(r["id"], r["status"], {}) for r in rows]
    return Report("conformance-appendix", cfg, {"entries": rows}, verdicts)


def cmd_holonomy(cfg: RunConfig) -> Report:
    from .holonomy import ambient_data, holonomy_report, non_symmetric_check, sample_points

    rep = holonomy_report(cfg.params, points=cfg.points, seed=cfg.seed, max_order=cfg.max_order,
                          convention=cfg.convention, workers=cfg.workers)
    data = ambient_data(cfg.params, cfg.convention)
    ns = non_symmetric_check(data, sample_points(data, 1, cfg.seed)[0])
    verdicts = [Verdict("holonomy-g2", rep["verdict"], {"max_rank": rep["max_rank"]}), ns]
    return Report("holonomy", cfg, {**rep, "non_symmetric": ns.to_json()}, verdicts)


def _obstruction_verdict(name: str, res) -> Verdict:
    status = {"OBSTRUCTED": "OBSTRUCTED", "UNOBSTRUCTED": "NOT-OBSTRUCTED"}.get(res.status, "INCONCLUSIVE")
    return Verdict(name, status, {})


def cmd_obstruction(cfg: RunConfig) -> Report:
    from .conformal import NULL_CASES, cotton_flat_einstein_check, gF_cotton_obstruction, null_line_obstruction

    if cfg.target == "cotton":
        res = gF_cotton_obstruction(cfg.params)
        return Report("obstruction-cotton", cfg, res.to_json(), [_obstruction_verdict("cotton", res)])
    if cfg.target == "einstein":
        out = cotton_flat_einstein_check(cfg.params)
        if out["einstein"] is None:
            status = out["cotton"]["status"]
            verdict = Verdict("conformally-einstein", "OBSTRUCTED" if status == "OBSTRUCTED" else "INCONCLUSIVE",
                              {"via": "cotton"})
        else:
            st = out["einstein"]["status"]
            verdict = Verdict("conformally-einstein", "OBSTRUCTED" if st == "OBSTRUCTED" else "NOT-OBSTRUCTED",
                              {"via": "gradient"})
        return Report("obstruction-einstein", cfg, out, [verdict])
    if cfg.target == "nullline":
        cases = NULL_CASES if cfg.case == "all" else (cfg.case,)
        result, verdicts = {}, []
        for c in cases:
            if c not in NULL_CASES:
                raise UsageError(f"unknown null-line case {c!r}")
            res = null_line_obstruction(c, cfg.params)
            result[c] = res.to_json()
            verdicts.append(_obstruction_verdict(f"null-line-{c}", res))
        return Report("obstruction-nullline", cfg, result, verdicts)
    raise UsageError(f"unknown obstruction target {cfg.target!r}")


# ---------------------------------------------------------------------------
# export

EXPORT_OBJECTS = ("gF", "ambient", "omega", "psi", "curvature")


def export_object(obj: str, params: ParameterSet, fmt: str, convention: str = "resolved") -> str:
    """Serialize one object as JSON or as a LaTeX display."""
    if obj not in EXPORT_OBJECTS:
        raise UsageError(f"unknown object {obj!r}; choose from {', '.join(EXPORT_OBJECTS)}")
    if fmt not in ("json", "latex"):
        raise UsageError("export format is json or latex")
    header = {"schema": f"ambientg2.export/{SCHEMA_VERSION}", "object": obj, "params": params.as_dict(),
              "convention": convention, "calibration_fingerprint": calibration_fingerprint()}
    if obj == "gF":
        fm = metric_gF(params, convention)
        if fmt == "latex":
            return _display(r"g_F", fm.symmetric().to_latex())
        return dumps({**header, "coframe": coframe_json(fm.coframe), "metric": _matrix_json(fm.G)})
    if obj == "ambient":
        from .ambient import gF_ambient

        am = gF_ambient(params, convention=convention)
        if fmt == "latex":
            return _display(r"\widetilde{g}_F", _ambient_latex(am))
        return dumps({**header, "coframe": coframe_json(am.g.coframe), "metric": _matrix_json(am.g.G),
                      "P": _matrix_json(am.P), "mu2": _matrix_json(am.mu2)})
    if obj == "omega":
        from .spin import ambient_omega

        om = ambient_omega(params, convention=convention)
        if fmt == "latex":
            return _display(r"\omega", om.to_latex())
        return dumps({**header, "form": om.to_json()})
    if obj == "psi":
        from .spin import psi_printed

        psi = psi_printed(params)
        if fmt == "latex":
            body = r"\left(" + ",\\ ".join(scalar_latex(v) for v in psi) + r"\right)"
            return _display(r"\psi", body)
        return dumps({**header, "spinor": [scalar_json(v) for v in psi]})
    cp = curvature(metric_gF(params, convention), with_bach=True)
    if fmt == "latex":
        return cp.to_latex() + "\n"
    return dumps({**header, "curvature": cp.to_json()})


def _display(lhs: str, rhs: str) -> str:
    return "\\begin{equation*}\n%s = %s\n\\end{equation*}\n" % (lhs, rhs)


def _ambient_latex(am) -> str:
    from .forms import SymmetricTensor

    cf = am.g.coframe
    minus_P = SymmetricTensor.from_matrix(cf.chart, [[-v for v in row] for row in am.P], cf)
    mu2 = SymmetricTensor.from_matrix(cf.chart, am.mu2, cf)
    parts = [r"-2\,\mathrm{d}t\,\mathrm{d}u", r"t^2 g_F"]
    if not minus_P.is_zero():
        parts.append(r"2tu\left(%s\right)" % minus_P.to_latex())
    if not mu2.is_zero():
        parts.append(r"u^2\left(%s\right)" % mu2.to_latex())
    return " + ".join(parts)


def import_object(text: str, convention: str | None = None):
    """Inverse of the JSON export: rebuild the exported object."""
    from .cas.serialize import from_json

    data = json.loads(text)
    params = ParameterSet.from_mapping(data["params"])
    convention = convention or data["convention"]
    obj = data["object"]
    if obj == "omega":
        from .spin import ambient_xi

        xi = ambient_xi(params, convention).coframe
        return DifferentialForm.from_json(data["form"], {xi.name: xi})
    if obj == "psi":
        return [from_json(t) for t in data["spinor"]]
    if obj in ("gF", "ambient"):
        out = {"metric": [[from_json(t) for t in row] for row in data["metric"]],
               "coframe": [[from_json(t) for t in row] for row in data["coframe"]["matrix"]]}
        if obj == "ambient":
            out["P"] = [[from_json(t) for t in row] for row in data["P"]]
            out["mu2"] = [[from_json(t) for t in row] for row in data["mu2"]]
        return out
    raise UsageError(f"object {obj!r} has no importer")


# ---------------------------------------------------------------------------
# argument parsing

COMMANDS = {
    "build": cmd_build,
    "curvature-report": cmd_curvature,
    "verify": cmd_verify,
    "conformance": cmd_conformance,
    "holonomy": cmd_holonomy,
    "obstruction": cmd_obstruction,
}


def _common(p: argparse.ArgumentParser, params_default: str = "symbolic") -> None:
    p.add_argument("--params", default=params_default,
                   help='"symbolic" or a list like a3=1,b=1/2 (unlisted parameters are 0)')
    p.add_argument("--convention", choices=("resolved", "printed"), default="resolved",
                   help="reading of the A2 coefficient")
    p.add_argument("--format", dest="fmt", choices=("json", "latex", "text"), default="json")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=7, help="seed for all random sampling")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ambientg2", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="coframe and metric of g_F")
    p.add_argument("target", choices=("gf",))
    _common(p)

    p = sub.add_parser("curvature-report", help="connection, Schouten, Weyl, Cotton and Bach of g_F")
    _common(p)

    p = sub.add_parser("verify", help="identity checks")
    p.add_argument("target", choices=("ambient", "spinor", "omega", "special", "all"))
    p.add_argument("--mode", choices=("symbolic", "sampled"), default="symbolic")
    p.add_argument("--n", type=int, default=50, help="number of sampled points")
    _common(p)

    p = sub.add_parser("conformance", help="engine against the tabulated formulas")
    p.add_argument("target", choices=("appendix",))
    _common(p)

    p = sub.add_parser("holonomy", help="pointwise Ambrose-Singer span and stabilizer checks")
    p.add_argument("--order", dest="max_order", type=int, default=2, choices=(0, 1, 2))
    p.add_argument("--points", type=int, default=3)
    _common(p, params_default="a3=1")
    p.set_defaults(seed=11)

    p = sub.add_parser("obstruction", help="conformally Einstein obstructions")
    p.add_argument("target", choices=("einstein", "cotton", "nullline"))
    p.add_argument("--case", default="all", choices=("a", "b", "c", "d", "all"))
    _common(p)

    p = sub.add_parser("export", help="write one object as JSON or LaTeX")
    p.add_argument("obj", choices=EXPORT_OBJECTS)
    _common(p)
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    try:
        params = ParameterSet.parse(ns.params)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --params: {exc}") from None
    cfg = RunConfig(command=ns.command, params=params, convention=ns.convention, fmt=ns.fmt, output=ns.output,
                    seed=ns.seed, workers=_workers())
    for name in ("mode", "n", "max_order", "points", "target", "case", "obj"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if cfg.points < 1 or cfg.n < 1:
        raise UsageError("--points and --n must be positive")
    return cfg


def _render(report: Report) -> str:
    fmt = report.config.fmt
    if fmt == "json":
        return dumps(report.to_json())
    if fmt == "latex":
        if report.latex is None:
            raise UsageError(f"{report.kind} has no LaTeX form")
        return report.latex + "\n"
    return report.to_text() + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config(ns)
        if cfg.command == "export":
            fmt = "json" if cfg.fmt == "text" else cfg.fmt
            text, status = export_object(cfg.obj, cfg.params, fmt, cfg.convention), 0
        else:
            report = COMMANDS[cfg.command](cfg)
            text, status = _render(report), report.exit_status()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _write(text, cfg.output)
    except OSError as exc:
        print(f"error: cannot write {cfg.output}: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
