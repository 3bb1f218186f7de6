"""Command-line interface.

Subcommands:

* ``validate <file>``            full structural + geometric validation of a
                                 tensor document
* ``tensor <model> [--dump F]``  emit the model tensor bundle (curvature, its
                                 symmetrized companion, both corrected tensors,
                                 Ricci traces) as JSON
* ``identities <chart> [--points N]``  finite-difference identity residuals
* ``scenario <id> [params]``     one verification scenario
* ``all``                        the full scenario suite

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
input-validation error.  Output is plain ASCII (nothing to disable for
NO_COLOR); reports are byte-identical across runs with equal seeds.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .bochner import DimensionTooSmallError, generalized_bochner, rk_bochner
from .charts import (
    ChartSpec,
    ChartSpecError,
    FDConfig,
    bianchi_suite,
    make_chart,
    nk_identity_suite,
    parse_model_spec,
)
from .curvature import PointValidationError, ricci_family, star
from .multilinear import SymmetryError
from .scenarios import (
    SCENARIO_IDS,
    ScenarioParamError,
    ScenarioParams,
    ScenarioReport,
    ToleranceConfig,
    UnknownScenarioError,
    make_model,
    run_all,
    run_scenario,
)
from .serialization import (
    DocumentFormatError,
    TensorDocument,
    canonical_json,
    dump_tensor,
    load_tensor,
)

__all__ = ["cli_dispatch", "main"]

_STATUS_TAG = {
    "pass": "[PASS]",
    "fail": "[FAIL]",
    "expected-fail": "[XFAIL]",
    "absent": "[ABSENT]",
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-alg", type=float, default=1e-12,
                        help="tolerance for exact-formula algebra (default 1e-12)")
    common.add_argument("--tol-fd1", type=float, default=1e-6,
                        help="tolerance for first-derivative identities (default 1e-6)")
    common.add_argument("--tol-fd2", type=float, default=1e-4,
                        help="tolerance for second-derivative identities (default 1e-4)")
    common.add_argument("--fd-step", type=float, default=1e-3,
                        help="finite-difference step (default 1e-3)")
    common.add_argument("--no-richardson", action="store_true",
                        help="disable Richardson extrapolation of first derivatives")
    common.add_argument("--seed", type=int, default=0, help="seed for all sampling")
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH")
    common.add_argument("--quiet", action="store_true", help="suppress console output")

    parser = argparse.ArgumentParser(
        prog="bochnerkit",
        description="curvature algebra and verification for almost Hermitian model spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", parents=[common],
                                help="validate a tensor document")
    p_validate.add_argument("file")

    p_tensor = sub.add_parser("tensor", parents=[common],
                              help="emit the tensor bundle of a model")
    p_tensor.add_argument("model",
                          help="model name (ce, s6, cp, cd) or descriptor like CP(3,4) "
                               "or PRODUCT(CD(1,-1),S6(1))")
    p_tensor.add_argument("--m", type=int, default=None, help="complex dimension")
    p_tensor.add_argument("--c", type=float, default=None, help="sectional curvature (s6)")
    p_tensor.add_argument("--mu", type=float, default=None, help="holomorphic curvature (cp/cd)")
    p_tensor.add_argument("--dump", metavar="PATH",
                          help="also write the bare tensor document to PATH")

    p_ident = sub.add_parser("identities", parents=[common],
                             help="finite-difference identity residuals on a chart")
    p_ident.add_argument("chart", help="chart descriptor, e.g. S6(1) or CP(3,4)")
    p_ident.add_argument("--points", type=int, default=2, help="sampled points (default 2)")

    p_scen = sub.add_parser("scenario", parents=[common], help="run one scenario")
    p_scen.add_argument("id", help="scenario id; one of: " + ", ".join(SCENARIO_IDS))
    _add_scenario_params(p_scen)

    p_all = sub.add_parser("all", parents=[common], help="run the full scenario suite")
    _add_scenario_params(p_all)
    return parser


def _add_scenario_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=3)
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--mu", type=float, default=1.0)
    parser.add_argument("--samples", type=int, default=512,
                        help="antiholomorphic 4-frame samples (default 512)")
    parser.add_argument("--points", type=int, default=2,
                        help="chart points per scenario (default 2)")


def _scenario_params(args: argparse.Namespace) -> ScenarioParams:
    return ScenarioParams(
        m=args.m, k=args.k, c=args.c, mu=args.mu,
        seed=args.seed, h=args.fd_step, richardson=not args.no_richardson,
        samples=args.samples, chart_points=args.points,
        tolerances=ToleranceConfig(
            tol_alg=args.tol_alg, tol_fd1=args.tol_fd1, tol_fd2=args.tol_fd2
        ),
    )


def _say(args: argparse.Namespace, line: str) -> None:
    if not args.quiet:
        print(line)


def _write_json(args: argparse.Namespace, payload: dict) -> None:
    if args.json:
        with open(args.json, "w", encoding="ascii") as fh:
            fh.write(canonical_json(payload) + "\n")


def _print_report(args: argparse.Namespace, report: ScenarioReport) -> None:
    for check in report.checks:
        defect = "absent" if check.defect is None else f"{check.defect:.3e}"
        _say(args, f"{_STATUS_TAG[check.status]:8s} {report.scenario}.{check.name}  "
                   f"defect={defect}  tol={check.tolerance:.1e}")
    _say(args, f"scenario {report.scenario}: {'pass' if report.passed else 'FAIL'} "
               f"({report.wall_time_s:.2f}s)")


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        doc = load_tensor(args.file, tol=args.tol_alg)
    except FileNotFoundError:
        print(f"error: no such file: {args.file}", file=sys.stderr)
        return 2
    except DocumentFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PointValidationError as exc:
        _say(args, f"invalid: {exc}")
        return 1
    except SymmetryError as exc:
        _say(args, f"invalid: {exc}")
        return 1
    label = f" ({doc.label})" if doc.label else ""
    _say(args, f"valid tensor document{label}: dim {doc.dim}")
    _write_json(args, {"file": str(args.file), "dim": doc.dim, "status": "valid"})
    return 0


_BARE_MODELS = ("ce", "s6", "cp", "cd")


def _tensor_spec(args: argparse.Namespace) -> ChartSpec:
    name = args.model.strip()
    if "(" in name:
        if args.m is not None or args.c is not None or args.mu is not None:
            raise ChartSpecError("pass parameters either in the descriptor or as flags, not both")
        return parse_model_spec(name)
    kind = name.lower()
    if kind not in _BARE_MODELS:
        raise ChartSpecError(
            f"unknown model {name!r}; use one of {', '.join(_BARE_MODELS)} or a descriptor"
        )
    if kind == "ce":
        return ChartSpec(kind="CE", m=args.m if args.m is not None else 3)
    if kind == "s6":
        if args.m is not None and args.m != 3:
            raise ChartSpecError("the six-sphere fixes dim 6 (m = 3)")
        return ChartSpec(kind="S6", c=args.c if args.c is not None else 1.0)
    if kind == "cp":
        return ChartSpec(kind="CP", m=args.m if args.m is not None else 3,
                         mu=args.mu if args.mu is not None else 1.0)
    return ChartSpec(kind="CD", m=args.m if args.m is not None else 3,
                     mu=args.mu if args.mu is not None else -1.0)


def _cmd_tensor(args: argparse.Namespace) -> int:
    spec = _tensor_spec(args)
    point, R, label = make_model(spec)
    doc = TensorDocument.from_point_tensor(point, R, label=label)
    star_tensor = star(point, R, sym_tol=args.tol_alg)
    fam = ricci_family(point, R, sym_tol=args.tol_alg)
    gen = generalized_bochner(point, R, sym_tol=args.tol_alg)
    bundle = {
        "schema_version": 1,
        "model": label,
        "document": doc.to_dict(),
        "star": list(star_tensor.components.reshape(-1)),
        "ricci": {
            "S": list(fam.S.components.reshape(-1)),
            "S_prime": list(fam.S_prime.components.reshape(-1)),
            "S_star": list(fam.S_star.components.reshape(-1)),
            "tau": fam.tau,
            "tau_prime": fam.tau_prime,
            "tau_star": fam.tau_star,
        },
        "generalized_bochner": {
            "norm": gen.norm,
            "coefficients_used": gen.coefficients_used,
            "tensor": list(gen.tensor.components.reshape(-1)),
        },
    }
    try:
        rk = rk_bochner(point, R, sym_tol=args.tol_alg, rk_tol=args.tol_alg)
        bundle["rk_bochner"] = {
            "norm": rk.norm,
            "coefficients_used": rk.coefficients_used,
            "tensor": list(rk.tensor.components.reshape(-1)),
        }
    except DimensionTooSmallError as exc:
        bundle["rk_bochner"] = None
        bundle["rk_bochner_status"] = str(exc)
    text = canonical_json(bundle)
    if not args.quiet and not args.json:
        print(text)
    _write_json(args, bundle)
    if args.dump:
        dump_tensor(doc, args.dump)
    return 0


def _cmd_identities(args: argparse.Namespace) -> int:
    chart = make_chart(args.chart)
    cfg = FDConfig(
        h=args.fd_step,
        richardson=not args.no_richardson,
        tol_fd1=args.tol_fd1,
        tol_fd2=args.tol_fd2,
    )
    points = chart.sample_points(args.seed, args.points)
    residuals: dict[str, float] = {}
    for x in points:
        nk_rep = nk_identity_suite(chart, x, cfg, seed=args.seed)
        bi_rep = bianchi_suite(chart, x, cfg, seed=args.seed)
        for name, value in {**nk_rep.__dict__, **bi_rep.__dict__}.items():
            residuals[name] = max(residuals.get(name, 0.0), value)
    universal = {
        "nk": args.tol_fd1,
        "id_1_1": args.tol_fd2,
        "id_1_2": args.tol_fd2,
        "id_1_3": args.tol_fd2,
        "id_1_4": args.tol_fd2,
        "id_1_6": args.tol_fd2,
        "id_1_7": args.tol_fd2,
    }
    failed = False
    for name in sorted(residuals):
        value = residuals[name]
        if name in universal:
            ok = value <= universal[name]
            failed |= not ok
            tag = "[PASS]" if ok else "[FAIL]"
            _say(args, f"{tag:8s} {name}  residual={value:.3e}  tol={universal[name]:.1e}")
        else:
            _say(args, f"[INFO]   {name}  residual={value:.3e}  (model-dependent, not scored)")
    payload = {
        "schema_version": 1,
        "chart": chart.label,
        "points": int(args.points),
        "residuals": residuals,
        "scored": {k: residuals[k] <= v for k, v in universal.items() if k in residuals},
        "status": "fail" if failed else "pass",
    }
    _write_json(args, payload)
    return 1 if failed else 0


def _cmd_scenario(args: argparse.Namespace) -> int:
    report = run_scenario(args.id, _scenario_params(args))
    _print_report(args, report)
    _write_json(args, report.to_dict())
    return 0 if report.passed else 1


def _cmd_all(args: argparse.Namespace) -> int:
    reports = run_all(_scenario_params(args))
    for report in reports:
        _print_report(args, report)
    ok = all(r.passed for r in reports)
    _say(args, f"suite: {'pass' if ok else 'FAIL'} ({len(reports)} scenarios)")
    _write_json(args, {
        "schema_version": 1,
        "reports": [r.to_dict() for r in reports],
        "status": "pass" if ok else "fail",
    })
    return 0 if ok else 1


_COMMANDS = {
    "validate": _cmd_validate,
    "tensor": _cmd_tensor,
    "identities": _cmd_identities,
    "scenario": _cmd_scenario,
    "all": _cmd_all,
}


def cli_dispatch(argv: Sequence[str]) -> int:
    """Parse and run one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:  # argparse reports usage errors itself
        return 0 if exc.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args)
    except (ChartSpecError, ScenarioParamError, UnknownScenarioError,
            DocumentFormatError, PointValidationError, SymmetryError,
            DimensionTooSmallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
