"""Command-line front end.

Exit codes: 0 success, 1 internal identity failure, 2 invalid input,
3 a published value disagrees with the computation (errata).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import CASES, classify, export_catalog, get_case, instantiate_case, sample_param_sets, verify_table_row
from .errors import LieFlagError
from .finsler import DEFAULT_SEED, FinslerMetric, Kind, admissibility_check, berwald_check
from .flag_curvature import (
    CaseIIIFlagInput,
    case_iii_deformation,
    case_iii_metric,
    case_iii_pipeline,
    matsumoto_case_iii_closed_form,
    matsumoto_case_iii_closed_form_corrected,
    randers_case_iii_closed_form,
    random_case_iii_input,
)
from .lie_core import (
    FRAME,
    InnerProduct,
    LieAlgebra,
    curvature,
    curvature_symmetries,
    koszul_connection,
    metric_compatibility_residual,
    parallel_fields,
    torsion_residual,
    validate_lie_algebra,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_ERRATA = 0, 1, 2, 3
PARAM_ALIASES = {"lambda": "lambda", "lam": "lambda", "l": "lambda", "mu": "mu", "nu": "nu", "c": "c"}


class UsageError(LieFlagError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _fmt_vector(v) -> str:
    terms = [f"{_fmt(c)} {FRAME[k]}" for k, c in enumerate(v) if c != 0.0]
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, Kind):
        return obj.value
    return obj


def _emit(args, report: dict, lines: list[str], elapsed: float) -> None:
    if args.json:
        if args.timing:
            report["timing"] = {"seconds": elapsed}
        sys.stdout.write(json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    else:
        out = list(lines)
        if args.timing:
            out.append(f"elapsed: {elapsed:.3f} s")
        sys.stdout.write("\n".join(out) + "\n")


def _base_report(args) -> dict:
    return {
        "command": args.command,
        "argv": list(args.argv),
        "seed": args.seed,
        "tolerances": {"tol": args.tol},
        "version": __version__,
    }


def _parse_params(items) -> dict[str, float]:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        key = PARAM_ALIASES.get(name.strip().lower())
        if not sep or key is None:
            raise UsageError(f"bad --param {item!r}; expected NAME=VALUE with NAME in lambda, mu, nu, c")
        try:
            out[key] = float(value)
        except ValueError:
            raise UsageError(f"bad --param value {value!r}") from None
    return out


def _parse_triple(text: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad vector {text!r}; expected three comma-separated numbers") from None
    if len(vals) != 3:
        raise UsageError(f"bad vector {text!r}; expected three comma-separated numbers")
    return np.array(vals)


def load_algebra_spec(path) -> tuple[LieAlgebra, InnerProduct, FinslerMetric | None]:
    """Read a JSON document with ``brackets``, ``metric`` and optional ``deformation``."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        br = doc["brackets"]
        alg = LieAlgebra.from_brackets(br["xy"], br["xz"], br["yz"])
        g = InnerProduct(np.array(doc["metric"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, LieFlagError):
            raise
        raise UsageError(f"malformed algebra document {path}: {exc!r}") from None
    jac = validate_lie_algebra(alg, 1e-9)
    if not jac.passed:
        raise UsageError(f"brackets violate the Jacobi identity (residual {jac.residual:.3g})")
    F = None
    if doc.get("deformation") is not None:
        d = doc["deformation"]
        F = FinslerMetric(Kind.parse(d.get("kind", "randers")), g, np.array(d["X"], dtype=float))
        adm = admissibility_check(g, F.xt, F.kind)
        if not adm.admissible:
            raise UsageError(f"deformation is inadmissible: |X|_alpha = {_fmt(adm.norm)} >= {adm.bound}")
    return alg, g, F


def _source(args):
    if (args.case is None) == (args.file is None):
        raise UsageError("give exactly one of --case or --file")
    if args.file is not None:
        if args.param:
            raise UsageError("--param only applies to --case")
        alg, g, F = load_algebra_spec(args.file)
        return alg, g, F, None, {}
    params = _parse_params(args.param)
    alg, g = instantiate_case(args.case, params)
    return alg, g, None, args.case, params


def cmd_connection(args) -> tuple[int, dict, list[str]]:
    alg, g, _, case_id, params = _source(args)
    conn = koszul_connection(alg, g)
    report = _base_report(args)
    lines = []
    table = {}
    for i in range(3):
        for j in range(3):
            key = f"nabla_{FRAME[i]} {FRAME[j]}"
            table[key] = conn.gamma[i, j].tolist()
            lines.append(f"{key} = {_fmt_vector(conn.gamma[i, j])}")
    report["connection"] = table
    report["identities"] = {"torsion": torsion_residual(conn), "compatibility": metric_compatibility_residual(conn)}
    code = EXIT_OK
    if args.verify:
        if case_id is None:
            raise UsageError("--verify needs a catalog --case")
        row = verify_table_row(case_id, params, args.tol if args.tol is not None else 1e-9)
        report["verify"] = row
        report["errata"] = row.errata
        lines.append(f"table row {case_id}: {'match' if row.match else 'MISMATCH'} "
                     f"(max residual {row.max_residual:.3g})")
        for e in row.errata:
            lines.append(f"  errata {e.entry}: table {_fmt_vector(e.tabulated)} vs Koszul {_fmt_vector(e.koszul)}")
        if not row.match:
            code = EXIT_ERRATA
    return code, report, lines


def cmd_curvature(args) -> tuple[int, dict, list[str]]:
    alg, g, _, _, _ = _source(args)
    R = curvature(alg, koszul_connection(alg, g))
    sym = curvature_symmetries(R, g)
    report = _base_report(args)
    report["curvature"] = R.r.tolist()
    report["symmetries"] = sym
    lines = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        for k in range(3):
            v = R.r[i, j, k]
            if np.any(np.abs(v) > 1e-14):
                lines.append(f"R({FRAME[i]},{FRAME[j]}){FRAME[k]} = {_fmt_vector(v)}")
    if not lines:
        lines.append("R = 0")
    code = EXIT_OK if sym.passed() else EXIT_INTERNAL
    return code, report, lines


def cmd_parallel(args) -> tuple[int, dict, list[str]]:
    alg, g, F, _, _ = _source(args)
    conn = koszul_connection(alg, g)
    tol = args.tol if args.tol is not None else 1e-9
    basis = parallel_fields(alg, conn, tol)
    report = _base_report(args)
    report["parallel_basis"] = basis.tolist()
    report["dimension"] = len(basis)
    lines = [f"parallel left-invariant fields: dimension {len(basis)}"]
    lines += [f"  {_fmt_vector(v)}" for v in basis]
    if F is not None:
        verdict = berwald_check(alg, conn, F, tol)
        report["berwald"] = verdict
        lines.append(f"{F.kind.value} deformation {_fmt_vector(F.xt)}: "
                     f"{'Berwald' if verdict.is_berwald else 'not Berwald'} (residual {verdict.residual:.3g})")
    return EXIT_OK, report, lines


def cmd_classify(args) -> tuple[int, dict, list[str]]:
    samples = args.samples if args.samples is not None else 20
    tol = args.tol if args.tol is not None else 1e-9
    result = classify(samples=samples, seed=args.seed, tol=tol)
    report = _base_report(args)
    report["samples"] = samples
    report["classification"] = result
    lines = []
    for c in result.cases:
        dims = sorted(set(c.dimensions))
        mark = f"clause ({c.clause})" if c.clause else "-"
        lines.append(f"case {c.case_id:2d} {c.group:20s} parallel dims {dims} {mark}")
        if c.clause:
            lines.append(f"         basis: {', '.join(_fmt_vector(v) for v in c.basis)}")
            for kind, expr in c.bounds.items():
                lines.append(f"         {kind}: {expr}")
        for label, sweep in c.special.items():
            lines.append(f"         {label}: dims {sorted(set(sweep['dimensions']))}")
    lines.append("theorem reproduced" if result.matches_theorem else "DEVIATION: " + "; ".join(result.deviations))
    return (EXIT_OK if result.matches_theorem else EXIT_INTERNAL), report, lines


def _closed_form(kind: Kind, inp: CaseIIIFlagInput) -> dict:
    if kind is Kind.RANDERS:
        return {"closed_form": randers_case_iii_closed_form(inp)}
    return {"closed_form": matsumoto_case_iii_closed_form(inp),
            "closed_form_corrected": matsumoto_case_iii_closed_form_corrected(inp)}


def _flag_row(kind: Kind, inp: CaseIIIFlagInput) -> dict:
    general = case_iii_pipeline(kind, inp)
    row = {"U": inp.U.tolist(), "V": inp.V.tolist(), "general": general}
    row.update(_closed_form(kind, inp))
    row["difference"] = abs(general - row["closed_form"])
    if "closed_form_corrected" in row:
        row["difference_corrected"] = abs(general - row["closed_form_corrected"])
    return row


def cmd_flag(args) -> tuple[int, dict, list[str]]:
    kind = Kind.parse(args.kind)
    tol = args.tol if args.tol is not None else 1e-8
    if not args.nu > 0:
        raise UsageError(f"--nu must be positive, got {args.nu}")
    adm = admissibility_check(case_iii_metric(args.nu), case_iii_deformation(args.p), kind)
    if not adm.admissible:
        limit = "sqrt(3)/3" if kind is Kind.RANDERS else "sqrt(3)/6"
        raise UsageError(f"p = {args.p} is inadmissible for {kind.value}: need |p| < {limit} "
                         f"(|X|_alpha = {_fmt(adm.norm)} >= {adm.bound})")
    report = _base_report(args)
    report.update({"kind": kind.value, "p": args.p, "nu": args.nu})
    if args.random:
        rng = np.random.default_rng(args.seed)
        rows = [_flag_row(kind, random_case_iii_input(rng, kind, p=args.p, nu=args.nu)) for _ in range(args.random)]
    else:
        if args.U is None or args.V is None:
            raise UsageError("give --U and --V, or --random N")
        rows = [_flag_row(kind, CaseIIIFlagInput(args.p, args.nu, _parse_triple(args.U), _parse_triple(args.V)))]
    rel = lambda r, key: r[key] / max(1.0, abs(r["general"]))
    max_dev = max(rel(r, "difference") for r in rows)
    report["max_deviation"] = max_dev
    report["flags"] = rows
    lines = []
    if len(rows) == 1:
        r = rows[0]
        lines.append(f"K (general pipeline) = {_fmt(r['general'])}")
        lines.append(f"K (closed form)      = {_fmt(r['closed_form'])}")
        if "closed_form_corrected" in r:
            lines.append(f"K (corrected form)   = {_fmt(r['closed_form_corrected'])}")
        lines.append(f"difference           = {r['difference']:.3g}")
    else:
        lines.append(f"{len(rows)} random flags, max relative deviation (closed form) = {max_dev:.3g}")
    if kind is Kind.MATSUMOTO:
        max_corr = max(rel(r, "difference_corrected") for r in rows)
        report["max_deviation_corrected"] = max_corr
        lines.append(f"max relative deviation (corrected form) = {max_corr:.3g}")
    errata = max_dev >= tol
    report["errata"] = ["published closed form deviates from the definitional flag curvature"] if errata else []
    if errata:
        lines.append(f"ERRATA: published closed form deviates beyond tol {tol:g}")
    return (EXIT_ERRATA if errata else EXIT_OK), report, lines


def cmd_verify_table(args) -> tuple[int, dict, list[str]]:
    samples = args.samples if args.samples is not None else 20
    tol = args.tol if args.tol is not None else 1e-9
    rows, lines, identities_ok = [], [], True
    for cid in sorted(CASES):
        reports = [verify_table_row(cid, q, tol) for q in sample_param_sets(cid, samples, args.seed)]
        ok = all(r.identities_hold for r in reports)
        identities_ok &= ok
        matches = sum(r.match for r in reports)
        rows.append({
            "case": cid,
            "group": get_case(cid).group,
            "samples": len(reports),
            "matches": matches,
            "max_residual": max(r.max_residual for r in reports),
            "identities_hold": ok,
            "max_torsion_residual": max(r.torsion_residual for r in reports),
            "max_compatibility_residual": max(r.compatibility_residual for r in reports),
            "errata": [{"params": r.params, "entries": r.errata} for r in reports if not r.match],
            "notes": list(get_case(cid).notes),
        })
        lines.append(f"case {cid:2d}: {matches}/{len(reports)} match, max residual {rows[-1]['max_residual']:.2e}, "
                     f"identities {'ok' if ok else 'FAIL'}")
    report = _base_report(args)
    report.update({"samples": samples, "rows": rows, "identities_hold": identities_ok})
    return (EXIT_OK if identities_ok else EXIT_INTERNAL), report, lines


def cmd_export_catalog(args) -> tuple[int, dict, list[str]]:
    doc = export_catalog()
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        return EXIT_OK, {"written": args.output}, [f"wrote {args.output}"]
    # the dump is JSON regardless of --json
    args.json = True
    return EXIT_OK, doc, []


def _env_seed() -> int:
    raw = os.environ.get("LIEFLAG_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LIEFLAG_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $LIEFLAG_SEED or 42)")
    common.add_argument("--tol", type=float, default=None, help="comparison tolerance")
    common.add_argument("--samples", type=int, default=None, help="parameter samples per case")
    common.add_argument("--timing", action="store_true", help="report wall-clock time")

    parser = argparse.ArgumentParser(prog="lieflag", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lieflag {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p):
        p.add_argument("--case", type=int, help="catalog case id (1-15)")
        p.add_argument("--param", action="append", metavar="NAME=VALUE", help="case parameter, repeatable")
        p.add_argument("--file", help="JSON algebra document")

    p = sub.add_parser("connection", parents=[common], help="Levi-Civita connection table")
    source(p)
    p.add_argument("--verify", action="store_true", help="diff against the tabulated row")
    p.set_defaults(func=cmd_connection)

    p = sub.add_parser("curvature", parents=[common], help="Riemann curvature on the frame")
    source(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("parallel", parents=[common], help="parallel left-invariant vector fields")
    source(p)
    p.set_defaults(func=cmd_parallel)

    p = sub.add_parser("classify", parents=[common], help="which cases admit Berwald-type deformations")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("flag", parents=[common], help="case-iii flag curvature, pipeline vs closed form")
    p.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--U", help="flagpole coordinates a,b,c")
    p.add_argument("--V", help="transverse coordinates")
    p.add_argument("--random", type=int, default=0, metavar="N", help="compare N random orthonormal flags")
    p.set_defaults(func=cmd_flag)

    p = sub.add_parser("verify-table", parents=[common], help="check every catalog row against Koszul")
    p.set_defaults(func=cmd_verify_table)

    p = sub.add_parser("export-catalog", parents=[common], help="dump the catalog as JSON")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_export_catalog)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    start = time.perf_counter()
    try:
        if args.seed is None:
            args.seed = _env_seed()
        if args.samples is not None and args.samples < 1:
            raise UsageError("--samples must be at least 1")
        code, report, lines = args.func(args)
    except LieFlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, report, lines, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
