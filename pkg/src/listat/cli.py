"""Command line front end.

Exit codes: 0 success, 2 invalid input, 3 request outside supported scope.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import __version__
from .algebra import (FAMILIES, LieAlgebra, UnsupportedError, ValidationError, build_builtin,
                      from_record, orthonormalize)
from .classify import (DFOptions, canonicalize_v, cs_subspace, df_solutions)
from .curvature import structure_report
from .gaussian import (ac_closed, ac_quadrature, expected_curvature, fisher_closed,
                       fisher_quadrature, point, verify_takano)
from .scalar import InexactError, einsum, fmt, is_exact, parse_scalar, resolve_eps
from .symtensor import (CubicForm, cubic_from_record, format_polynomial, polynomial_from_cubic,
                        polynomial_record)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNSUPPORTED = 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    exact: bool
    eps: float
    output: str | None
    as_json: bool


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".listat-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, human: str, record: dict) -> None:
    text = json.dumps(record, indent=2, sort_keys=True) + "\n" if cfg.as_json else human + "\n"
    if cfg.output:
        write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError("", f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        where = f"line {exc.lineno} column {exc.colno}"
        raise ValidationError("", f"malformed JSON at {where}: {exc.msg}") from None


def _algebra_source(args, exact: bool) -> tuple[LieAlgebra, str]:
    if args.input and (args.family or args.n is not None):
        raise ValidationError("", "give either --input or --family/--n, not both")
    if args.input:
        record = _load_json(args.input)
        alg, gram = from_record(record, exact)
        if gram is not None:
            alg, _ = orthonormalize(alg, gram)
        return alg, args.input
    if not args.family or args.n is None:
        raise ValidationError("", "need --family and --n (or --input)")
    if args.family not in FAMILIES:
        raise ValidationError("family", f"unknown family {args.family!r}")
    try:
        return build_builtin(args.family, args.n, exact), f"{args.family}({args.n})"
    except ValueError as exc:
        raise ValidationError("n", str(exc)) from None


def _polynomial_text(C: CubicForm) -> str:
    return format_polynomial(polynomial_from_cubic(C))


def _cubic_record(C: CubicForm) -> dict:
    return {"basis": "polynomial", "terms": polynomial_record(polynomial_from_cubic(C))}


def cmd_check(args, cfg: RunConfig) -> int:
    record = _load_json(args.file)
    if not isinstance(record, dict):
        raise ValidationError("", "expected an object with \"algebra\" and \"cubic\"")
    if "algebra" not in record:
        raise ValidationError("algebra", "missing field")
    if "cubic" not in record:
        raise ValidationError("cubic", "missing field")
    alg, gram = from_record(record["algebra"], cfg.exact, "algebra")
    C = cubic_from_record(record["cubic"], alg.n, cfg.exact, "cubic")
    if gram is not None:
        alg, frame = orthonormalize(alg, gram)
        p = frame.p
        C = CubicForm(einsum("ia,jb,kc,ijk->abc", p, p, p, C.c if is_exact(p) else C.to_float().c))
    cs_dim = cs_subspace(alg).dimension if (cfg.exact and alg.exact) else None
    report = structure_report(alg, C, cfg.eps, cs_dimension=cs_dim)
    out = report.to_record()
    out["mode"] = "exact" if cfg.exact else "float"
    out["version"] = __version__

    def show(v):
        return "none" if v is None else fmt(v)

    human = "\n".join([
        f"conjugate symmetric: {'yes' if report.conjugate_symmetric else 'no'}",
        f"dually flat: {'yes' if report.dually_flat else 'no'}",
        f"constant curvature: {show(report.constant_curvature)}",
        f"CHC: {show(report.chc)}",
        f"CS dimension: {'n/a' if cs_dim is None else cs_dim}",
    ])
    _emit(cfg, human, out)
    return EXIT_OK


def cmd_cs(args, cfg: RunConfig) -> int:
    if not cfg.exact:
        raise UnsupportedError("cs needs exact mode")
    alg, label = _algebra_source(args, True)
    basis = cs_subspace(alg)
    polys = basis.polynomials()
    if basis.dimension == 0:
        human = "dim 0"
    elif basis.dimension == 1:
        human = f"dim 1: {polys[0]}"
    else:
        human = "\n".join([f"dim {basis.dimension}:"] + [f"  {p}" for p in polys])
    record = {
        "algebra": label,
        "dimension": basis.dimension,
        "basis": [_cubic_record(C) for C in basis.forms],
        "polynomials": polys,
        "version": __version__,
    }
    _emit(cfg, human, record)
    return EXIT_OK


def cmd_df(args, cfg: RunConfig) -> int:
    if not cfg.exact:
        raise UnsupportedError("df needs exact mode")
    alg, label = _algebra_source(args, True)
    opts = DFOptions(
        grid=tuple(parse_scalar(x, False) for x in args.grid.split(",")) if args.grid else DFOptions.grid,
        newton_iters=args.newton_iters,
        dedupe_tol=args.dedupe_tol,
    )
    res = df_solutions(alg, opts, cfg.eps)
    record: dict = {"algebra": label, "cs_dimension": res.cs_dimension, "method": res.method,
                    "version": __version__}
    if res.family is not None:
        human = f"FAMILY: {res.family.description}"
        record.update(status="family", family=res.family.description)
    elif res.empty:
        bound = fmt(res.lower_bound)
        human = f"EMPTY (min residual ≥ {bound})"
        record.update(status="empty", lower_bound=bound)
    else:
        polys = [_polynomial_text(C) for C in res.forms]
        human = "\n".join([f"{len(polys)} solution{'s' if len(polys) != 1 else ''}:"]
                          + [f"  {p}" for p in polys])
        record.update(status="solutions", solutions=[_cubic_record(C) for C in res.forms],
                      polynomials=polys)
    _emit(cfg, human, record)
    return EXIT_OK


def cmd_canon(args, cfg: RunConfig) -> int:
    vals = []
    for pos, raw in enumerate(args.values.split(",")):
        try:
            vals.append(parse_scalar(raw, cfg.exact))
        except ValueError as exc:
            raise ValidationError(f"lambda[{pos}]", str(exc)) from None
    spectrum = canonicalize_v(vals)
    text = ",".join(fmt(v) for v in spectrum.values)
    _emit(cfg, text, {"canonical": [fmt(v) for v in spectrum.values], "version": __version__})
    return EXIT_OK


def cmd_takano(args, cfg: RunConfig) -> int:
    if args.m < 1:
        raise ValidationError("m", "must be at least 1")
    try:
        alpha = float(parse_scalar(args.alpha, True))
    except ValueError as exc:
        raise ValidationError("alpha", str(exc)) from None
    report = verify_takano(args.m, alpha, cfg.eps)
    p = point(args.m)
    quad = max(float(np.max(np.abs(fisher_quadrature(args.m, p, args.order) - fisher_closed(args.m, p)))),
               float(np.max(np.abs(ac_quadrature(args.m, alpha, p, args.order)
                                   - ac_closed(args.m, alpha, p)))))
    k_expected = expected_curvature(args.m, alpha)
    rec = report.to_record()
    rec.update(expected_constant_curvature=fmt(k_expected), quadrature_error=fmt(quad),
               m=args.m, alpha=fmt(alpha), mode="float", version=__version__)

    def show(v):
        return "none" if v is None else fmt(v)

    human = "\n".join([
        f"conjugate symmetric: {'yes' if report.conjugate_symmetric else 'no'}",
        f"dually flat: {'yes' if report.dually_flat else 'no'}",
        f"constant curvature: {show(report.constant_curvature)} (expected {fmt(k_expected)})",
        f"CHC: {show(report.chc)}",
        f"quadrature vs closed form: {quad:.3g}",
    ])
    _emit(cfg, human, rec)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--eps", type=float, default=None,
                        help="floating comparison tolerance (default: LISTAT_EPS or 1e-9)")
    common.add_argument("--json", action="store_true", help="emit a JSON record")
    common.add_argument("--out", default=None, help="write output to this path")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--family", default=None, help=f"one of {', '.join(FAMILIES)}")
    source.add_argument("--n", type=int, default=None)
    source.add_argument("--input", default=None, help="algebra ingestion record (JSON)")

    parser = argparse.ArgumentParser(prog="listat", description="Left-invariant statistical structures")
    parser.add_argument("--version", action="version", version=f"listat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="structure report for an algebra and cubic form")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cs", parents=[common, source], help="conjugate symmetric cubic forms")
    p.set_defaults(func=cmd_cs)

    p = sub.add_parser("df", parents=[common, source], help="dually flat cubic forms")
    p.add_argument("--grid", default=None, help="comma-separated start values per axis")
    p.add_argument("--newton-iters", type=int, default=DFOptions.newton_iters)
    p.add_argument("--dedupe-tol", type=float, default=DFOptions.dedupe_tol)
    p.set_defaults(func=cmd_df)

    p = sub.add_parser("canon", parents=[common], help="canonical diagonal spectrum")
    p.add_argument("--lambda", dest="values", required=True)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("takano", parents=[common], help="Gaussian family alpha-structure report")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--order", type=int, default=32)
    p.set_defaults(func=cmd_takano)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse would read "--lambda -3,1,2" as two options
    out, i = [], 0
    while i < len(argv):
        if argv[i] in ("--lambda", "--alpha", "--grid") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        eps = resolve_eps(args.eps)
        cfg = RunConfig(args.command, args.mode == "exact", eps, args.out, args.json)
        return args.func(args, cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UnsupportedError, InexactError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
