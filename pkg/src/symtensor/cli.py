"""Command line: ``symtensor {make,product,gauge,norms,check,report}``.

Exit codes: 0 success (for ``check``/``report``: every check passed), 1 some
check failed, 2 usage error, 3 the computation itself raised.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .convex.bodies import Ellipsoid, Interval, OracleBody
from .convex.io import FORMAT, body_to_dict, read_body
from .convex.rational import format_rational, parse_rational
from .harness import corpus
from .harness.suites import SUITES, ExperimentSpec, RunReport, jsonable, run
from .norms.tensor_norms import TensorElement, norm_report
from .tensor.products import tensor_product
from .tensor.shape import TensorShape

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _vector(text: str) -> tuple:
    try:
        return tuple(parse_rational(a.strip()) for a in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational vector {text!r}: {exc}") from None


def _matrix(text: str) -> list:
    return [_vector(row) for row in text.split(";")]


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _body_json(body, extra=None) -> dict:
    d = body_to_dict(body)
    prov = {k: v for k, v in body.provenance.items() if k != "recipe"}
    if prov:
        d["provenance"] = jsonable(prov)
    if extra:
        d.update(extra)
    return d


def _load(path: str):
    try:
        return read_body(path)
    except FileNotFoundError:
        raise UsageError(f"no such body file: {path}") from None


# -- verbs ------------------------------------------------------------------


def cmd_make(args) -> int:
    try:
        body = _make_body(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    extra = {"params": {"body": args.body, "d": body.dim, "seed": args.seed}}
    _emit(_body_json(body, extra), args.out)
    return EXIT_OK


def _make_body(args):
    rng = corpus.rng_for(args.seed)
    if args.body == "bp":
        if args.p is None:
            raise UsageError("make bp needs --p (1, 2 or inf)")
        body = corpus.builtin_ball(args.p, args.d)
    elif args.body == "random-v":
        body = corpus.random_vpolytope(rng, args.d, args.gens if args.gens is not None else args.d + 1)
    elif args.body == "random-h":
        body = corpus.random_hpolytope(rng, args.d, args.facets if args.facets is not None else args.d + 1)
    else:
        body = Ellipsoid(None, exact_shape=_matrix(args.shape)) if args.shape else corpus.random_ellipsoid(rng, args.d)
    return body


def cmd_product(args) -> int:
    bodies = [_load(f) for f in args.factors]
    body = tensor_product(args.kind, bodies)
    if isinstance(body, OracleBody) and "recipe" not in body.provenance:
        raise UsageError(f"{args.kind} product of these factors has no file form")
    _emit(_body_json(body), args.out)
    return EXIT_OK


def _value(v):
    if isinstance(v, Interval):
        return [float(v.lo), float(v.hi)]
    return format_rational(v) if not isinstance(v, float) else v


def cmd_gauge(args) -> int:
    body = _load(args.body)
    what = "support" if args.support else "gauge"
    results = []
    for text in args.points:
        x = _vector(text)
        results.append({"point": [format_rational(a) for a in x], what: _value(getattr(body, what)(x))})
    _emit({"format": FORMAT, "type": what, "body": body.kind, "exact": bool(body.exact),
           "results": results}, args.out)
    return EXIT_OK


def _tensor(arg: str, shape) -> TensorElement:
    path = Path(arg)
    if path.suffix == ".json" or path.is_file():
        obj = json.loads(path.read_text())
        data = obj.get("entries", obj.get("data"))
        if data and isinstance(data[0], list):
            return TensorElement.from_matrix([[parse_rational(str(a)) for a in row] for row in data])
        return TensorElement(shape, tuple(parse_rational(str(a)) for a in data))
    if ";" in arg:
        return TensorElement.from_matrix(_matrix(arg))
    return TensorElement(shape, _vector(arg))


def cmd_norms(args) -> int:
    P, Q = _load(args.P), _load(args.Q)
    try:
        u = _tensor(args.u, TensorShape((P.dim, Q.dim)))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad tensor {args.u!r}: {exc}") from None
    if u.shape.factor_dims != (P.dim, Q.dim):
        raise UsageError(f"tensor of shape {u.shape.factor_dims} for factors of dims {(P.dim, Q.dim)}")
    kwargs = {"tol": args.tol} if args.tol is not None else {}
    rep = norm_report(u, P, Q, **kwargs)
    out = {"format": FORMAT, "type": "norm-report", "u": [format_rational(a) for a in u.entries],
           "sandwich_holds": rep.sandwich_holds(), **rep.to_dict()}
    _emit(out, args.out)
    return EXIT_OK


def _parse_dims(text: str | None):
    if not text:
        return None
    try:
        return tuple(tuple(int(a) for a in item.split("x")) for item in text.split(","))
    except ValueError:
        raise UsageError(f"bad --dims {text!r}; use forms like 2x3 or 2,3") from None


def _write_report(rep: RunReport, out: str) -> None:
    stem = out[:-5] if out.endswith(".json") else out
    Path(stem).parent.mkdir(parents=True, exist_ok=True)
    Path(stem + ".json").write_text(rep.to_json())
    Path(stem + ".csv").write_text(rep.to_csv())
    Path(stem + ".timing.json").write_text(json.dumps(rep.timing_dict(), indent=2, sort_keys=True) + "\n")


def _print_summary(rep: RunReport, stream=None) -> None:
    stream = stream or sys.stdout
    s = rep.summary()
    for r in rep.failed:
        print(f"{r.status.upper()} {r.name}", file=stream)
        if r.reproduce:
            print(f"  reproduce: {r.reproduce}", file=stream)
    verdict = "PASS" if rep.passed else "FAIL"
    print(f"{verdict} {rep.suite}: {s['passed']}/{s['total']} passed, {s['failed']} failed, "
          f"{s['errors']} errors", file=stream)


def cmd_check(args) -> int:
    try:
        spec = ExperimentSpec(args.suite, args.seed, args.tol, args.samples, _parse_dims(args.dims),
                              args.m, args.n, args.only)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = run(spec, jobs=args.jobs)
    if args.out:
        _write_report(rep, args.out)
    else:
        sys.stdout.write(rep.to_json())
    _print_summary(rep, sys.stderr if not args.out else sys.stdout)
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_report(args) -> int:
    try:
        rep = RunReport.from_dict(json.loads(Path(args.report).read_text()))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read run report {args.report}: {exc}") from None
    if args.format == "csv":
        text = rep.to_csv()
    elif args.format == "json":
        text = rep.to_json()
    else:
        lines = [f"{r.status:5} {'exact' if r.exact else 'float'} {r.name}" for r in rep.records]
        s = rep.summary()
        lines.append(f"{'PASS' if rep.passed else 'FAIL'} {rep.suite} (seed {rep.seed}): "
                     f"{s['passed']}/{s['total']} passed")
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.passed else EXIT_FAILED


# -- parser -----------------------------------------------------------------


def _global_flags(parser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="seed for every random choice")
    parser.add_argument("--tol", type=float, default=d(None), help="numeric tolerance override")
    parser.add_argument("--out", default=d(None), help="output file (check: report path stem)")
    parser.add_argument("--jobs", type=int, default=d(1), help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symtensor", description="tensor products of symmetric convex bodies")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("make", parents=[common], help="write a body file")
    p.add_argument("body", choices=["bp", "random-v", "random-h", "ellipsoid"])
    p.add_argument("--p", help="1, 2 or inf (for bp)")
    p.add_argument("--d", type=int, default=2, help="dimension")
    p.add_argument("--gens", type=int, help="generator pairs (random-v)")
    p.add_argument("--facets", type=int, help="facet pairs (random-h)")
    p.add_argument("--shape", help='ellipsoid matrix, rows separated by ";", e.g. "1,0;0,4"')
    p.set_defaults(func=cmd_make)

    p = sub.add_parser("product", parents=[common], help="tensor product of body files")
    p.add_argument("kind", help="pi, eps, hilbert2, omega2, pi_inj, eps_proj or dual:<kind>")
    p.add_argument("factors", nargs="+")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("gauge", parents=[common], help="gauge (or support) of a body at points")
    p.add_argument("body")
    p.add_argument("points", nargs="+", help='comma-separated rationals, e.g. "1,1/2"')
    p.add_argument("--support", action="store_true", help="evaluate the support function instead")
    p.set_defaults(func=cmd_gauge)

    p = sub.add_parser("norms", parents=[common], help="eps, pi and omega2 norms of a tensor")
    p.add_argument("u", help='tensor file, or inline "1,0;0,1" (matrix) or flat "1,0,0,1"')
    p.add_argument("P")
    p.add_argument("Q")
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("check", parents=[common], help="run property suites")
    p.add_argument("suite", choices=["all", *SUITES])
    p.add_argument("--dims", help="factor dimensions, e.g. 2x3 or 2,3")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--only", help="run only the named check (or name prefix)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", parents=[common], help="render a saved run report")
    p.add_argument("report")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"symtensor {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"symtensor {args.verb}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
