"""Command-line interface: ``pfaffian5 <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
With ``--json`` every command prints the model document (when there is
one) with an added ``"report"`` object.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .curvecheck import (
    MAX_ENUMERATION_Q,
    ProjPoint,
    enumerate_points,
    find_lines,
    iii_conditions,
)
from .dvrlab import (
    WITNESS_EXPONENTS,
    PreconditionError,
    degenerate_model,
    nonminimality_witness,
    regularity_check,
    squarefree_status,
    theorem1_search,
    valuation_report,
)
from .exactalg import GF, QQ, ExactMatrix, FiniteField, factor_prime_power, is_prime, valuation
from .invariants import SingularModelError, invariants
from .pfmodel import (
    ModelFormatError,
    PfaffianModel,
    Transformation,
    act,
    load_model,
    model_to_dict,
    random_model,
    reduce_mod,
    serialize_model,
)
from .suites import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad arguments or unreadable input; exits with status 2."""


# -- output helpers --------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return "inf" if x == float("inf") else x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _table(rows) -> str:
    rows = [(str(k), str(v)) for k, v in rows]
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def _emit(args, report: dict, model: PfaffianModel | None = None) -> None:
    if args.json:
        doc = model_to_dict(model) if model is not None else {}
        doc["report"] = _jsonable(report)
        print(json.dumps(doc, indent=2))
    else:
        print(_table((k, _jsonable(v)) for k, v in report.items()))


def _load(path) -> PfaffianModel:
    try:
        return load_model(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ModelFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_matrix(path) -> ExactMatrix:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed matrix: {exc}") from None
    if isinstance(doc, dict):
        doc = doc.get("matrix")
    if not isinstance(doc, list) or len(doc) != 5 or any(not isinstance(r, list) or len(r) != 5 for r in doc):
        raise UsageError(f"{path}: expected a 5x5 array")
    try:
        rows = [[_exact(x) for x in r] for r in doc]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    return ExactMatrix(QQ, rows)


def _exact(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ValueError(f"entry {x!r} is not exact")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"bad entry {x!r}")


def _prime(p) -> int:
    if p is None:
        raise UsageError("a prime is required (--prime)")
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    return p


def _field_model(model: PfaffianModel, q) -> PfaffianModel:
    """The model over GF(q): reduce a ZZ/QQ model, or check an Fq model matches."""
    if isinstance(model.ring, FiniteField):
        if q is not None and q != model.ring.q:
            raise UsageError(f"model is over GF({model.ring.q}), not GF({q})")
        return model
    if q is None:
        raise UsageError("a field size is required (--field-size) for a model over ZZ or QQ")
    try:
        factor_prime_power(q)
        GF(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        return reduce_mod(model, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _prime_factors(n: int, limit: int = 10**6) -> list[int]:
    n = abs(n)
    out, d = [], 2
    while d * d <= n and d <= limit:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1 and (d * d > n or is_prime(n)):
        out.append(n)
    return out


def _parse_point(text: str, p: int) -> ProjPoint:
    try:
        coords = tuple(int(c) % p for c in text.split(","))
    except ValueError:
        raise UsageError(f"bad point {text!r}") from None
    if len(coords) != 5 or not any(coords):
        raise UsageError("a point needs 5 coordinates, not all zero")
    return ProjPoint.normalized(GF(p), coords)


def _write_or_print(args, model: PfaffianModel, report: dict) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(serialize_model(model))
        report = dict(report, output=args.output)
        _emit(args, report, model if args.json else None)
    else:
        if args.json:
            _emit(args, report, model)
        else:
            print(_table((k, _jsonable(v)) for k, v in report.items()))
            print(serialize_model(model), end="")


# -- commands ----------------------------------------------------------------------

def cmd_invariants(args) -> int:
    model = _load(args.model)
    if isinstance(model.ring, FiniteField):
        raise UsageError("invariants are defined for models over ZZ or QQ")
    inv = invariants(model)
    assert inv.c4**3 - inv.c6**2 == 1728 * inv.delta
    report = {"c4": inv.c4, "c6": inv.c6, "delta": inv.delta, "nonsingular": inv.delta != 0}
    if model.ring.kind == "ZZ" and inv.delta:
        report["delta_squarefree"] = squarefree_status(inv.delta)
    _emit(args, report, model)
    return EXIT_OK


def cmd_report(args) -> int:
    model = _load(args.model)
    p = _prime(args.prime)
    if p < 5:
        raise UsageError("reports need p >= 5")
    try:
        rep = valuation_report(model, p, sweep=False if args.no_sweep else None)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(args, rep.as_dict(), model)
    return EXIT_OK if rep.regular_points_ok is not False else EXIT_FAIL


def cmd_transform(args) -> int:
    model = _load(args.model)
    A, B = _load_matrix(args.A), _load_matrix(args.B)
    try:
        g = Transformation(A, B)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    image = act(g, model)
    d = Fraction(g.det())
    report = {"det": d}
    if model.ring.kind in ("ZZ", "QQ"):
        primes = [args.prime] if args.prime else sorted(
            set(_prime_factors(d.numerator)) | set(_prime_factors(d.denominator)))
        for p in primes:
            if model.is_integral(p) and image.is_integral(p):
                report[f"delta_valuation_shift_{p}"] = 12 * int(valuation(d, p))
    _write_or_print(args, image, report)
    return EXIT_OK


def cmd_reduce(args) -> int:
    model = _load(args.model)
    if isinstance(model.ring, FiniteField):
        raise UsageError("model is already over a finite field")
    phi = _field_model(model, args.field_size)
    _write_or_print(args, phi, {"field": phi.ring.kind})
    return EXIT_OK


def cmd_points(args) -> int:
    phi = _field_model(_load(args.model), args.field_size)
    if phi.ring.q > MAX_ENUMERATION_Q:
        raise UsageError(f"enumeration is limited to q <= {MAX_ENUMERATION_Q}")
    rep = iii_conditions(phi, with_points=True)
    report = {"field": phi.ring.kind, "point_count": rep.point_count,
              "singular_points": [[str(pt), dim] for pt, dim in rep.singular_points]}
    if args.list:
        report["points"] = [str(pt) for pt in enumerate_points(phi)]
    _emit(args, report, phi)
    return EXIT_OK


def cmd_lines(args) -> int:
    phi = _field_model(_load(args.model), args.field_size)
    if phi.ring.q > 3:
        raise UsageError("line search needs q in {2, 3}")
    rep = iii_conditions(phi, with_points=False)
    lines = find_lines(phi)
    report = {"field": phi.ring.kind, "span_ok": rep.span_ok,
              "pfaffians_independent": rep.pfaffians_independent, "plane_free": rep.plane_free,
              "line_count": len(lines), "lines": [[list(v) for v in line] for line in lines]}
    _emit(args, report, phi)
    return EXIT_OK


def cmd_regular(args) -> int:
    model = _load(args.model)
    p = _prime(args.prime)
    phi = _field_model(model, p)
    points = [_parse_point(args.point, p)] if args.point else enumerate_points(phi)
    failures = []
    try:
        for pt in points:
            res = regularity_check(model, p, pt)
            if not res.passed:
                failures.append([str(pt), list(res.witness)])
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = {"p": p, "points_checked": len(points), "regular": not failures, "nonregular": failures}
    _emit(args, report, model)
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_witness(args) -> int:
    model = _load(args.model)
    p = _prime(args.prime)
    if args.make_degenerate:
        model = degenerate_model(args.case, model, p)
    try:
        w = nonminimality_witness(args.case, model, p)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = {"case": args.case, "det_valuation": w.det_valuation, "level_drop": w.level_drop,
              "integral": w.model.is_integral(p)}
    before, after = invariants(model).delta, invariants(w.model).delta
    if before and after:
        report["delta_valuation_before"] = int(valuation(before, p))
        report["delta_valuation_after"] = int(valuation(after, p))
    _write_or_print(args, w.model, report)
    return EXIT_OK


def cmd_thm1_search(args) -> int:
    model = _load(args.model)
    p = _prime(args.prime)
    if not 0 <= args.bound <= 6:
        raise UsageError("--bound must be between 0 and 6")
    try:
        found = theorem1_search(model, p, args.bound)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    constant = all(len(set(ev.s)) == 1 for ev in found)
    report = {"p": p, "bound": args.bound, "survivors": [[list(ev.r), list(ev.s)] for ev in found],
              "all_constant_s": constant}
    _emit(args, report, model)
    return EXIT_OK if constant else EXIT_FAIL


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(n, args.seed, args.trials) for n in names]
    if args.json:
        print(json.dumps({"seed": args.seed, "passed": all(r.passed for r in results),
                          "suites": [r.as_dict() for r in results]}, indent=2))
    else:
        for r in results:
            print(f"{r.name:<20} {'PASS' if r.passed else 'FAIL'}  trials={r.trials}  failures={len(r.failures)}")
            for f in r.failures[:5]:
                print(f"    {f}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_gen(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be positive")
    if args.bound < 0:
        raise UsageError("--bound must be nonnegative")
    outdir = Path(args.output) if args.output else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    emitted, seed = 0, args.seed
    attempts = 0
    while emitted < args.count:
        if attempts >= args.max_attempts:
            print(f"error: no nonsingular model in {attempts} attempts", file=sys.stderr)
            return EXIT_FAIL
        model = random_model(seed, args.bound)
        attempts += 1
        extra = {"seed": seed, "bound": args.bound}
        if args.require_nonsingular:
            inv = invariants(model)
            if inv.delta == 0:
                seed += 1
                continue
            extra["delta"] = inv.delta
        text = serialize_model(model, extra)
        if outdir:
            (outdir / f"model_s{seed}_b{args.bound}.json").write_text(text)
        else:
            print(text, end="")
        emitted += 1
        seed += 1
    return EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="pfaffian5", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, model=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if model:
            sp.add_argument("model", help="model document (JSON)")
        sp.set_defaults(func=fn)
        return sp

    add("invariants", cmd_invariants, "print c4, c6 and Delta")

    sp = add("report", cmd_report, "valuations, level and Kodaira class at a prime p >= 5")
    sp.add_argument("--prime", "-p", type=int, required=True)
    sp.add_argument("--no-sweep", action="store_true", help="skip the regularity sweep")

    sp = add("transform", cmd_transform, "apply [A, B] to a model")
    sp.add_argument("--A", required=True, help="JSON 5x5 matrix file")
    sp.add_argument("--B", required=True, help="JSON 5x5 matrix file")
    sp.add_argument("--prime", "-p", type=int, help="report the Delta-valuation shift at this prime only")
    sp.add_argument("--output", "-o", help="write the transformed model here")

    sp = add("reduce", cmd_reduce, "reduce an integral model into GF(q)")
    sp.add_argument("--field-size", "-q", type=int, required=True)
    sp.add_argument("--output", "-o")

    sp = add("points", cmd_points, "count points of the curve over GF(q)")
    sp.add_argument("--field-size", "-q", type=int)
    sp.add_argument("--list", action="store_true", help="list every point")

    sp = add("lines", cmd_lines, "lines contained in the curve over GF(2) or GF(3)")
    sp.add_argument("--field-size", "-q", type=int)

    sp = add("regular", cmd_regular, "regularity test at points of the reduction mod p")
    sp.add_argument("--prime", "-p", type=int, required=True)
    sp.add_argument("--point", help="comma-separated coordinates; default: every point")

    sp = add("witness", cmd_witness, "apply a non-minimality witness transformation")
    sp.add_argument("--case", choices=sorted(WITNESS_EXPONENTS), required=True)
    sp.add_argument("--prime", "-p", type=int, required=True)
    sp.add_argument("--make-degenerate", action="store_true",
                    help="first scale coefficients by powers of p to fit the case")
    sp.add_argument("--output", "-o")

    sp = add("thm1-search", cmd_thm1_search, "search diagonal transformations preserving v(Delta) <= 1")
    sp.add_argument("--prime", "-p", type=int, required=True)
    sp.add_argument("--bound", type=int, default=3)

    sp = add("verify", cmd_verify, "run a verification suite", model=False)
    sp.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--trials", type=int, help="trial count (suite default if omitted)")

    sp = add("gen", cmd_gen, "generate random integral models", model=False)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--bound", type=int, default=2)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--require-nonsingular", action="store_true")
    sp.add_argument("--max-attempts", type=int, default=1000)
    sp.add_argument("--output", "-o", help="directory for model files (default: stdout)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
