"""Command-line front door.

Thin adapters only: every verb loads files, calls one library operation and
serializes the result.  Exit codes: 0 all checks passed, 1 a check failed,
2 usage or input error, 3 size-guard or budget rejection.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import __version__, algebra, construct, forms, young
from .algebra import AlgebraFileError, Metric, NaryAlgebra
from .tensor import ShapeError, SizeGuardError, parse_rational

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_SIZE_GUARD = 3


class UsageError(ValueError):
    pass


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _parse_metric(spec: str | None, d: int, fallback: Metric | None) -> Metric | None:
    if spec is None:
        return fallback
    if spec == "euclid":
        return Metric.euclidean(d)
    if spec.startswith("lorentz:"):
        try:
            p, q = (int(x) for x in spec[len("lorentz:"):].split(","))
        except ValueError as exc:
            raise UsageError(f"bad lorentz spec {spec!r}") from exc
        if p + q != d:
            raise UsageError(f"lorentz:{p},{q} does not match dimension {d}")
        return Metric.lorentzian(p, q)
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read metric {spec!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"metric file {spec!r}: {exc}") from exc
    return algebra._metric_from_json(obj, d)


def _parse_signature(text: str):
    out = []
    for token in text.split(","):
        token = token.strip()
        if token in ("+", "+1", "1"):
            out.append(1)
        elif token in ("-", "-1"):
            out.append(-1)
        else:
            raise UsageError(f"bad signature entry {token!r}")
    return out


# ---------------------------------------------------------------------------
# suites


def _suite_checks(L: NaryAlgebra, names, metric: Metric | None):
    checks = []
    for name in names:
        if name == "filippov":
            checks.append(algebra.check_filippov(L))
        elif name == "skew":
            checks.append(algebra.check_skew(L, range(1, L.n + 1)))
        elif name == "metricity":
            checks.append(algebra.check_metricity(L, metric))
        elif name == "fullanti":
            checks.append(algebra.check_full_antisym_lowered(L, metric))
        elif name == "symmetry":
            checks.append(algebra.check_symmetry_property(L, metric))
        elif name == "genmetric":
            checks.append(algebra.check_generalized_metric_l(L, metric))
        elif name == "cyclic":
            checks.append(algebra.check_cyclic(L))
        elif name == "triple":
            checks.append(algebra.is_lie_triple(L))
        elif name == "nple":
            checks.append(algebra.is_lie_nple(L))
        elif name == "lple":
            checks.append(young.is_lie_lple(L))
        elif name == "nondegenerate":
            checks.append(forms.nondegenerate(forms.kasymov(L)))
        else:
            raise UsageError(f"unknown check {name!r}")
    return checks


def _expand_all(L: NaryAlgebra) -> list:
    names = ["filippov", "skew", "metricity", "fullanti", "cyclic", "nple", "nondegenerate"]
    if L.n >= 3:
        names.append("symmetry")
    if L.n == 3:
        names.append("triple")
    if L.n % 2 == 1 and L.n >= 3:
        names.append("genmetric")
        if L.n <= 5:  # l=7 isotypic sweep is beyond the default budget
            names.append("lple")
    return names


def _report(inputs: dict, checks: list, timings: dict | None) -> dict:
    out = {
        "tool": "naryalg",
        "version": __version__,
        "inputs": {path: _digest(path) for path in inputs},
        "checks": [c.as_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }
    if timings is not None:
        out["timings"] = timings
    return out


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=1) + "\n"
    lines = [
        f"# naryalg {report['version']} check report",
        "",
        "| check | result | witness | residual |",
        "|-------|--------|---------|----------|",
    ]
    for c in report["checks"]:
        witness = " ".join(str(i) for i in c.get("witness", [])) or "-"
        lines.append(
            f"| {c['name']} | {'pass' if c['passed'] else 'FAIL'} "
            f"| {witness} | {c.get('residual', '-')} |"
        )
    lines.append("")
    lines.append(f"overall: {'pass' if report['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# verbs


def _cmd_gen(args) -> int:
    family = args.family
    if family == "A":
        if args.n is None:
            raise UsageError("gen --family A needs --n")
        L = algebra.simple_filippov(args.n, [1] * (args.n + 1))
    elif family == "Apq":
        if args.signature is None:
            raise UsageError("gen --family Apq needs --signature")
        sig = _parse_signature(args.signature)
        L = algebra.simple_filippov(len(sig) - 1, sig)
    elif family == "cs-so4":
        L = construct.builtin("cs-so4")
    elif family == "a4sum":
        L = construct.builtin("a4-sum-a4")
    elif family == "seven-leibniz":
        L = construct.builtin("seven-leibniz")
    elif family == "zero":
        if args.n is None or args.d is None:
            raise UsageError("gen --family zero needs --n and --d")
        L = algebra.zero_algebra(args.d, args.n)
    else:
        raise UsageError(f"unknown family {family!r}")
    algebra.save(L, args.output)
    return EXIT_PASS


def _cmd_check(args) -> int:
    L = algebra.load(args.file)
    metric = _parse_metric(args.metric, L.d, L.metric)
    names = []
    for name in args.suite.split(","):
        name = name.strip()
        if name == "all":
            names.extend(_expand_all(L))
        elif name:
            names.append(name)
    timings: dict | None = {} if args.timings else None
    checks = []
    for name in names:
        t0 = time.perf_counter()
        checks.extend(_suite_checks(L, [name], metric))
        if timings is not None:
            timings[name] = round(time.perf_counter() - t0, 6)
    report = _report([args.file], checks, timings)
    _emit(_render(report, args.format), args.output)
    return EXIT_PASS if report["passed"] else EXIT_CHECK_FAILED


def _cmd_kasymov(args) -> int:
    L = algebra.load(args.file)
    forms.save(forms.kasymov(L), args.output, name=f"kasymov({L.name})")
    return EXIT_PASS


def _cmd_mixed(args) -> int:
    l1 = algebra.load(args.file1)
    l2 = algebra.load(args.file2)
    forms.save(
        forms.mixed_trace(l1, l2), args.output,
        name=f"mixed({l1.name},{l2.name})",
    )
    return EXIT_PASS


def _cmd_compose(args) -> int:
    l1 = algebra.load(args.l1)
    l2 = algebra.load(args.l2)
    metric = _parse_metric(args.metric, l1.d, l2.metric or l1.metric)
    if metric is None:
        raise UsageError("compose needs --metric (no metric in input files)")
    prefactor = Fraction(parse_rational(args.prefactor))
    inp = construct.ConstructionInput(l1, l2, metric, prefactor)
    try:
        out = construct.associated_leibniz(inp, force=args.force)
    except construct.ConstructionError as exc:
        report = _report([args.l1, args.l2], [exc.report], None)
        sys.stdout.write(_render(report, "json"))
        return EXIT_CHECK_FAILED
    algebra.save(out, args.output)
    return EXIT_PASS


def _cmd_liealg(args) -> int:
    from . import adjoint

    L = algebra.load(args.file)
    closure = adjoint.lie_closure(L)
    out = {
        "name": L.name,
        "closure_dim": closure.dim,
        "from_generators": closure.from_generators,
    }
    if args.kernel:
        labels, basis = adjoint.ad_kernel(L)
        out["kernel_dim"] = len(basis)
    if args.centre:
        basis = adjoint.centre(L)
        out["centre_dim"] = len(basis)
        out["centre_basis"] = [[str(Fraction(x)) for x in vec] for vec in basis]
    sys.stdout.write(json.dumps(out, indent=1) + "\n")
    return EXIT_PASS


def _cmd_young(args) -> int:
    if args.young_cmd == "dim":
        shape = young.YoungShape(args.l, args.r)
        out = {"l": args.l, "r": args.r, "d": args.d,
               "gl_dim": young.gl_dimension(shape, args.d)}
    else:
        L = algebra.load(args.file)
        components = young.classify_bracket(L, force=args.force)
        out = {
            "l": L.n,
            "components": [
                {"r": r, "nonzero": nonzero, "gl_dim": dim}
                for r, nonzero, dim in components
            ],
        }
    sys.stdout.write(json.dumps(out, indent=1) + "\n")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="naryalg",
        description="exact construction and verification of n-Lie/n-Leibniz systems",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    gen = sub.add_parser("gen", help="write a named fixture algebra")
    gen.add_argument("--family", required=True,
                     choices=["A", "Apq", "cs-so4", "a4sum", "seven-leibniz", "zero"])
    gen.add_argument("--n", type=int, help="bracket arity (families A, zero)")
    gen.add_argument("--d", type=int, help="dimension (family zero)")
    gen.add_argument("--signature", help="comma list of +1/-1 (family Apq)")
    gen.add_argument("-o", "--output", required=True)

    check = sub.add_parser("check", help="run a property suite on an algebra file")
    check.add_argument("file")
    check.add_argument("--suite", required=True,
                       help="comma list: filippov,skew,metricity,fullanti,symmetry,"
                            "genmetric,cyclic,triple,nple,lple,nondegenerate,all")
    check.add_argument("--metric", help="euclid | lorentz:p,q | metric JSON file")
    check.add_argument("--format", choices=["json", "md"], default="json")
    check.add_argument("--timings", action="store_true",
                       help="include wall-clock timings (reports stop being byte-identical)")
    check.add_argument("-o", "--output")

    kas = sub.add_parser("kasymov", help="write the Kasymov trace form")
    kas.add_argument("file")
    kas.add_argument("-o", "--output", required=True)

    mixed = sub.add_parser("mixed", help="write the mixed trace form of two algebras")
    mixed.add_argument("file1")
    mixed.add_argument("file2")
    mixed.add_argument("-o", "--output", required=True)

    comp = sub.add_parser("compose", help="build the associated (n+m-3)-Leibniz algebra")
    comp.add_argument("--l1", required=True)
    comp.add_argument("--l2", required=True)
    comp.add_argument("--metric", help="euclid | lorentz:p,q | metric JSON file")
    comp.add_argument("--prefactor", default="1", help="rational p/q scale (default 1)")
    comp.add_argument("--force", action="store_true",
                      help="skip precondition checks; output marked unverified")
    comp.add_argument("-o", "--output", required=True)

    lie = sub.add_parser("liealg", help="associated Lie algebra dimensions")
    lie.add_argument("file")
    lie.add_argument("--kernel", action="store_true")
    lie.add_argument("--centre", action="store_true")

    yng = sub.add_parser("young", help="bracket symmetry classification")
    ysub = yng.add_subparsers(dest="young_cmd", required=True)
    ycls = ysub.add_parser("classify")
    ycls.add_argument("file")
    ycls.add_argument("--force", action="store_true",
                      help="override the permutation-sum budget")
    ydim = ysub.add_parser("dim")
    ydim.add_argument("--l", type=int, required=True)
    ydim.add_argument("--r", type=int, required=True)
    ydim.add_argument("--d", type=int, required=True)

    return parser


_HANDLERS = {
    "gen": _cmd_gen,
    "check": _cmd_check,
    "kasymov": _cmd_kasymov,
    "mixed": _cmd_mixed,
    "compose": _cmd_compose,
    "liealg": _cmd_liealg,
    "young": _cmd_young,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    try:
        return _HANDLERS[args.verb](args)
    except SizeGuardError as exc:
        print(f"naryalg: size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE_GUARD
    except (UsageError, AlgebraFileError, construct.UnknownFixtureError,
            ShapeError, OSError, ValueError) as exc:
        print(f"naryalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
