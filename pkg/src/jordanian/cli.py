"""``jordanian`` command line: build objects, run checks, export JSON/LaTeX.

Exit codes: 0 when every residual is zero, 1 when one is not (the first
witness is printed), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import constructors as C
from . import dynamical as D
from . import verifiers as V
from .errors import ContextMismatch, DimensionMismatch, GrammarError, PolePersists
from .exact import RatFunc, free_names
from .funcfield import FieldOp, restrict
from .tensor import TensorMat

OBJECTS = (
    "rp", "rp-formula", "classical-rp", "bcg", "cg", "q-modified",
    "qp", "boundary", "dyn-r", "irf-A",
)
MATRIX_OBJECTS = OBJECTS + ("identity-plus-junk",)
OPERATOR_OBJECTS = ("rp", "cg", "qp", "boundary")
CHECKS = (
    "qybe", "mqybe", "cybe", "hecke", "unitary", "nilpotent", "twist-lemma",
    "semiclassical", "similarity", "boundary-limit", "dbe", "irf",
    "formula-vs-operator", "bcg-vs-rp",
)
DEFAULT_OBJECT = {
    "qybe": "rp", "mqybe": "qp", "cybe": "classical-rp", "hecke": "cg",
    "unitary": "qp", "semiclassical": "rp", "dbe": "dyn-r",
}


class UsageError(Exception):
    pass


@dataclass
class Manifest:
    command: str
    n: int
    params: dict = field(default_factory=dict)
    sign: int = 1
    format: str = "json"

    @classmethod
    def from_args(cls, args) -> "Manifest":
        params = {k: getattr(args, k) for k in ("h", "p", "q", "kappa") if getattr(args, k, None) is not None}
        return cls(
            command=args.command,
            n=args.n,
            params=params,
            sign=getattr(args, "sign", 1),
            format=getattr(args, "format", "json"),
        )


# argument helpers -----------------------------------------------------------


def _param(text: str) -> str:
    """Validate an exact parameter expression; keep it as text."""
    try:
        names = free_names(text)
        RatFunc(tuple(names), text)
    except (GrammarError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad parameter {text!r}: {exc}") from None
    return text


def _sign(text: str) -> int:
    if text in ("+1", "1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError("sign must be +1 or -1")


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("n must be >= 1")
    return n


def _assignment(text: str) -> tuple[str, Fraction]:
    var, sep, value = text.partition("=")
    if not sep or not var.strip():
        raise argparse.ArgumentTypeError(f"expected var=value, got {text!r}")
    try:
        v = RatFunc((), value.strip())
    except (GrammarError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad value in {text!r}: {exc}") from None
    if not v.is_constant():
        raise argparse.ArgumentTypeError(f"--at needs a rational value, got {value!r}")
    return var.strip(), v.constant_value()


def _pv(args, name: str) -> str:
    value = getattr(args, name, None)
    return name if value is None else value


# objects --------------------------------------------------------------------


def build_operator(name: str, args) -> FieldOp:
    n = args.n
    if name == "rp":
        return C.make_rp_op(n, _pv(args, "h"))
    if name == "cg":
        return C.make_cg_op(_pv(args, "p"), _pv(args, "q"))
    if name == "qp":
        return C.make_qp_op(n, _pv(args, "p"))
    if name == "boundary":
        return C.make_boundary_op(n, _pv(args, "p"), _pv(args, "h"))
    raise UsageError(f"{name!r} has no operator form; choose from {', '.join(OPERATOR_OBJECTS)}")


def build_matrix(name: str, args) -> TensorMat:
    n = args.n
    if name in OPERATOR_OBJECTS:
        return restrict(build_operator(name, args), n)
    if name == "rp-formula":
        return C.rp_matrix_formula(n, _pv(args, "h"))
    if name == "classical-rp":
        return C.classical_rp(n)
    if name == "bcg":
        return C.b_cg(n)
    if name == "q-modified":
        return C.hecke_to_mqybe(restrict(C.make_cg_op(_pv(args, "p"), _pv(args, "q")), n), _pv(args, "q"))[0]
    if name == "dyn-r":
        return D.make_dyn_r(n)
    if name == "irf-A":
        return D.make_A(n)
    if name == "identity-plus-junk":
        if n < 2:
            raise UsageError("identity-plus-junk needs n >= 2")
        return C.identity_plus_junk(n)
    raise UsageError(f"unknown object {name!r}")


def _apply_limits(m: TensorMat, assignments) -> TensorMat:
    for var, value in assignments or ():
        if var not in m.ring:
            raise UsageError(f"{var!r} is not a parameter of this object (ring {list(m.ring)})")
        try:
            m = m.limit(var, value)
        except PolePersists as exc:
            raise UsageError(str(exc)) from None
        m = m.recast(tuple(v for v in m.ring if v != var))
    return m


def cmd_build(args) -> int:
    if args.operator:
        op = build_operator(args.object, args)
        if args.format != "json" or args.at:
            raise UsageError("--operator supports JSON output only, without --at")
        text = json.dumps({"ctx": list(op.ctx), "nz": op.nz, "terms": op.to_json()}, indent=2) + "\n"
    else:
        m = _apply_limits(build_matrix(args.object, args), args.at)
        text = m.to_json() if args.format == "json" else m.to_latex()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# checks ---------------------------------------------------------------------


def _object(args, check: str) -> str:
    name = args.object or DEFAULT_OBJECT.get(check)
    if name is None:
        raise UsageError(f"check {check!r} takes no --object")
    if name not in MATRIX_OBJECTS:
        raise UsageError(f"unknown object {name!r}")
    return name


def _two_leg(args, check: str) -> TensorMat:
    m = build_matrix(_object(args, check), args)
    if m.legs != 2:
        raise UsageError(f"{check} needs a two-leg object")
    return _apply_limits(m, args.at)


def _lambda(args, name: str, m: TensorMat) -> RatFunc:
    if args.lam is not None:
        if not set(free_names(args.lam)) <= set(m.ring):
            raise UsageError(f"--lam {args.lam!r} uses variables outside {list(m.ring)}")
        return RatFunc(m.ring, args.lam)
    if name in ("qp", "boundary"):
        return C.mqybe_lambda(args.n, _pv(args, "p"), m.ring)
    if name == "q-modified":
        return C.hecke_to_mqybe(m, _pv(args, "q"))[1]
    raise UsageError(f"no default lambda for {name!r}; pass --lam")


def _semiclassical(args) -> dict:
    m = _two_leg(args, "semiclassical")
    var = args.var
    try:
        order0, order1 = V.semiclassical(m, var)
    except Exception as exc:
        raise UsageError(str(exc)) from None
    ring = order0.ring
    out = {
        "order0 = I": V.residual(order0 - TensorMat.identity(m.n, 2, ring)),
        "order1 = classical r": V.residual(order1 - C.classical_rp(m.n).recast(ring)),
        "CYBE(order1)": V.cybe_residual(order1),
    }
    return out


def _bcg_vs_rp(n: int) -> tuple[dict, dict]:
    image = C.phi_map(C.b_cg(n))
    r = C.classical_rp(n)
    c = V.projective_ratio(image, r)
    # no usable scalar: report the plain difference as the witness
    linkage = V.residual(image - (r if c is None or c.is_zero() else r.scale(c)))
    res = {
        "(phi x phi)(b_CG) = c r_p": linkage,
        "CYBE(b_CG)": V.cybe_residual(C.b_cg(n)),
    }
    return res, {"scalar": None if c is None else str(c)}


def run_check(args) -> tuple[dict, dict]:
    check, n = args.name, args.n
    extra: dict = {}
    if check == "qybe":
        res = {"QYBE": V.qybe_residual(_two_leg(args, check))}
    elif check == "mqybe":
        name = _object(args, check)
        m = _two_leg(args, check)
        lam = _lambda(args, name, m)
        extra["lambda"] = str(lam)
        res = {"MQYBE": V.mqybe_residual(m, lam, args.convention)}
    elif check == "cybe":
        m = _two_leg(args, check)
        res = {"CYBE": V.cybe_residual(m, RatFunc(m.ring, args.mu) if args.mu else 0)}
    elif check == "hecke":
        res = {"Hecke": V.hecke_residual(_two_leg(args, check), _pv(args, "q"))}
    elif check == "unitary":
        res = {"unitarity": V.unitarity_residual(_two_leg(args, check))}
    elif check == "nilpotent":
        res = {
            "r^2 = 0": V.nilpotency_residual(n),
            "exp(kappa r) = I + kappa r": V.exponential_residual(n, _pv(args, "kappa")),
        }
    elif check == "twist-lemma":
        res = V.twist_lemma(_pv(args, "p"), _pv(args, "kappa"), n)
    elif check == "semiclassical":
        res = _semiclassical(args)
    elif check == "similarity":
        res = {"similarity": V.similarity_check(n, _pv(args, "p"), _pv(args, "h"))}
    elif check == "boundary-limit":
        res = {"boundary limit": V.boundary_limit(n, _pv(args, "h"))}
    elif check == "dbe":
        res = {"DBE": D.dbe_residual(_dyn_object(args), args.sign)}
    elif check == "irf":
        res = {
            "vertex-IRF": D.vertex_irf_residual(n, args.sign, args.reading),
            "R A1 A2 = A1 A2 R~": D.conjugation_residual(n, args.sign, args.reading),
        }
    elif check == "formula-vs-operator":
        h = _pv(args, "h")
        res = {"formula - operator": V.residual(C.rp_matrix_formula(n, h) - restrict(C.make_rp_op(n, h), n))}
    elif check == "bcg-vs-rp":
        res, extra = _bcg_vs_rp(n)
    else:
        raise UsageError(f"unknown check {check!r}")
    return res, extra


def _dyn_object(args) -> TensorMat:
    m = _two_leg(args, "dbe")
    try:
        return m.recast(D.nu_ring(m.n))
    except ContextMismatch:
        raise UsageError("dbe needs an object over the nu variables") from None


def _report(args, results: dict, extra: dict) -> int:
    ok = all(r.is_zero for r in results.values())
    if args.json:
        report = {
            "manifest": asdict(Manifest.from_args(args)),
            "check": args.name,
            "is_zero": ok,
            "residuals": {k: r.to_dict() for k, r in results.items()},
        }
        if getattr(args, "object", None) or args.name in DEFAULT_OBJECT:
            report["object"] = args.object or DEFAULT_OBJECT.get(args.name)
        report.update(extra)
        print(json.dumps(report, indent=2))
    else:
        head = f"{args.name} n={args.n}"
        if args.name in DEFAULT_OBJECT:
            head += f" object={args.object or DEFAULT_OBJECT[args.name]}"
        for key, value in extra.items():
            head += f" {key}={value}"
        print(head)
        for label, r in results.items():
            print(f"  {label}: {r.describe()}")
        print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_check(args) -> int:
    results, extra = run_check(args)
    return _report(args, results, extra)


def cmd_dyn(args) -> int:
    args.name = args.which
    args.object = None
    args.at = None
    results, extra = run_check(args)
    return _report(args, results, extra)


# parser ---------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, n_default: int = 2) -> None:
    p.add_argument("--n", type=_positive, default=n_default, help="dimension of V (default %(default)s)")
    for name in ("h", "p", "q", "kappa"):
        p.add_argument(f"--{name}", type=_param, default=None,
                       help=f"exact value or expression for {name} (default: symbolic {name})")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jordanian", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build and serialize an object")
    b.add_argument("object", choices=OBJECTS + ("identity-plus-junk",))
    _common(b)
    b.add_argument("--at", type=_assignment, action="append", metavar="VAR=VALUE",
                   help="specialize a parameter (limit); repeatable")
    b.add_argument("--format", choices=("json", "latex"), default="json")
    b.add_argument("--out", metavar="FILE")
    b.add_argument("--operator", action="store_true",
                   help="emit the function-field operator instead of its matrix")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run a verifier")
    c.add_argument("name", choices=CHECKS)
    _common(c)
    c.add_argument("--object", choices=MATRIX_OBJECTS)
    c.add_argument("--at", type=_assignment, action="append", metavar="VAR=VALUE")
    c.add_argument("--sign", type=_sign, default=1, help="weight-shift sign for dbe/irf")
    c.add_argument("--reading", choices=D.READINGS, default="proof",
                   help="index reading of R^{ms}_{cd} in the irf identity")
    c.add_argument("--convention", choices=("slot", "literal"), default="slot",
                   help="leg-permutation convention for mqybe")
    c.add_argument("--lam", type=_param, help="override lambda for mqybe")
    c.add_argument("--mu", type=_param, help="right-hand side coefficient for cybe")
    c.add_argument("--var", default="h", help="expansion variable for semiclassical")
    c.add_argument("--json", action="store_true", help="machine-readable report")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("dyn", help="dynamical checks")
    d.add_argument("which", choices=("dbe", "irf"))
    _common(d)
    d.add_argument("--sign", type=_sign, default=1)
    d.add_argument("--reading", choices=D.READINGS, default="proof")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_dyn)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GrammarError, ContextMismatch, DimensionMismatch) as exc:
        # parameters that do not fit the chosen object are usage errors too
        print(f"jordanian: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
