"""Command-line front end: every module surfaced as a subcommand group.

Output is deterministic byte for byte for identical arguments and input
files: all mappings are emitted in sorted order, fractions as "num/den",
floats via their shortest round-trip representation.  Exit codes are keyed
to the library's error classes (0 ok, 2 usage, >2 per class).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import explicit_formula as ef
from .adeles import Adele, FiniteAdele, adele_multiply, adele_to_divisor, psi_pair
from .covers import (
    CoverSpec,
    TorusPoint,
    cover_for_quadratic,
    cover_from_character,
    fiber_decomposition,
    frobenius,
    ramified_set,
    torus_normalize,
)
from .divisors import (
    ArithmeticDivisor,
    PrimeSet,
    class_normalize,
    classes_equivalent,
    divisor_add,
    divisor_from_text,
    divisor_to_text,
    sections_contains,
    sections_generator,
)
from .errors import PicmonoidError, UsageError
from .frames import (
    Frame,
    dual_torsion,
    frame_tensor,
    root_eval,
    root_table,
    root_tensor_check,
)
from .numtheory import primes_up_to, require_prime
from .picard import (
    PicClass,
    jac_project,
    jac_theta,
    pic_equal,
    pic_product,
    unit_ball_sections,
    value_spectrum_sample,
)


@dataclass
class CommandResult:
    """Uniform result envelope: machine payload plus human rendering."""

    payload: object
    human: List[str]
    diagnostics: List[str] = field(default_factory=list)
    status: str = "ok"

    def emit(self, as_json: bool) -> None:
        if as_json:
            doc = {"status": self.status, "payload": self.payload}
            if self.diagnostics:
                doc["diagnostics"] = self.diagnostics
            print(json.dumps(doc, sort_keys=True, indent=2))
        else:
            for line in self.human:
                print(line)
            for note in self.diagnostics:
                print(note, file=sys.stderr)


# -- argument coercion helpers -------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}") from exc


def _frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _json_arg(text: str, label: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad {label} JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{label} JSON must be an object")
    return data


def _divisor(text: str) -> ArithmeticDivisor:
    text = text.strip()
    if text.startswith("{") and '"' in text:
        return ArithmeticDivisor.from_json(_json_arg(text, "divisor"))
    return divisor_from_text(text)


def _finite_adele(text: str) -> FiniteAdele:
    return FiniteAdele.from_json(_json_arg(text, "adele"))


def _full_adele(text: str) -> Adele:
    return Adele.from_json(_json_arg(text, "adele"))


def _pic(text: str) -> PicClass:
    return PicClass.from_json(_json_arg(text, "class"))


def _frame(text: str) -> Frame:
    return Frame.from_json(_json_arg(text, "frame"))


def _int_list(text: str, label: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad {label} list {text!r}") from exc


def _caps(text: str) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for item in text.split(","):
        p_text, _, k_text = item.partition(":")
        try:
            out[int(p_text)] = int(k_text)
        except ValueError as exc:
            raise UsageError(f"bad cap entry {item!r}") from exc
    return out


def _cover_from_args(args) -> CoverSpec:
    if args.disc is not None:
        return cover_for_quadratic(args.disc)
    if args.modulus is None:
        raise UsageError("provide either --modulus/--kernel or --disc")
    gens = _int_list(args.kernel, "kernel") if args.kernel else [1]
    return cover_from_character(args.modulus, gens)


# -- handlers ------------------------------------------------------------------


def _cmd_divisor_add(args) -> CommandResult:
    total = divisor_add(_divisor(args.d1), _divisor(args.d2))
    return CommandResult(total.to_json(), [divisor_to_text(total)])


def _cmd_divisor_equiv(args) -> CommandResult:
    q = classes_equivalent(_divisor(args.d1), _divisor(args.d2))
    payload = {"equivalent": q is not None,
               "witness": None if q is None else _frac_str(q)}
    human = ["equivalent witness=" + _frac_str(q)] if q is not None else ["not-equivalent"]
    return CommandResult(payload, human)


def _cmd_divisor_normalize(args) -> CommandResult:
    locus, witness = class_normalize(_divisor(args.d))
    payload = {"locus": locus.to_json(), "witness": _frac_str(witness)}
    return CommandResult(payload, [f"locus={locus.to_json()} witness={_frac_str(witness)}"])


def _cmd_divisor_sections(args) -> CommandResult:
    d = _divisor(args.d)
    gen = sections_generator(d)
    payload: Dict[str, object] = {"generator": _frac_str(gen)}
    human = [f"generator={_frac_str(gen)}"]
    if args.x is not None:
        member = sections_contains(d, _fraction(args.x))
        payload["contains"] = member
        human.append(f"contains({args.x})={'yes' if member else 'no'}")
    return CommandResult(payload, human)


def _cmd_adele_mul(args) -> CommandResult:
    a_data = _json_arg(args.a, "adele")
    b_data = _json_arg(args.b, "adele")
    if "inf" in a_data or "inf" in b_data:
        prod = adele_multiply(Adele.from_json(a_data), Adele.from_json(b_data))
    else:
        prod = FiniteAdele.from_json(a_data).multiply(FiniteAdele.from_json(b_data))
    return CommandResult(prod.to_json(), [json.dumps(prod.to_json(), sort_keys=True)])


def _cmd_adele_todivisor(args) -> CommandResult:
    data = _json_arg(args.a, "adele")
    source = Adele.from_json(data) if "inf" in data else FiniteAdele.from_json(data)
    d = adele_to_divisor(source)
    return CommandResult(d.to_json(), [divisor_to_text(d)])


def _cmd_adele_xqclass(args) -> CommandResult:
    from .picard import xq_class

    c = xq_class(_full_adele(args.a))
    return CommandResult(c.to_json(), [json.dumps(c.to_json(), sort_keys=True)])


def _cmd_adele_pair(args) -> CommandResult:
    data = _json_arg(args.a, "adele")
    source = Adele.from_json(data) if "inf" in data else FiniteAdele.from_json(data)
    value = psi_pair(source, _fraction(args.q)).value
    return CommandResult({"pairing": _frac_str(value)}, [f"pairing={_frac_str(value)}"])


def _cmd_pic_product(args) -> CommandResult:
    c = pic_product(_pic(args.c1), _pic(args.c2))
    return CommandResult(c.to_json(), [json.dumps(c.to_json(), sort_keys=True)])


def _cmd_pic_equal(args) -> CommandResult:
    same = pic_equal(_pic(args.c1), _pic(args.c2))
    return CommandResult({"equal": same}, ["equal" if same else "distinct"])


def _cmd_pic_spectrum(args) -> CommandResult:
    sample = value_spectrum_sample(_pic(args.c), _fraction(args.bound), _caps(args.caps))
    elems = sorted(sample.elements)
    shown = elems[: args.limit]
    payload = {
        "size": len(elems),
        "truncated": len(shown) < len(elems),
        "elements": [_frac_str(v) for v in shown],
    }
    human = [f"size={len(elems)}"] + [_frac_str(v) for v in shown]
    if payload["truncated"]:
        human.append(f"... ({len(elems) - len(shown)} more)")
    return CommandResult(payload, human)


def _cmd_pic_unitball(args) -> CommandResult:
    count, elems = unit_ball_sections(_divisor(args.d), _fraction(args.scale))
    payload = {"count": count, "elements": [_frac_str(v) for v in sorted(elems)]}
    return CommandResult(payload, [f"count={count}"] + payload["elements"])


def _cmd_pic_jac(args) -> CommandResult:
    j = jac_project(_pic(args.c))
    return CommandResult(j.to_json(), [json.dumps(j.to_json(), sort_keys=True)])


def _cmd_pic_theta(args) -> CommandResult:
    primes = _int_list(args.primes, "primes")
    for p in primes:
        require_prime(p)
    j = jac_theta(PrimeSet(frozenset(primes)))
    return CommandResult(j.to_json(), [json.dumps(j.to_json(), sort_keys=True)])


def _cmd_frame_tensor(args) -> CommandResult:
    f = frame_tensor(_frame(args.f1), _frame(args.f2))
    return CommandResult(f.to_json(), [json.dumps(f.to_json(), sort_keys=True)])


def _cmd_frame_root(args) -> CommandResult:
    f = _frame(args.f)
    if args.level is not None:
        caps = _caps(args.level)
        if len(caps) != 1:
            raise UsageError("--level takes a single p:k pair")
        (p, k), = caps.items()
        rows = root_table(f, p, k)
        level = p**k
        lines = ["level,x,numerator"]
        lines += [f"{level},{_frac_str(x)},{int(v * level)}" for x, v in rows]
        payload = {"level": level,
                   "rows": [[_frac_str(x), int(v * level)] for x, v in rows]}
        return CommandResult(payload, lines)
    if args.n is None or args.x is None:
        raise UsageError("provide --level p:k for a table, or both --n and --x")
    value = root_eval(f, args.n, _fraction(args.x)).value
    return CommandResult({"value": _frac_str(value)}, [f"root={_frac_str(value)}"])


def _cmd_frame_dualcheck(args) -> CommandResult:
    ok = root_tensor_check(_frame(args.f1), _frame(args.f2), args.n,
                           _fraction(args.x), _fraction(args.y))
    return CommandResult({"holds": ok}, ["holds" if ok else "VIOLATED"])


def _cmd_frame_torsion(args) -> CommandResult:
    desc = dual_torsion(_frame(args.f))
    payload = desc.to_json()
    human = [json.dumps(payload, sort_keys=True)]
    if args.x is not None:
        x = _fraction(args.x)
        orders = {str(p): desc.element_order(x, p)
                  for p in sorted(desc.local_shift)}
        payload = dict(payload)
        payload["orders"] = orders
        human.append("orders " + json.dumps(orders, sort_keys=True))
    return CommandResult(payload, human)


def _cmd_cover_build(args) -> CommandResult:
    cover = _cover_from_args(args)
    return CommandResult(cover.to_json(), [json.dumps(cover.to_json(), sort_keys=True)])


def _cmd_cover_frobenius(args) -> CommandResult:
    cover = _cover_from_args(args)
    rep = frobenius(cover, args.p)
    return CommandResult({"p": args.p, "frobenius": rep}, [f"frobenius({args.p})={rep}"])


def _cmd_cover_split(args) -> CommandResult:
    cover = _cover_from_args(args)
    if args.primes is not None:
        primes = _int_list(args.primes, "primes")
    elif args.pmax is not None:
        primes = [p for p in primes_up_to(args.pmax) if cover.modulus % p != 0]
    else:
        raise UsageError("provide --primes or --pmax")
    rows = [fiber_decomposition(cover, p) for p in primes]
    lines = ["p\tfrobenius\tcomponents\tdegree"]
    lines += [f"{r.prime}\t{r.frobenius}\t{r.components}\t{r.degree}" for r in rows]
    return CommandResult([r.to_json() for r in rows], lines)


def _cmd_cover_ramified(args) -> CommandResult:
    cover = _cover_from_args(args)
    finite, arch = ramified_set(cover)
    payload = {"finite": finite.to_json(), "archimedean": arch}
    return CommandResult(payload, [json.dumps(payload, sort_keys=True)])


def _cmd_cover_torus(args) -> CommandResult:
    if args.unit is not None:
        unit = _finite_adele(args.unit)
    else:
        unit = FiniteAdele(default=_fraction(args.default))
    pt = TorusPoint(args.p, unit, _fraction(args.exp))
    if args.apply:
        pt = pt.apply_relation(args.apply)
    pt = torus_normalize(pt)
    payload = {"p": pt.prime, "unit": pt.unit_part.to_json(),
               "exp": _frac_str(pt.time_exponent)}
    return CommandResult(payload, [json.dumps(payload, sort_keys=True)])


def _cmd_weil_balance(args) -> CommandResult:
    g = ef.test_function_from_spec(args.tf)
    table = ef.load_zero_table(args.zeros)
    n = args.n if args.n is not None else len(table)
    report = ef.weil_balance(g, table, n)
    diagnostics: List[str] = []
    if args.curve_out:
        counts = sorted(set(_int_list(args.counts, "counts"))) if args.counts else sorted(
            {max(1, n // 10), n})
        curve = ef.balance_curve(g, table, counts)
        with open(args.curve_out, "w", encoding="utf-8") as fh:
            fh.write("# zeros residual\n")
            for count, residual in curve:
                fh.write(f"{count} {residual!r}\n")
        diagnostics.append(f"wrote residual curve to {args.curve_out}")
    payload = report.to_json()
    human = [
        f"spectral  = {report.spectral!r}",
        f"geometric = {report.geometric!r}",
        f"residual  = {report.residual!r}",
        f"tailBound = {report.tail_bound!r}",
        f"zerosUsed = {report.zeros_used}",
    ]
    for place in sorted(report.per_place, key=lambda s: (s != "inf", len(s), s)):
        human.append(f"place {place:>4} = {report.per_place[place]!r}")
    return CommandResult(payload, human, diagnostics)


def _cmd_weil_localterm(args) -> CommandResult:
    g = ef.test_function_from_spec(args.tf)
    if args.place == "inf":
        value = ef.local_term_arch(g, args.method)
    else:
        value = ef.local_term_finite(g, int(args.place))
    return CommandResult({"place": args.place, "value": value},
                         [f"W_{args.place} = {value!r}"])


def _cmd_weil_zerosverify(args) -> CommandResult:
    table = ef.load_zero_table(args.zeros)
    n = args.n if args.n is not None else len(table)
    ordinates = table.first(n)
    rows = []
    human = []
    all_ok = True
    for idx, gamma in enumerate(ordinates, start=1):
        ok, mag = ef.verify_zero_ordinate(gamma, args.tol)
        all_ok &= ok
        rows.append({"index": idx, "ordinate": gamma, "zetaAbs": mag, "certified": ok})
        human.append(f"{idx}\t{gamma!r}\t{mag:.3e}\t{'ok' if ok else 'FAIL'}")
    worst = max(row["zetaAbs"] for row in rows)
    human.append(f"checked {n} ordinates, worst |zeta| = {worst:.3e}, "
                 + ("all certified" if all_ok else "CERTIFICATION FAILED"))
    result = CommandResult({"checked": n, "allCertified": all_ok, "worst": worst,
                            "rows": rows}, human)
    if not all_ok:
        result.status = "error"
    return result


def _cmd_weil_semilocal(args) -> CommandResult:
    g = ef.test_function_from_spec(args.tf)
    places: List[object] = []
    for item in args.places.split(","):
        item = item.strip()
        places.append(item if item == "inf" else int(item))
    report = ef.semilocal_rhs(g, float(_fraction(args.scale)), places)
    payload = report.to_json()
    human = [f"divergent = {report.divergent!r}",
             f"finiteTotal = {report.finite_total!r}"]
    for place in sorted(report.finite_terms, key=lambda s: (s != "inf", len(s), s)):
        human.append(f"place {place:>4} = {report.finite_terms[place]!r}")
    return CommandResult(payload, human)


# -- parser wiring --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picmonoid",
        description="exact divisor/adele/Picard calculus and explicit-formula balance")
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(group, name: str, handler: Callable, help_text: str):
        sub = group.add_parser(name, help=help_text)
        sub.add_argument("--json", action="store_true", help="emit a JSON envelope")
        sub.set_defaults(handler=handler)
        return sub

    divisor = parser_group = groups.add_parser("divisor", help="arithmetic divisors")
    divisor_cmds = parser_group.add_subparsers(dest="command", required=True)
    sub = leaf(divisor_cmds, "add", _cmd_divisor_add, "add two divisors")
    sub.add_argument("--d1", required=True)
    sub.add_argument("--d2", required=True)
    sub = leaf(divisor_cmds, "equiv", _cmd_divisor_equiv, "test linear equivalence")
    sub.add_argument("--d1", required=True)
    sub.add_argument("--d2", required=True)
    sub = leaf(divisor_cmds, "normalize", _cmd_divisor_normalize, "class normal form")
    sub.add_argument("--d", required=True)
    sub = leaf(divisor_cmds, "sections", _cmd_divisor_sections,
               "section generator / membership")
    sub.add_argument("--d", required=True)
    sub.add_argument("--x")

    adele = groups.add_parser("adele", help="finite adeles")
    adele_cmds = adele.add_subparsers(dest="command", required=True)
    sub = leaf(adele_cmds, "mul", _cmd_adele_mul, "multiply two adeles")
    sub.add_argument("--a", required=True)
    sub.add_argument("--b", required=True)
    sub = leaf(adele_cmds, "todivisor", _cmd_adele_todivisor, "valuation divisor")
    sub.add_argument("--a", required=True)
    sub = leaf(adele_cmds, "xqclass", _cmd_adele_xqclass, "class of a full adele")
    sub.add_argument("--a", required=True)
    sub = leaf(adele_cmds, "pair", _cmd_adele_pair, "duality pairing value")
    sub.add_argument("--a", required=True)
    sub.add_argument("--q", required=True)

    pic = groups.add_parser("pic", help="Picard / Jacobian monoids")
    pic_cmds = pic.add_subparsers(dest="command", required=True)
    sub = leaf(pic_cmds, "product", _cmd_pic_product, "monoid product")
    sub.add_argument("--c1", required=True)
    sub.add_argument("--c2", required=True)
    sub = leaf(pic_cmds, "equal", _cmd_pic_equal, "class equality")
    sub.add_argument("--c1", required=True)
    sub.add_argument("--c2", required=True)
    sub = leaf(pic_cmds, "spectrum", _cmd_pic_spectrum, "value spectrum sample")
    sub.add_argument("--c", required=True)
    sub.add_argument("--bound", required=True)
    sub.add_argument("--caps", required=True, help="per-prime exponent caps p:k,p:k")
    sub.add_argument("--limit", type=int, default=100)
    sub = leaf(pic_cmds, "unitball", _cmd_pic_unitball, "sections in the unit ball")
    sub.add_argument("--d", required=True)
    sub.add_argument("--scale", required=True)
    sub = leaf(pic_cmds, "jac", _cmd_pic_jac, "project to the Jacobian quotient")
    sub.add_argument("--c", required=True)
    sub = leaf(pic_cmds, "theta", _cmd_pic_theta, "theta class of a prime set")
    sub.add_argument("--primes", required=True)

    frame = groups.add_parser("frame", help="framed divisors and roots")
    frame_cmds = frame.add_subparsers(dest="command", required=True)
    sub = leaf(frame_cmds, "tensor", _cmd_frame_tensor, "tensor two frames")
    sub.add_argument("--f1", required=True)
    sub.add_argument("--f2", required=True)
    sub = leaf(frame_cmds, "root", _cmd_frame_root, "root value or CSV level table")
    sub.add_argument("--f", required=True)
    sub.add_argument("--n", type=int)
    sub.add_argument("--x")
    sub.add_argument("--level", help="p:k for a full level table")
    sub = leaf(frame_cmds, "dualcheck", _cmd_frame_dualcheck,
               "levelwise product law check")
    sub.add_argument("--f1", required=True)
    sub.add_argument("--f2", required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--x", required=True)
    sub.add_argument("--y", required=True)
    sub = leaf(frame_cmds, "torsion", _cmd_frame_torsion, "dual torsion descriptor")
    sub.add_argument("--f", required=True)
    sub.add_argument("--x")

    cover = groups.add_parser("cover", help="abelian covers")
    cover_cmds = cover.add_subparsers(dest="command", required=True)

    def cover_leaf(name, handler, help_text):
        sub = leaf(cover_cmds, name, handler, help_text)
        sub.add_argument("--modulus", type=int)
        sub.add_argument("--kernel", help="comma-separated kernel generators")
        sub.add_argument("--disc", type=int, help="quadratic cover from a squarefree d")
        return sub

    cover_leaf("build", _cmd_cover_build, "deck group and cosets")
    sub = cover_leaf("frobenius", _cmd_cover_frobenius, "Frobenius coset at p")
    sub.add_argument("--p", type=int, required=True)
    sub = cover_leaf("split", _cmd_cover_split, "TSV splitting table")
    sub.add_argument("--primes")
    sub.add_argument("--pmax", type=int)
    cover_leaf("ramified", _cmd_cover_ramified, "ramified places")
    sub = leaf(cover_cmds, "torus", _cmd_cover_torus, "normalize a mapping-torus point")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--unit", help="finite adele JSON for the unit part")
    sub.add_argument("--default", default="1", help="diagonal unit part (+-p^k)")
    sub.add_argument("--exp", required=True, help="rational time exponent")
    sub.add_argument("--apply", type=int, default=0,
                     help="apply the defining relation this many times first")

    weil = groups.add_parser("weil", help="explicit-formula balance")
    weil_cmds = weil.add_subparsers(dest="command", required=True)
    sub = leaf(weil_cmds, "balance", _cmd_weil_balance, "two-sided balance report")
    sub.add_argument("--tf", required=True, help="test function spec, e.g. cosbump:omega=8,T=5")
    sub.add_argument("--zeros", help="zero table path (default: bundled)")
    sub.add_argument("--n", type=int, help="number of zeros (default: whole table)")
    sub.add_argument("--curve-out", help="write gnuplot-ready residual-vs-N data")
    sub.add_argument("--counts", help="zero counts for the residual curve")
    sub = leaf(weil_cmds, "localterm", _cmd_weil_localterm, "single local term")
    sub.add_argument("--tf", required=True)
    sub.add_argument("--place", required=True, help="a prime, or 'inf'")
    sub.add_argument("--method", default="subtract", choices=["subtract", "symmetric"])
    sub = leaf(weil_cmds, "zerosverify", _cmd_weil_zerosverify, "certify zero ordinates")
    sub.add_argument("--zeros")
    sub.add_argument("--n", type=int)
    sub.add_argument("--tol", type=float, default=1e-8)
    sub = leaf(weil_cmds, "semilocal", _cmd_weil_semilocal, "semilocal bookkeeping")
    sub.add_argument("--tf", required=True)
    sub.add_argument("--scale", required=True)
    sub.add_argument("--places", required=True, help="comma list of primes and 'inf'")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        result: CommandResult = args.handler(args)
    except PicmonoidError as exc:
        if getattr(args, "json", False):
            print(json.dumps({"status": "error", "error": type(exc).__name__,
                              "message": str(exc)}, sort_keys=True))
        else:
            print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    result.emit(getattr(args, "json", False))
    return 0 if result.status == "ok" else 1


if __name__ == "__main__":
    sys.exit(main())
