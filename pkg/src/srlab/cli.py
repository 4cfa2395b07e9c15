"""Command line front end.

Every JSON document carries the root-of-unity conventions the class labels
depend on. Exit codes: 0 ok, 2 bad input, 3 failed verification, 4 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import deformation, groups, stable_models, supersingular, x0p
from .algebra import check_odd_prime
from .errors import CapExceeded, InvalidInput, SrlabError

DEFAULT_MAX_P = 31


def max_p() -> int:
    raw = os.environ.get("SRLAB_MAX_P")
    if raw is None:
        return DEFAULT_MAX_P
    try:
        return int(raw)
    except ValueError:
        raise InvalidInput(f"SRLAB_MAX_P must be an integer, got {raw!r}") from None


def check_prime_arg(p: int, cap: int) -> int:
    check_odd_prime(p)
    if p < 5:
        raise InvalidInput(f"p must be at least 5, got {p}")
    if p > cap:
        raise CapExceeded(f"p = {p} exceeds the configured maximum {cap}")
    return p


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt(v) -> str:
    if isinstance(v, dict) and "quad" in v:
        a, b = v["quad"]
        return f"{a}+{b}s"
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, int) for t in v):
        return _frac(Fraction(*v))
    if v is None:
        return "-"
    return str(v)


def render_table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands: each returns (json document, table text)


def cmd_deformation(args):
    p = check_prime_arg(args.prime, max_p())
    sig = deformation.Signature(p, *args.signature)
    datum = deformation.build_datum(sig, sl2_lift=args.sl2_lift)
    doc = datum.to_json()
    doc["verified"] = True
    head = (f"p = {p}  signature = {list(sig.a)}  d = {sig.d}  m_cover = {datum.m_cover}\n"
            f"u = {datum.u!r}\neps^(p-1) = {datum.eps_pow.value}\n")
    rows = [[c["tau"], c["kind"], c["m"], c["h"], c["sigma"]] for c in doc["criticals"]]
    return doc, head + render_table(["tau", "kind", "m", "h", "sigma"], rows)


def cmd_supersingular(args):
    p = check_prime_arg(args.prime, max_p())
    report = supersingular.supersingular_report(p, args.line)
    doc = report.to_json()
    text = (f"p = {p}  line = {args.line}\npolynomial = {report.polynomial!r}\n"
            + render_table(["root", "supersingular"],
                           [[r.to_json(), "yes"] for r in report.roots_in_fp2])
            + f"\nverified = {report.verified}")
    return doc, text


def _comb_text(comb) -> str:
    th = comb.node_thickness
    rows = [[i, t["kind"], t["attach"], t["branch_point"], t["sigma"], t["h"], t["inertia"],
             t["decomposition"], [th[i].numerator, th[i].denominator]]
            for i, t in enumerate(c.to_json() for c in comb.tails)]
    head = (f"p = {comb.p}  flavor = {comb.flavor}  signature = {list(comb.datum.signature.a)}"
            f"  N = {comb.field_degree_N}  coordinate = {comb.coordinate}\n")
    return head + render_table(
        ["#", "kind", "attach", "branch", "sigma", "h", "inertia", "decomposition", "thickness"],
        rows)


def cmd_x2p(args):
    p = check_prime_arg(args.prime, max_p())
    comb = stable_models.x2p_model(p)
    doc = comb.to_json()
    doc["verified"] = True
    return doc, _comb_text(comb)


def cmd_xp(args):
    p = check_prime_arg(args.prime, max_p())
    comb = stable_models.xp_model(p)
    doc = comb.to_json()
    cd = stable_models.xp_class_data(p)
    doc["classes"] = {"2A": cd.class_2A.label, "2A_lift": cd.lift_2A.label,
                      "3A": cd.class_3A.label, "3A_lift": cd.lift_3A.label}
    doc["verified"] = True
    return doc, _comb_text(comb)


def cmd_x0p(args):
    p = check_prime_arg(args.prime, max_p())
    fiber = x0p.build_x0p(p)
    doc = fiber.to_json()
    doc["verified"] = True
    rows = [[c.j.to_json(), c.thickness, c.singularity] for c in fiber.crossings]
    split = ", ".join(str(d["at"]) for d in fiber.intermediate["d"]) or "none"
    text = (f"p = {p}  genus = {fiber.genus}\n"
            + render_table(["j", "thickness", "singularity"], rows)
            + f"\nsplit pairs at j = {split}\n{fiber.convention_note}")
    return doc, text


def _classes(args) -> groups.ClassVector:
    if len(args.classes) != 3:
        raise InvalidInput("--classes takes exactly three labels")
    return groups.ClassVector.parse(args.classes, args.prime, args.flavor)


def cmd_nielsen(args):
    p = check_prime_arg(args.prime, max_p())
    cap = args.max_group_p
    if p > cap:
        raise CapExceeded(f"group enumeration is capped at p <= {cap}")
    v = _classes(args)
    n = groups.nielsen_count(v, max_p=cap)
    doc = {"classes": [c.to_json() for c in v], "count": n, "flavor": v.flavor, "p": p}
    return doc, f"{v.flavor}({p}) {v!r}: {n}"


def cmd_census(args):
    p = check_prime_arg(args.prime, max_p())
    v = _classes(args)
    report = stable_models.reduction_census(v, max_group_p=args.max_group_p)
    doc = report.to_json()
    bound = " (upper bound)" if report.total_is_bound else ""
    text = render_table(["classes", "total", "bad", "good", "case"],
                        [[" ".join(v.labels), f"{report.total_covers}{bound}",
                          report.bad_covers, report.good_covers, report.reason]])
    return doc, text


def cmd_check_al(args):
    p = check_prime_arg(args.prime, max_p())
    if p > args.max_group_p:
        raise CapExceeded(f"group enumeration is capped at p <= {args.max_group_p}")
    ok = stable_models.lemma_al_action_check(p, max_p=args.max_group_p)
    doc = {"curve": "y^(p+1) = x^p - x", "p": p, "verified": ok}
    return doc, f"SL2({p}) action on y^{p + 1} = x^{p} - x: {'ok' if ok else 'FAILED'}"


COMMANDS = {
    "deformation": cmd_deformation,
    "supersingular": cmd_supersingular,
    "x2p": cmd_x2p,
    "xp": cmd_xp,
    "x0p": cmd_x0p,
    "nielsen": cmd_nielsen,
    "census": cmd_census,
    "check-al": cmd_check_al,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", "--prime", type=int, required=True)
    common.add_argument("--format", choices=("json", "table"), default="json")

    group_opts = argparse.ArgumentParser(add_help=False)
    group_opts.add_argument("--max-group-p", type=int, default=groups.DEFAULT_MAX_GROUP_P)

    classes = argparse.ArgumentParser(add_help=False)
    classes.add_argument("--classes", nargs="+", required=True,
                         help='three labels: I -I pA pB 2pA 2pB "C(l)" "Ct(l)"')
    classes.add_argument("--flavor", choices=("sl2", "psl2"), default="sl2")

    parser = argparse.ArgumentParser(prog="srlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("deformation", parents=[common], help="hypergeometric deformation datum")
    d.add_argument("-a", "--signature", type=int, nargs=3, required=True,
                   metavar=("A1", "A2", "A3"))
    d.add_argument("--sl2-lift", action="store_true",
                   help="use the (p-1)-cyclic cover of the SL2 construction")

    s = sub.add_parser("supersingular", parents=[common], help="supersingular polynomial")
    s.add_argument("--line", choices=("lambda", "j"), default="lambda")

    sub.add_parser("x2p", parents=[common], help="stable model of X(2p)")
    sub.add_parser("xp", parents=[common], help="stable model of X(p) on the j-line")
    sub.add_parser("x0p", parents=[common], help="special fiber of X_0(p)")
    sub.add_parser("nielsen", parents=[common, classes, group_opts], help="Nielsen count")
    sub.add_parser("census", parents=[common, classes, group_opts], help="reduction census")
    sub.add_parser("check-al", parents=[common, group_opts],
                   help="SL2(p) action on y^(p+1) = x^p - x")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, text = COMMANDS[args.command](args)
    except SrlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.format == "json":
        doc = dict(doc)
        doc["conventions"] = groups.conventions(args.prime)
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
