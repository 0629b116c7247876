"""Command-line entry point: ``k3mirror <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bhk
from .forms import FormError, UndecidedError, discriminant_form, format_form, parse_form
from .geometry import GeometryError, genus, load_config, orbit_lattice
from .lattice import LatticeError, parse_lattice
from .mirror import PolarizationInvariants, mirror_invariants
from .overlattices import (
    LatticeInvariants,
    find_lattice_by_invariants,
    isotropic_subgroups,
    overlattice,
    quotient_form,
)
from .verify import verify_geometry, verify_mirrors, verify_table1


def _ints(text):
    return tuple(int(x) for x in text.replace(";", ",").split(",") if x.strip())


def _emit(args, payload, lines):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print("\n".join(lines))


def cmd_disc(args):
    L = parse_lattice(args.lattice)
    q = discriminant_form(L)
    payload = {
        "lattice": args.lattice,
        "rank": L.rank,
        "signature": list(L.signature),
        "det": L.det,
        "group": list(q.orders),
        "q": format_form(q),
    }
    _emit(args, payload, [
        f"lattice    {args.lattice}",
        f"signature  {L.signature}",
        f"det        {L.det}",
        f"group      {' x '.join(f'Z/{n}' for n in q.orders) or 'trivial'}",
        f"form       {format_form(q)}",
    ])


def _fmt_elem(x, orders):
    return "(" + ",".join(str(Fraction(a, n)) for a, n in zip(x, orders)) + ")"


def cmd_overlats(args):
    L = None
    if args.form:
        q = parse_form(args.target).form()
    else:
        L = parse_lattice(args.target)
        q = discriminant_form(L)
    rows, lines = [], []
    for H in isotropic_subgroups(q):
        gens = [_fmt_elem(g, q.orders) for g in H.generators]
        row = {"order": H.order, "generators": gens, "quotient": format_form(quotient_form(q, H))}
        line = f"|H| = {H.order:<4} gens {' '.join(gens) or '-':<24} q' = {row['quotient']}"
        if L is not None:
            M = overlattice(L, H)
            found = find_lattice_by_invariants(LatticeInvariants.of(M))
            row["lattice"] = found.name if found else None
            line += f"   {found.name if found else '?'}"
        rows.append(row)
        lines.append(line)
    _emit(args, {"form": format_form(q), "subgroups": rows}, [f"form {format_form(q)}", *lines])


def cmd_mirror(args):
    inv = PolarizationInvariants(args.r, parse_form(args.form).form())
    res = mirror_invariants(inv)
    m = res.mirror
    payload = {"r": m.r, "q": format_form(m.q), "u_splits": res.u_splits, "fallback": res.fallback,
               "notes": list(res.notes)}
    lines = [f"({inv.r}, {format_form(inv.q)}) -> ({m.r}, {format_form(m.q)})"]
    lines += [f"note: {n}" for n in res.notes]
    _emit(args, payload, lines)


def cmd_identify(args):
    tp, tm = _ints(args.signature)
    inv = LatticeInvariants(tp, tm, parse_form(args.form).form())
    L = find_lattice_by_invariants(inv, max_summands=args.max_summands)
    name = L.name if L else None
    _emit(args, {"signature": [tp, tm], "q": format_form(inv.q), "lattice": name},
          [name or "no catalogue lattice with these invariants"])
    return 0 if L else 1


def _polynomial(args):
    return bhk.parse_polynomial(args.polynomial, _ints(args.weights), args.degree)


def _parse_element(text):
    return tuple(Fraction(x) for x in text.split(","))


def cmd_bhk_transpose(args):
    W = _polynomial(args)
    T = bhk.transpose(W)
    payload = {"polynomial": str(T), "weights": list(T.weights.weights), "degree": T.weights.degree}
    _emit(args, payload, [f"{T}  {T.weights}"])


def cmd_bhk_dual(args):
    W = _polynomial(args)
    WT = bhk.transpose(W)
    J = bhk.j_subgroup(W)
    if args.group == "sl":
        G = bhk.sl_subgroup(W)
    elif args.group == "j":
        G = J
    else:
        gens = [bhk.j_element(W)] + [_parse_element(g) for g in args.group.split(";")]
        G = bhk.group_from_elements(W, gens)
    GT = bhk.dual_group(W, G, WT)
    JT = bhk.j_subgroup(WT)

    def fr(S, g):
        return "(" + ",".join(str(x) for x in S.fractions(g)) + ")"

    payload = {
        "transpose": str(WT),
        "weights": list(WT.weights.weights),
        "degree": WT.weights.degree,
        "order": G.order,
        "dual_order": GT.order,
        "g_over_j": G.order // J.order if J <= G else None,
        "dual_over_j": GT.order // JT.order if JT <= GT else None,
        "dual_generators": [fr(GT, g) for g in GT.generators()],
    }
    _emit(args, payload, [
        f"transpose  {WT}  {WT.weights}",
        f"|G| = {G.order}, |G^T| = {GT.order}, |G||G^T| = {G.order * GT.order} = det {W.det}",
        f"G/J = {payload['g_over_j']}, G^T/J^T = {payload['dual_over_j']}",
        "G^T generators " + " ".join(payload["dual_generators"]),
    ])


def cmd_genus(args):
    g = genus(args.weights, args.degree)
    _emit(args, {"genus": g, "self_intersection": 2 * g - 2}, [str(g)])


def cmd_orbit_lattice(args):
    cfg = load_config(args.config)
    res = orbit_lattice(cfg)
    q = discriminant_form(res.lattice)
    payload = {
        "r": res.r,
        "gram": [list(r) for r in res.gram],
        "orbits": [{"members": list(m), "class": k} for m, k in res.orbits],
        "q": format_form(q),
    }
    lines = [f"r = {res.r}", f"q = {format_form(q)}", "gram:"]
    lines += ["  " + " ".join(f"{x:4d}" for x in row) for row in res.gram]
    _emit(args, payload, lines)


def cmd_verify(args):
    reports = []
    everything = not (args.table or args.table1 or args.geometry)
    if args.table1 or everything:
        reports.append(verify_table1())
    if args.table or everything:
        reports.append(verify_mirrors(args.table or None))
    if args.geometry or everything:
        ex = None if args.geometry in (None, "all") else args.geometry
        reports.append(verify_geometry(ex))
    report = reports[0]
    for r in reports[1:]:
        report = report + r
    if args.json:
        print(report.to_json())
    else:
        sys.stdout.write(report.text())
    return 0 if report.ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="k3mirror", description="Lattice and BHK mirror checks for K3 surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    sp = add("disc", cmd_disc, "signature and discriminant form of a lattice expression")
    sp.add_argument("lattice", help='e.g. "U + A2", "T(3,4,4)", "2*D5"')

    sp = add("overlats", cmd_overlats, "isotropic subgroups and even overlattices")
    sp.add_argument("target", help="lattice expression, or a form with --form")
    sp.add_argument("--form", action="store_true", help="treat the argument as a finite quadratic form")

    sp = add("mirror", cmd_mirror, "mirror invariants (20 - r, -q)")
    sp.add_argument("r", type=int)
    sp.add_argument("form")

    sp = add("identify", cmd_identify, "find a catalogue lattice with given invariants")
    sp.add_argument("form")
    sp.add_argument("--signature", required=True, help="t+,t-")
    sp.add_argument("--max-summands", type=int, default=4)

    bp = sub.add_parser("bhk", help="invertible polynomials")
    bsub = bp.add_subparsers(dest="bhk_command", required=True)
    for name, fn, help in (("dual", cmd_bhk_dual, "dual group"), ("transpose", cmd_bhk_transpose, "transpose polynomial")):
        sp = bsub.add_parser(name, help=help)
        sp.add_argument("polynomial", help='e.g. "x^2+y^3+z^9+yw^12"')
        sp.add_argument("--weights", required=True, help="w1,w2,w3,w4")
        sp.add_argument("--degree", type=int, required=True)
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=fn)
        if name == "dual":
            sp.add_argument("--group", default="j",
                            help='"j", "sl", or extra generators over J such as "0,1/3,2/3,0;1/2,0,0,1/2"')

    sp = add("genus", cmd_genus, "genus of a degree-d curve in P(w1,w2,w3)")
    sp.add_argument("weights", type=int, nargs=3)
    sp.add_argument("degree", type=int)

    sp = add("orbit-lattice", cmd_orbit_lattice, "orbit lattice of a curve configuration file")
    sp.add_argument("config")

    sp = add("verify", cmd_verify, "run the bundled checks")
    sp.add_argument("--table", type=int, action="append", metavar="M", help="restrict to order m (repeatable)")
    sp.add_argument("--table1", action="store_true", help="lattice/form table")
    sp.add_argument("--geometry", nargs="?", const="all", metavar="ID", help="worked example id, or all")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        rc = args.func(args)
    except (LatticeError, FormError, bhk.BHKError, GeometryError, UndecidedError, ValueError, KeyError, OSError) as exc:
        print(f"k3mirror: error: {exc}", file=sys.stderr)
        return 2
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
