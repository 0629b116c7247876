"""End-to-end checks of the bundled tables and worked examples.

Every check produces an :class:`Outcome`; a :class:`VerificationReport`
renders them as text or JSON.  The text form is generated from the JSON
form, so a saved JSON report reproduces the text byte for byte.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from . import bhk
from .forms import (
    FormError,
    FormExpression,
    GeneratorBlock,
    discriminant_form,
    format_form,
    forms_isomorphic,
    parse_form,
)
from .geometry import (
    CurveConfig,
    GeometryError,
    bundled_configs,
    curve_lattice,
    genus,
    is_primitive_in_node_lattice,
    isotropy_scan,
    orbit_lattice,
)
from .lattice import Lattice, LatticeError, parse_lattice
from .mirror import PolarizationInvariants, check_mirror_pair, mirror_invariants
from .overlattices import (
    LatticeInvariants,
    embedding_ruled_out,
    find_lattice_by_invariants,
    isotropic_subgroups,
    overlattice,
    uniqueness,
)

__all__ = [
    "Outcome",
    "VerificationReport",
    "load_tables",
    "load_table1",
    "verify_table1",
    "verify_mirrors",
    "verify_geometry",
    "mutate",
    "render_text",
]

DATA = Path(__file__).parent / "data"


def load_tables(path=None):
    with open(path or DATA / "tables.json", encoding="utf-8") as fh:
        return json.load(fh)


def load_table1(path=None):
    with open(path or DATA / "table1.json", encoding="utf-8") as fh:
        return json.load(fh)


@dataclass
class Outcome:
    label: str
    checks: dict = field(default_factory=dict)  # name -> True / False / None (not applicable)
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    where: dict = field(default_factory=dict)

    def check(self, name, ok, why=""):
        ok = bool(ok)
        self.checks[name] = ok and self.checks.get(name, True) is not False
        if not ok:
            self.failures.append(f"{name}: {why}" if why else name)
        return ok

    @property
    def ok(self):
        return not self.failures

    def to_dict(self):
        return {
            "label": self.label,
            "where": self.where,
            "checks": self.checks,
            "failures": self.failures,
            "notes": self.notes,
        }


@dataclass
class VerificationReport:
    kind: str
    outcomes: list

    @property
    def ok(self):
        return all(o.ok for o in self.outcomes)

    @property
    def failures(self):
        return [(o.label, f) for o in self.outcomes for f in o.failures]

    def summary(self):
        failed = sum(1 for o in self.outcomes if not o.ok)
        return {
            "kind": self.kind,
            "items": len(self.outcomes),
            "passed": len(self.outcomes) - failed,
            "failed": failed,
            "ok": failed == 0,
        }

    def to_dict(self):
        return {"rows": [o.to_dict() for o in self.outcomes], "summary": self.summary()}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def text(self):
        return render_text(self.to_dict())

    def __add__(self, other):
        kind = self.kind if self.kind == other.kind else f"{self.kind}+{other.kind}"
        return VerificationReport(kind, self.outcomes + other.outcomes)


def render_text(report: dict) -> str:
    """Text form of a report dictionary (as produced by ``to_dict`` or parsed JSON)."""
    lines = []
    for row in report["rows"]:
        status = "PASS" if not row["failures"] else "FAIL"
        lines.append(f"[{status}] {row['label']}")
        for f in row["failures"]:
            lines.append(f"    failure: {f}")
        for n in row["notes"]:
            lines.append(f"    note: {n}")
    s = report["summary"]
    lines.append(f"{s['kind']}: {s['passed']}/{s['items']} passed, {s['failed']} failed")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# table 1

def verify_table1(data=None) -> VerificationReport:
    data = data or load_table1()
    out = []
    for row in data["rows"]:
        o = Outcome(f"{row['lattice']} {tuple(row['signature'])} {row['q']}", where={"lattice": row["lattice"]})
        try:
            L = parse_lattice(row["lattice"])
            q = discriminant_form(L)
        except (LatticeError, FormError) as exc:
            o.check("lattice", False, str(exc))
            out.append(o)
            continue
        o.check("signature", list(L.signature) == list(row["signature"]), f"computed {L.signature}")
        printed = parse_form(row["q"])
        anomaly = row.get("anomaly")
        if anomaly is None:
            o.check("form", forms_isomorphic(q, printed), f"computed {format_form(q)}")
        else:
            fixed = parse_form(anomaly["expected_q"])
            o.check("form", forms_isomorphic(q, fixed), f"computed {format_form(q)}, annotated {anomaly['expected_q']}")
            o.check("anomaly_confirmed", not forms_isomorphic(q, printed), "printed form matches after all")
            o.notes.append(f"annotated anomaly: {anomaly['note']}")
        if row.get("gram_note"):
            o.notes.append(row["gram_note"])
        out.append(o)
    return VerificationReport("table1", out)


# ---------------------------------------------------------------------------
# mirror tables

@lru_cache(maxsize=None)
def _row_algebra(polynomial, weights, degree):
    W = bhk.parse_polynomial(polynomial, weights, degree)
    WT = bhk.transpose(W)
    J = bhk.j_subgroup(W)
    SL = bhk.sl_subgroup(W)
    subs = bhk.subgroups_between(J, SL)
    return W, WT, J, SL, subs


@lru_cache(maxsize=None)
def _dual(W, G, WT):
    return bhk.dual_group(W, G, WT)


def _algebra(row):
    return _row_algebra(row["polynomial"], tuple(row["weights"]), row["degree"])


def _tagged(row, tag, W):
    gens = [bhk.j_element(W), [Fraction(a, b) for a, b in row["subgroups"][tag]]]
    return bhk.group_from_elements(W, gens)


def _entry_label(m, row, e):
    tag = f" {e['tag']}" if e.get("tag") else ""
    return f"m={m} {row['id']} G/J={e['g_over_j']}{tag} (r={e['r']}, q={e['q']})"


def _row_outcome(m, row):
    """Row-level checks: weights, SL/J and the multiset of intermediate subgroups."""
    o = Outcome(f"m={m} {row['id']} {row['polynomial']} {tuple(row['weights'])};{row['degree']}",
                where={"table": m, "row": row["id"]})
    try:
        W, WT, J, SL, subs = _algebra(row)
    except bhk.BHKError as exc:
        o.check("weights", False, str(exc))
        return o, None
    o.check("weights", True)
    nj = J.order
    o.check("group_orders", SL.order // nj == row["sl_over_j"], f"|SL/J| = {SL.order // nj}")
    counts = {}
    for G in subs:
        counts[G.order // nj] = counts.get(G.order // nj, 0) + 1
    listed = {}
    for e in row["entries"]:
        listed[e["g_over_j"]] = listed.get(e["g_over_j"], 0) + 1
    o.check("group_orders", set(counts) == set(listed), f"subgroup orders {sorted(counts)} vs listed {sorted(listed)}")
    tagged = "subgroups" in row
    for k in sorted(counts):
        if counts[k] != listed.get(k, 0):
            msg = f"{counts[k]} subgroups with G/J = {k}, {listed.get(k, 0)} listed"
            if tagged:
                o.check("group_orders", False, msg)
            else:
                o.notes.append(f"ambiguous: {msg}; checked at set level")
    JT = _dual(W, J, WT)
    o.check("duality_law", JT.elements == bhk.sl_subgroup(WT).elements, "J^T differs from SL of the transpose")
    if row.get("subgroups_correction"):
        o.notes.append(row["subgroups_correction"])
    if row.get("note"):
        o.notes.append(row["note"])
    return o, (W, WT, J, SL, subs)


def _entry_outcome(m, rows, row, e, alg, pairs_cache):
    o = Outcome(_entry_label(m, row, e), where={"table": m, "row": row["id"], "g_over_j": e["g_over_j"], "tag": e.get("tag")})
    W, WT, J, SL, subs = alg
    try:
        q = parse_form(e["q"])
    except FormError as exc:
        o.check("form", False, str(exc))
        return o
    o.notes.extend(q.notes)
    if not 1 <= e["r"] <= 19:
        o.check("rank_sum", False, f"rank {e['r']} outside 1..19")
        return o
    inv = PolarizationInvariants(e["r"], q.form())
    o.check("signature", inv.signature_consistent(), "signature congruence 2 - r fails")
    o.check("signature", inv.length_ok(), "length exceeds rank")
    u = uniqueness(LatticeInvariants(1, e["r"] - 1, inv.q))
    o.check("uniqueness", u == "unique", "uniqueness conditions not met")

    # dual row and transpose
    drow = rows.get(e["dual"])
    if drow is None:
        o.check("dual_reference", False, f"dual row {e['dual']!r} not found in table m={m}")
        return o
    if e.get("dual_printed"):
        o.notes.append(f"dual printed as {e['dual_printed']}, resolved to {e['dual']}")
    try:
        D, DT, DJ, DSL, dsubs = _algebra(drow)
    except bhk.BHKError as exc:
        o.check("dual_weights", False, f"dual row does not parse: {exc}")
        return o
    perm = bhk.match_permutation(WT.matrix, D.matrix)
    if perm is None:
        o.check("dual_weights", False, f"transpose {bhk.format_polynomial(WT.matrix)} is not row {drow['id']} ({drow['polynomial']})")
        return o
    moved = [0] * len(perm)
    for i, w in enumerate(WT.weights.weights):
        moved[perm[i]] = w
    o.check(
        "dual_weights",
        tuple(moved) == tuple(drow["weights"]) and WT.weights.degree == drow["degree"],
        f"transpose weights {WT.weights} vs {tuple(drow['weights'])};{drow['degree']}",
    )

    # subgroups for this entry and their duals
    nj = J.order
    if e.get("tag"):
        if e["tag"] not in row.get("subgroups", {}):
            o.check("group_orders", False, f"unknown subgroup tag {e['tag']}")
            return o
        cands = [_tagged(row, e["tag"], W)]
        if not (J <= cands[0] <= SL) or cands[0].order != e["g_over_j"] * nj:
            o.check("group_orders", False, f"tagged subgroup {e['tag']} has G/J = {cands[0].order / nj}")
            return o
    else:
        cands = [G for G in subs if G.order == e["g_over_j"] * nj]
    o.check("group_orders", bool(cands), f"no intermediate subgroup with G/J = {e['g_over_j']}")
    if not cands:
        return o
    if len(cands) > 1:
        o.notes.append(f"{len(cands)} subgroups with G/J = {e['g_over_j']}; duality checked for each")
    det = W.det
    dual_entries = []
    for G in cands:
        GT = _dual(W, G, WT)
        o.check("duality_law", _dual(WT, GT, W).elements == G.elements, "(G^T)^T != G")
        o.check("duality_law", G.order * GT.order == det, f"|G||G^T| = {G.order * GT.order} != {det}")
        GTp = bhk.permute_group(GT, perm)
        if not (DJ <= GTp <= DSL):
            o.check("duality_law", False, "G^T is not between J and SL of the dual row")
            continue
        k = GTp.order // DJ.order
        if e.get("dual_tag"):
            if e["dual_tag"] not in drow.get("subgroups", {}):
                o.check("duality_law", False, f"unknown dual tag {e['dual_tag']}")
                continue
            target = _tagged(drow, e["dual_tag"], D)
            o.check("duality_law", GTp.elements == target.elements, f"G^T is not subgroup {e['dual_tag']} of {drow['id']}")
        matches = [
            d for d in drow["entries"]
            if d["g_over_j"] == k and (not e.get("dual_tag") or d.get("tag") == e["dual_tag"])
        ]
        if not matches:
            o.check("duality_law", False, f"row {drow['id']} lists no entry with G/J = {k}")
            continue
        dual_entries.extend(d for d in matches if d not in dual_entries)
    if not dual_entries:
        return o
    o.where["dual"] = {"row": drow["id"], "g_over_j": dual_entries[0]["g_over_j"], "tag": dual_entries[0].get("tag")}
    for d in dual_entries:
        if d.get("dual") != row["id"]:
            o.check("dual_reference", False, f"entry G/J={d['g_over_j']} of {drow['id']} points to {d.get('dual')!r}")
        try:
            dq = parse_form(d["q"]).form()
        except FormError as exc:
            o.check("form_mirror", False, f"dual form does not parse: {exc}")
            continue
        if not 1 <= d["r"] <= 19:
            o.check("rank_sum", False, f"dual rank {d['r']} outside 1..19")
            continue
        dinv = PolarizationInvariants(d["r"], dq)
        key = (m, row["id"], e["g_over_j"], e.get("tag"), drow["id"], d["g_over_j"], d.get("tag"))
        if key not in pairs_cache:
            pairs_cache[key] = check_mirror_pair(inv, dinv)
        pr = pairs_cache[key]
        o.check("rank_sum", pr.rank_ok, f"{e['r']} + {d['r']} != 20")
        o.check("form_mirror", pr.form_ok, f"{e['q']} is not minus {d['q']}")
        mine, theirs = mirror_invariants(inv), mirror_invariants(dinv)
        fallback = mine.fallback or theirs.fallback
        expected = bool(e.get("expect_fallback"))
        o.check("complement", fallback == expected,
                "U-splitting fails unexpectedly" if fallback else "fallback expected but U splits")
        for res in (mine, theirs):
            if res.fallback:
                o.check("complement", res.pinned_unique, "no uniqueness criterion applies to the complement")
                o.notes.extend(res.notes)
    return o


def verify_mirrors(tables=None, data=None, rows=None) -> VerificationReport:
    """Check every (row, subgroup) entry against its BHK dual.

    ``tables`` restricts to a collection of orders ``m`` and ``rows`` to a
    collection of row ids; duals are still resolved against the full table.
    """
    data = data or load_tables()
    wanted = None if tables is None else {int(t) for t in ([tables] if isinstance(tables, (int, str)) else tables)}
    out = []
    pairs_cache = {}
    for tab in data["tables"]:
        m = tab["m"]
        if wanted is not None and m not in wanted:
            continue
        by_id = {r["id"]: r for r in tab["rows"]}
        for row in tab["rows"]:
            if rows is not None and row["id"] not in rows:
                continue
            ro, alg = _row_outcome(m, row)
            out.append(ro)
            if alg is None:
                continue
            for e in row["entries"]:
                out.append(_entry_outcome(m, by_id, row, e, alg, pairs_cache))
    if wanted is not None and not out:
        raise ValueError(f"no bundled table for m in {sorted(wanted)}")
    return VerificationReport("mirrors", out)


# ---------------------------------------------------------------------------
# mutations

def _flip_epsilon(text):
    expr = parse_form(text)
    terms = list(expr.terms)
    for i, (mult, b) in enumerate(terms):
        if b.kind == "w":
            new = [(mult - 1, b)] if mult > 1 else []
            new.append((1, GeneratorBlock("w", b.p, b.k, -b.eps)))
            terms[i:i + 1] = new
            return format_form(FormExpression(tuple(terms)))
    for i, (mult, b) in enumerate(terms):
        if b.kind in ("u", "v"):
            other = "v" if b.kind == "u" else "u"
            new = [(mult - 1, b)] if mult > 1 else []
            new.append((1, GeneratorBlock(other, 2, b.k, 1)))
            terms[i:i + 1] = new
            return format_form(FormExpression(tuple(terms)))
    return None


def mutate(data, kind, m, row_id, index):
    """Copy of the dataset with one field of one entry perturbed, or ``None`` if not applicable.

    ``kind`` is ``"r"`` (rank off by one), ``"epsilon"`` (one block's sign
    flipped) or ``"dual"`` (dual reference moved to a neighbouring row).
    """
    data = copy.deepcopy(data)
    tab = next(t for t in data["tables"] if t["m"] == m)
    ids = [r["id"] for r in tab["rows"]]
    row = tab["rows"][ids.index(row_id)]
    e = row["entries"][index]
    if kind == "r":
        e["r"] += 1 if e["r"] < 19 else -1
    elif kind == "epsilon":
        new = _flip_epsilon(e["q"])
        if new is None:
            return None
        e["q"] = new
    elif kind == "dual":
        others = [i for i in ids if i != e["dual"]]
        if not others:
            return None
        pos = ids.index(e["dual"]) if e["dual"] in ids else 0
        e["dual"] = next(ids[(pos + s) % len(ids)] for s in range(1, len(ids) + 1) if ids[(pos + s) % len(ids)] != e["dual"])
    else:
        raise ValueError(f"unknown mutation {kind!r}")
    return data


# ---------------------------------------------------------------------------
# worked examples

def _lattice_matches(L: Lattice, name: str):
    """``(isometric, detail)``: same invariants and the genus holds one class."""
    target = parse_lattice(name)
    a, b = LatticeInvariants.of(L), LatticeInvariants.of(target)
    if (a.t_plus, a.t_minus) != (b.t_plus, b.t_minus):
        return False, f"signature {L.signature} vs {target.signature}"
    if not forms_isomorphic(a.q, b.q):
        return False, f"form {format_form(a.q)} vs {format_form(b.q)}"
    if uniqueness(a) != "unique":
        return False, "invariants agree but uniqueness is not guaranteed"
    return True, ""


def _chains(cfg: CurveConfig):
    exc = {v.id for v in cfg.nodes if v.kind == "exceptional"}
    adj = {x: set() for x in exc}
    for (a, b) in cfg.edges:
        if a in exc and b in exc:
            adj[a].add(b)
            adj[b].add(a)
    seen, sizes = set(), []
    for x in sorted(exc):
        if x in seen:
            continue
        comp, stack = set(), [x]
        while stack:
            y = stack.pop()
            if y not in comp:
                comp.add(y)
                stack.extend(adj[y] - comp)
        seen |= comp
        sizes.append(len(comp))
    return sorted(sizes)


def _table_entry(tables, m, row_id, g_over_j):
    tab = next((t for t in tables["tables"] if t["m"] == m), None)
    if tab is None:
        return None
    row = next((r for r in tab["rows"] if r["id"] == row_id), None)
    if row is None:
        return None
    return next((e for e in row["entries"] if e["g_over_j"] == g_over_j), None)


def _verify_config(cid, cfg: CurveConfig, tables) -> Outcome:
    meta = cfg.meta
    exp = meta.get("expect", {})
    o = Outcome(f"{cid}: {meta.get('title', '')}".rstrip(": "), where={"example": cid, "row": meta.get("row")})

    by_id = cfg.by_id
    for nid, spec in sorted(meta.get("coordinate_curves", {}).items()):
        try:
            g = genus(spec["weights"], spec["degree"])
        except GeometryError as exc:
            o.check("genus", False, str(exc))
            continue
        o.check("genus", g == by_id[nid].genus, f"{nid}: formula gives {g}, configuration has {by_id[nid].genus}")
        o.notes.append(f"genus {nid} = {g}")

    surf = meta.get("surface")
    if surf and surf.get("group") == "J":
        W = bhk.parse_polynomial(surf["polynomial"], surf["weights"], surf["degree"])
        scan = isotropy_scan(W)
        if not scan.complete:
            o.check("isotropy", False, "; ".join(scan.manual))
        else:
            sizes = sorted(e.order - 1 for e in scan.entries for _ in range(e.count))
            o.check("isotropy", sizes == _chains(cfg), f"scan gives chains {sizes}, configuration {_chains(cfg)}")
            o.notes.append("isotropy: " + ", ".join(scan.lines()))
    else:
        o.checks["isotropy"] = None

    try:
        res = orbit_lattice(cfg)
    except GeometryError as exc:
        o.check("orbit_lattice", False, str(exc))
        return o
    LB = res.lattice
    o.check("rank", res.r == exp.get("r", res.r), f"r = {res.r}")
    if not res.greedy:
        o.notes.append("greedy generators span a proper sublattice; a basis of the full span is used")
    if "gram" in exp:
        o.check("gram", [list(r) for r in res.gram] == exp["gram"], f"Gram {res.gram}")
    qB = discriminant_form(LB)
    if "lb_q" in exp:
        o.check("form", forms_isomorphic(qB, parse_form(exp["lb_q"])), f"L_B has {format_form(qB)}")
    subs = isotropic_subgroups(qB)
    nontrivial = [H for H in subs if H.order > 1]
    if "nontrivial_overlattices" in exp:
        o.check("overlattices", len(nontrivial) == exp["nontrivial_overlattices"], f"{len(nontrivial)} nontrivial isotropic subgroups")
    if meta.get("method") == "I":
        o.check("overlattices", not nontrivial, "Method I needs L_B without proper overlattices")
    o.notes.append(f"L_B: rank {res.r}, form {format_form(qB)}, {len(nontrivial)} nontrivial overlattice(s)")

    # decide the invariant lattice
    pic = meta.get("picard", {})
    S = None
    if not nontrivial:
        S = LB
    elif "lattice" in pic:
        T = LatticeInvariants.of(parse_lattice(pic["lattice"]))
        C, _ = curve_lattice(cfg)
        CI = LatticeInvariants.of(C)
        o.check("picard", (CI.t_plus, CI.t_minus) == (T.t_plus, T.t_minus) and forms_isomorphic(CI.q, T.q),
                f"curve lattice has signature {C.signature} and form {format_form(CI.q)}")
        o.notes.append(f"curve lattice: signature {C.signature}, form {format_form(CI.q)}; cited {pic['lattice']}")
        survivors, killed = [], []
        for H in subs:
            cand = overlattice(LB, H)
            name = find_lattice_by_invariants(LatticeInvariants.of(cand))
            label = name.name if name is not None else format_form(discriminant_form(cand))
            (killed if embedding_ruled_out(LatticeInvariants.of(cand), T) else survivors).append((label, cand))
        o.notes.append("candidates: " + ", ".join(n for n, _ in survivors + killed))
        o.notes.append("ruled out: " + (", ".join(n for n, _ in killed) or "none"))
        want = exp.get("eliminated")
        if want is not None:
            o.check("elimination", sorted(n for n, _ in killed) == sorted(want), f"ruled out {[n for n, _ in killed]}")
        if len(survivors) == 1:
            S = survivors[0][1]
        else:
            o.check("elimination", False, f"{len(survivors)} candidates survive")
    elif pic.get("from_nodes"):
        C, _ = curve_lattice(cfg)
        o.check("picard", C.rank == pic.get("rank", C.rank), f"curve lattice rank {C.rank}")
        if "q" in pic:
            o.check("picard", forms_isomorphic(discriminant_form(C), parse_form(pic["q"])),
                    f"curve lattice form {format_form(discriminant_form(C))}")
        prim = is_primitive_in_node_lattice(cfg, res.basis)
        o.notes.append(f"curve lattice: rank {C.rank}, form {format_form(discriminant_form(C))}; L_B primitive: {prim}")
        o.check("primitive", prim == exp.get("primitive", True), "L_B is not primitive in the curve lattice")
        if "overlattice" in exp and nontrivial:
            ok, why = _lattice_matches(overlattice(LB, nontrivial[0]), exp["overlattice"])
            o.check("overlattices", ok, f"overlattice is not {exp['overlattice']}: {why}")
        S = LB if prim else None
    elif pic.get("general_member"):
        ok, why = _lattice_matches(LB, pic["lattice_general"])
        o.check("picard", ok, why)
        S = LB if ok else None
    if S is None:
        o.check("invariant_lattice", False, "overlattice ambiguity not resolved by the configuration")
        return o

    qS = discriminant_form(S)
    o.check("form", forms_isomorphic(qS, parse_form(exp["q"])), f"S has {format_form(qS)}")
    if "lattice" in exp:
        ok, why = _lattice_matches(S, exp["lattice"])
        o.check("identify", ok, why)
    found = find_lattice_by_invariants(LatticeInvariants.of(S))
    o.notes.append(f"invariants ({S.rank}, {format_form(qS)}); catalogue search: {found.name if found else 'none'}")

    row = meta.get("row")
    if row:
        e = _table_entry(tables, row["m"], row["id"], row["g_over_j"])
        if e is None:
            o.check("table", False, f"no entry m={row['m']} {row['id']} G/J={row['g_over_j']}")
        else:
            o.check("table", e["r"] == S.rank and forms_isomorphic(qS, parse_form(e["q"])),
                    f"table lists ({e['r']}, {e['q']})")
    return o


def verify_geometry(example=None, configs=None, tables=None) -> VerificationReport:
    configs = configs or bundled_configs()
    tables = tables or load_tables()
    if example is not None:
        if example not in configs:
            raise KeyError(f"unknown example {example!r}; known: {', '.join(sorted(configs))}")
        configs = {example: configs[example]}
    return VerificationReport("geometry", [_verify_config(cid, cfg, tables) for cid, cfg in sorted(configs.items())])
