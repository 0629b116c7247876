"""Coordinate curves, quotient singularities and orbit lattices on weighted K3 surfaces."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from pathlib import Path

from . import exact
from .lattice import Lattice, LatticeError, is_primitive_sublattice, sublattice_from_generators

__all__ = [
    "GeometryError",
    "genus",
    "self_intersection",
    "IsotropyEntry",
    "IsotropyReport",
    "isotropy_scan",
    "Node",
    "CurveConfig",
    "OrbitLatticeResult",
    "orbit_lattice",
    "node_gram",
    "load_config",
    "bundled_configs",
    "node_lattice_rank",
    "curve_lattice",
    "is_primitive_in_node_lattice",
]

VARIABLES = "xyzw"


class GeometryError(ValueError):
    pass


def genus(weights, d) -> int:
    """Genus of a quasismooth degree-``d`` curve in ``P(w1, w2, w3)``."""
    w1, w2, w3 = (int(w) for w in weights)
    if min(w1, w2, w3) <= 0 or d <= 0:
        raise GeometryError("weights and degree must be positive")
    ws = (w1, w2, w3)
    two_g = (
        Fraction(d * d, w1 * w2 * w3)
        - d * sum(Fraction(gcd(a, b), a * b) for a, b in combinations(ws, 2))
        + sum(Fraction(gcd(w, d), w) for w in ws)
        - 1
    )
    g = two_g / 2
    if g.denominator != 1 or g < 0:
        raise GeometryError(f"genus formula gives {g} for degree {d} in P{ws}: not applicable")
    return int(g)


def self_intersection(g: int) -> int:
    if g < 0:
        raise GeometryError("genus must be nonnegative")
    return 2 * g - 2


# ---------------------------------------------------------------------------
# isotropy

@dataclass(frozen=True)
class IsotropyEntry:
    stratum: str  # e.g. "z=w=0"
    order: int
    count: int

    @property
    def singularity(self):
        return f"A{self.order - 1}"

    @property
    def exceptional_curves(self):
        return self.count * (self.order - 1)

    def __str__(self):
        lead = f"{self.count}" if self.count > 1 else ""
        return f"mu_{self.order} on {self.stratum}: {lead}{self.singularity}"


@dataclass(frozen=True)
class IsotropyReport:
    entries: tuple
    manual: tuple = ()  # reasons a configuration must be supplied by hand

    @property
    def complete(self):
        return not self.manual

    @property
    def exceptional_curves(self):
        return sum(e.exceptional_curves for e in self.entries)

    def lines(self):
        out = [str(e) for e in self.entries]
        out += [f"manual configuration required: {m}" for m in self.manual]
        return out


def _stratum(support, n):
    zero = [VARIABLES[i] for i in range(n) if i not in support]
    return "=".join(zero) + "=0"


def _torus_points(monomials, support, weights):
    """Points of ``{sum c_k m_k = 0}`` in the torus of ``P(w_support)`` for generic ``c``.

    Returns an int, or ``None`` when the count is not determined by the
    monomial pattern alone.
    """
    if len(monomials) == 0:
        return None  # the whole stratum lies on the surface
    if len(monomials) == 1:
        return 0
    if len(support) == 2 and len(monomials) == 2:
        i, j = support
        g = gcd(weights[i], weights[j])
        ui, uj = weights[j] // g, -weights[i] // g  # generator of weight-zero characters
        a = monomials[0][i] - monomials[1][i]
        b = monomials[0][j] - monomials[1][j]
        k = a // ui if ui else 0
        if a != k * ui or b != k * uj:
            raise GeometryError("monomial ratio is not weight zero")
        return abs(k)
    return None


def isotropy_scan(W) -> IsotropyReport:
    """Cyclic quotient points of ``{W = 0}`` in ``P(w)`` read off coordinate strata.

    For every set of coordinates whose weights share a factor ``n > 1`` the
    points with exactly those coordinates nonzero are counted; each is an
    ``A_{n-1}`` point.  Patterns the monomials do not decide are reported
    as requiring a hand-made configuration.
    """
    weights = W.weights.weights
    n = len(weights)
    entries, manual = [], []
    for size in range(1, n):
        for support in combinations(range(n), size):
            g = 0
            for i in support:
                g = gcd(g, weights[i])
            if g <= 1:
                continue
            mons = [row for row in W.matrix if all(a == 0 for k, a in enumerate(row) if k not in support)]
            stratum = _stratum(support, n)
            if size == 1:
                count = 0 if mons else 1
            else:
                count = _torus_points(mons, support, weights)
            if count is None:
                manual.append(f"mu_{g} on {stratum} with {len(mons)} monomial(s)")
            elif count:
                entries.append(IsotropyEntry(stratum, g, count))
    return IsotropyReport(tuple(entries), tuple(manual))


# ---------------------------------------------------------------------------
# curve configurations

@dataclass(frozen=True)
class Node:
    id: str
    genus: int
    kind: str  # "coordinate" or "exceptional"

    def __post_init__(self):
        if self.kind not in ("coordinate", "exceptional"):
            raise GeometryError(f"node {self.id}: unknown class {self.kind!r}")
        if self.genus < 0:
            raise GeometryError(f"node {self.id}: negative genus")
        if self.kind == "exceptional" and self.genus != 0:
            raise GeometryError(f"exceptional curve {self.id} must be rational")


@dataclass
class CurveConfig:
    """Dual graph of curves with a finite permutation action.

    ``edges`` maps unordered id pairs to intersection multiplicities;
    ``permutation`` maps ids to ids (missing ids are fixed).
    """

    nodes: list
    edges: dict
    order: int = 1
    permutation: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [v.id for v in self.nodes]
        if len(set(ids)) != len(ids):
            raise GeometryError("duplicate node ids")
        known = set(ids)
        for (a, b), m in self.edges.items():
            if a not in known or b not in known or a == b:
                raise GeometryError(f"bad edge {a}-{b}")
            if m < 1:
                raise GeometryError(f"edge {a}-{b} needs multiplicity >= 1")
        for a, b in self.permutation.items():
            if a not in known or b not in known:
                raise GeometryError(f"permutation mentions unknown node {a}->{b}")
        if sorted(self.sigma(x) for x in ids) != sorted(ids):
            raise GeometryError("action is not a permutation")
        by_id = self.by_id
        for x in ids:
            y = self.sigma(x)
            if (by_id[x].kind, by_id[x].genus) != (by_id[y].kind, by_id[y].genus):
                raise GeometryError(f"action moves {x} to a curve of another type")
            if self._power(x, self.order) != x:
                raise GeometryError(f"action does not have order dividing {self.order} on {x}")
        for (a, b), m in self.edges.items():
            if self.multiplicity(self.sigma(a), self.sigma(b)) != m:
                raise GeometryError(f"action does not preserve edge {a}-{b}")

    @property
    def by_id(self):
        return {v.id: v for v in self.nodes}

    def sigma(self, x):
        return self.permutation.get(x, x)

    def _power(self, x, k):
        for _ in range(k):
            x = self.sigma(x)
        return x

    def multiplicity(self, a, b):
        return self.edges.get((a, b), self.edges.get((b, a), 0))

    def orbits(self):
        """Orbits in order of first appearance, members in input order."""
        index = {v.id: i for i, v in enumerate(self.nodes)}
        seen, out = set(), []
        for v in self.nodes:
            if v.id in seen:
                continue
            orb, x = {v.id}, self.sigma(v.id)
            while x not in orb:
                orb.add(x)
                x = self.sigma(x)
            seen |= orb
            out.append(tuple(sorted(orb, key=index.__getitem__)))
        return out

    @classmethod
    def from_dict(cls, data):
        nodes = [Node(str(n["id"]), int(n.get("genus", 0)), n["class"]) for n in data["nodes"]]
        edges = {}
        for a, b, m in data.get("edges", []):
            key = (str(a), str(b))
            if key in edges or key[::-1] in edges:
                raise GeometryError(f"edge {a}-{b} listed twice")
            edges[key] = int(m)
        action = data.get("action", {})
        perm = {str(a): str(b) for a, b in action.get("permutation", {}).items()}
        meta = {k: v for k, v in data.items() if k not in ("nodes", "edges", "action")}
        return cls(nodes, edges, int(action.get("order", 1)), perm, meta)

    def to_dict(self):
        out = dict(self.meta)
        out["nodes"] = [{"id": v.id, "genus": v.genus, "class": v.kind} for v in self.nodes]
        out["edges"] = [[a, b, m] for (a, b), m in self.edges.items()]
        out["action"] = {"order": self.order, "permutation": dict(self.permutation)}
        return out


def load_config(path) -> CurveConfig:
    with open(path, encoding="utf-8") as fh:
        return CurveConfig.from_dict(json.load(fh))


_CONFIG_DIR = Path(__file__).parent / "data" / "configs"


def bundled_configs():
    """``{id: CurveConfig}`` for every configuration shipped with the package."""
    out = {}
    for p in sorted(_CONFIG_DIR.glob("*.json")):
        cfg = load_config(p)
        out[cfg.meta.get("id", p.stem)] = cfg
    return out


def node_gram(cfg: CurveConfig):
    """Intersection matrix of the nodes: ``2g-2`` on the diagonal, multiplicities off it."""
    ids = [v.id for v in cfg.nodes]
    return [
        [self_intersection(cfg.by_id[a].genus) if a == b else cfg.multiplicity(a, b) for b in ids]
        for a in ids
    ]


@dataclass(frozen=True)
class OrbitLatticeResult:
    r: int
    gram: tuple
    orbits: tuple  # (members, kind) per orbit
    basis: tuple  # integer vectors in node coordinates spanning the lattice
    kept: tuple  # orbit indices kept by the greedy pass
    greedy: bool  # False when the kept orbit sums span a proper sublattice

    @property
    def lattice(self):
        return Lattice(self.gram)


def _orbit_vectors(cfg):
    index = {v.id: i for i, v in enumerate(cfg.nodes)}
    orbs = cfg.orbits()
    vecs = []
    for orb in orbs:
        v = [0] * len(cfg.nodes)
        for x in orb:
            v[index[x]] = 1
        vecs.append(v)
    return orbs, vecs


def _row_basis(gram, vectors):
    """Integer combinations of ``vectors`` forming a basis of their span modulo the radical."""
    images = exact.matmul(vectors, gram)
    snf = exact.smith_normal_form(images)
    k = sum(1 for d in snf.diagonal if d)
    coeffs = snf.A[:k]
    return [[sum(c[i] * vectors[i][j] for i in range(len(vectors))) for j in range(len(gram))] for c in coeffs]


def _same_span(gram, a, b):
    ha = exact.hermite_normal_form(exact.matmul(a, gram))
    hb = exact.hermite_normal_form(exact.matmul(b, gram))
    return ha == hb


def orbit_lattice(cfg: CurveConfig) -> OrbitLatticeResult:
    """The lattice spanned by orbit sums of all curves.

    Generators are dropped greedily in input order; if what remains spans
    a proper sublattice of the orbit-sum span, a true basis is used.
    The rank must be 1 plus the number of exceptional orbits.
    """
    G = node_gram(cfg)
    orbs, vecs = _orbit_vectors(cfg)
    kinds = [cfg.by_id[o[0]].kind for o in orbs]
    expected = 1 + sum(1 for k in kinds if k == "exceptional")
    try:
        L, kept = sublattice_from_generators(G, vecs)
    except LatticeError as exc:
        raise GeometryError(f"orbit sums do not span a nondegenerate lattice: {exc}") from None
    basis = [vecs[i] for i in kept]
    greedy = _same_span(G, basis, vecs)
    if not greedy:
        basis = _row_basis(G, vecs)
        L = Lattice(exact.matmul(exact.matmul(basis, G), exact.transpose(basis)))
    if L.rank != expected:
        raise GeometryError(
            f"orbit lattice has rank {L.rank} but there are {expected - 1} exceptional orbits"
        )
    return OrbitLatticeResult(
        L.rank,
        L.gram,
        tuple(zip(orbs, kinds)),
        tuple(map(tuple, basis)),
        tuple(kept),
        greedy,
    )


def curve_lattice(cfg: CurveConfig):
    """The lattice spanned by all curves modulo the radical, with its basis in node coordinates."""
    G = node_gram(cfg)
    basis = _row_basis(G, exact.identity(len(G)))
    return Lattice(exact.matmul(exact.matmul(basis, G), exact.transpose(basis))), basis


def node_lattice_rank(cfg: CurveConfig) -> int:
    return exact.rank(node_gram(cfg))


def is_primitive_in_node_lattice(cfg: CurveConfig, vectors) -> bool:
    """Whether ``vectors`` span a primitive sublattice of the curve lattice modulo its radical."""
    G = node_gram(cfg)
    ambient = [row for row in G if any(row)]
    return is_primitive_sublattice(ambient, exact.matmul([list(v) for v in vectors], G))
