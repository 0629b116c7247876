"""The lattice-polarized mirror map on invariants ``(r, q)``."""

from __future__ import annotations

from dataclasses import dataclass, field

from .forms import FiniteQuadraticForm, FormExpression, forms_isomorphic, length, milgram_signature, negate
from .overlattices import LatticeInvariants, existence_and_uniqueness, splits_off_U

__all__ = [
    "PolarizationInvariants",
    "MirrorResult",
    "PairReport",
    "mirror_invariants",
    "check_mirror_pair",
    "moduli_dimension",
]


@dataclass(frozen=True)
class PolarizationInvariants:
    """Rank ``r`` and form ``q`` of a hyperbolic lattice of signature ``(1, r-1)``."""

    r: int
    q: FiniteQuadraticForm

    def __post_init__(self):
        if isinstance(self.q, FormExpression):
            object.__setattr__(self, "q", self.q.form())
        if not 1 <= self.r <= 19:
            raise ValueError(f"rank {self.r} outside 1..19")

    def signature_consistent(self) -> bool:
        return (1 - (self.r - 1) - milgram_signature(self.q)) % 8 == 0

    def length_ok(self) -> bool:
        return length(self.q) <= self.r


@dataclass(frozen=True)
class MirrorResult:
    mirror: PolarizationInvariants
    u_splits: bool
    fallback: bool = False  # U-splitting failed; uniqueness argued separately
    pinned_unique: bool = False
    notes: tuple = field(default=())


def moduli_dimension(r: int) -> int:
    return 20 - r


def mirror_invariants(inv: PolarizationInvariants) -> MirrorResult:
    """``(r, q) -> (20 - r, -q)`` with the U-splitting check on the complement.

    The orthogonal complement in the K3 lattice has invariants
    ``(2, 20 - r, -q)``.  When the U-splitting criterion fails, the result
    is flagged and the signature/length criterion is tried instead.
    """
    if inv.r >= 20:
        raise ValueError("rank must be at most 19")
    mq = negate(inv.q)
    comp = LatticeInvariants(2, 20 - inv.r, mq)
    ok = splits_off_U(comp)
    out = PolarizationInvariants(20 - inv.r, mq)
    if ok:
        return MirrorResult(out, True)
    pinned = existence_and_uniqueness(comp)
    note = (
        f"complement (2,{20 - inv.r}) has length {length(mq)}: U-splitting criterion fails; "
        + ("existence and uniqueness criterion holds" if pinned else "no criterion applies")
    )
    return MirrorResult(out, False, fallback=True, pinned_unique=pinned, notes=(note,))


@dataclass(frozen=True)
class PairReport:
    rank_ok: bool
    form_ok: bool

    @property
    def ok(self):
        return self.rank_ok and self.form_ok


def check_mirror_pair(a: PolarizationInvariants, b: PolarizationInvariants) -> PairReport:
    return PairReport(a.r + b.r == 20, forms_isomorphic(a.q, negate(b.q)))
