"""S-indexed families of classical forms: the characteristic-zero model of
truncated de Rham-Witt groups through ghost coordinates.

Every operator is defined by its effect on coordinates: products are
coordinatewise wedges, d carries a 1/s twist, the Frobenius reindexes, and
the Verschiebung is the unique rule compatible with degree zero and F_n V_n = n.
"""
from __future__ import annotations

from .errors import (
    CharacteristicObstruction,
    DescriptorMismatch,
    EmptyTruncation,
    NotSubTruncation,
    ValidationError,
    ZeroArgument,
)
from .fields import Field, FieldElement, embed
from .forms import DifferentialForm, dlog, trace_form, embed_form
from .witt import TruncationSet, WittVector


class GhostForm:
    __slots__ = ("S", "field", "degree", "coords")

    def __init__(self, S: TruncationSet, field: Field, degree: int, coords: dict):
        if field.char != 0:
            raise CharacteristicObstruction(
                "ghost-coordinate forms need characteristic zero"
            )
        cc = {}
        for s in S:
            w = coords.get(s)
            if w is None:
                w = DifferentialForm.zero(field, degree)
            if not isinstance(w, DifferentialForm) or w.field != field:
                raise DescriptorMismatch(f"coordinate {s} over the wrong field")
            if w.degree != degree and not w.is_zero():
                raise ValidationError(f"coordinate {s} has degree {w.degree}")
            if w.degree != degree:
                w = DifferentialForm.zero(field, degree)
            cc[s] = w
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coords", cc)

    def __setattr__(self, *a):
        raise AttributeError("GhostForm is immutable")

    # -------------------------------------------------------------- builders

    @classmethod
    def zero(cls, S: TruncationSet, field: Field, degree: int = 0) -> "GhostForm":
        return cls(S, field, degree, {})

    @classmethod
    def from_witt(cls, w: WittVector) -> "GhostForm":
        g = w.ghost()
        return cls(
            w.S, w.ring, 0, {s: DifferentialForm.function(v) for s, v in g.items()}
        )

    @classmethod
    def constant(cls, S: TruncationSet, values: dict, field: Field) -> "GhostForm":
        return cls(
            S, field, 0, {s: DifferentialForm.function(v) for s, v in values.items()}
        )

    def to_witt(self) -> WittVector:
        if self.degree != 0:
            raise ValidationError("only degree-0 families unghost")
        g = {s: w.constant_value() for s, w in self.coords.items()}
        return WittVector.unghost(g, self.S, self.field)

    def coordinate(self, s: int) -> DifferentialForm:
        return self.coords[s]

    def is_zero(self) -> bool:
        return all(w.is_zero() for w in self.coords.values())

    # ------------------------------------------------------------ arithmetic

    def _check(self, other: "GhostForm"):
        if not isinstance(other, GhostForm):
            raise DescriptorMismatch("expected a ghost-coordinate form")
        if other.S != self.S or other.field != self.field:
            raise DescriptorMismatch("mismatched S or field")

    def __add__(self, other):
        self._check(other)
        return GhostForm(
            self.S, self.field, self.degree,
            {s: self.coords[s] + other.coords[s] for s in self.S},
        )

    def __neg__(self):
        return GhostForm(
            self.S, self.field, self.degree,
            {s: -self.coords[s] for s in self.S},
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, WittVector):
            other = GhostForm.from_witt(other)
        self._check(other)
        return GhostForm(
            self.S, self.field, self.degree + other.degree,
            {s: self.coords[s] * other.coords[s] for s in self.S},
        )

    def __rmul__(self, other):
        if isinstance(other, WittVector):
            return GhostForm.from_witt(other) * self
        return NotImplemented

    def intmul(self, n: int) -> "GhostForm":
        return GhostForm(
            self.S, self.field, self.degree,
            {s: self.coords[s].scale(n) for s in self.S},
        )

    def __eq__(self, other):
        return (
            isinstance(other, GhostForm)
            and other.S == self.S
            and other.field == self.field
            and other.degree == self.degree
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((self.S, self.field, self.degree,
                     tuple(sorted(self.coords.items(), key=lambda t: t[0]))))

    def __str__(self):
        return "{" + ", ".join(f"{s}: {self.coords[s]}" for s in self.S) + "}"

    __repr__ = __str__

    # ------------------------------------------------------------- operators

    def d(self) -> "GhostForm":
        inv = {s: self.field.from_int(s).inverse() for s in self.S}
        return GhostForm(
            self.S, self.field, self.degree + 1,
            {s: self.coords[s].d().scale(inv[s]) for s in self.S},
        )

    def frobenius(self, n: int) -> "GhostForm":
        Sn = self.S.quotient(n)
        return GhostForm(
            Sn, self.field, self.degree, {t: self.coords[t * n] for t in Sn}
        )

    def verschiebung(self, n: int, S: TruncationSet) -> "GhostForm":
        if S.quotient(n) != self.S:
            raise NotSubTruncation(f"target {S!r} has {S!r}/{n} != {self.S!r}")
        coords = {}
        for s in S:
            if s % n == 0:
                coords[s] = self.coords[s // n].scale(n)
        return GhostForm(S, self.field, self.degree, coords)

    def restrict(self, T: TruncationSet) -> "GhostForm":
        if not T.is_subset(self.S):
            raise NotSubTruncation(f"{T!r} is not contained in {self.S!r}")
        return GhostForm(
            T, self.field, self.degree, {s: self.coords[s] for s in T}
        )

    def trace_to(self, F: Field) -> "GhostForm":
        return GhostForm(
            self.S, F, self.degree,
            {s: trace_form(self.coords[s], F) for s in self.S},
        )

    def embed_to(self, E: Field) -> "GhostForm":
        return GhostForm(
            self.S, E, self.degree,
            {s: embed_form(self.coords[s], E) for s in self.S},
        )


def dlog_teich(f: FieldElement, S: TruncationSet) -> GhostForm:
    """dlog of a Teichmüller unit: every ghost coordinate is dlog f."""
    if f.is_zero():
        raise ZeroArgument("dlog of zero")
    w = dlog(f)
    return GhostForm(S, f.field, 1, {s: w for s in S})


def milnor_dlog(entries, S: TruncationSet, field: Field = None) -> GhostForm:
    """dlog[x_1]...dlog[x_q]; with no entries, the unit family [1]."""
    entries = list(entries)
    if not entries:
        if field is None:
            raise ValidationError("field needed for the empty product")
        return GhostForm.from_witt(WittVector.one(S, field))
    acc = dlog_teich(entries[0], S)
    for x in entries[1:]:
        acc = acc * dlog_teich(x, S)
    return acc
