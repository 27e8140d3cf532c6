"""Formal Milnor symbol calculus over tower fields.

Symbols are formal integer combinations of tuples of nonzero elements; no
equality in the K-group is decided. The implemented rewrites are exactly the
ones the boundary map needs: multilinear splitting into unit and uniformizer
slots, sign flips for transpositions, and the pair reduction {p, p} = {p, -1}.
"""
from __future__ import annotations

from .errors import DescriptorMismatch, ValidationError, ZeroArgument
from .fields import Field, FieldElement, field_norm
from .places import Place, evaluate_at, valuation


class MilnorSymbol:
    """Formal sum of q-tuples of nonzero field elements."""

    __slots__ = ("field", "degree", "terms")

    def __init__(self, field: Field, degree: int, terms):
        if degree < 0:
            raise ValidationError("negative symbol degree")
        acc: dict = {}
        for coeff, entries in terms:
            entries = tuple(entries)
            if len(entries) != degree:
                raise ValidationError("entry count does not match the degree")
            for x in entries:
                if not isinstance(x, FieldElement) or x.field != field:
                    raise DescriptorMismatch("entry from the wrong field")
                if x.is_zero():
                    raise ZeroArgument("zero entry in a symbol")
            if coeff:
                acc[entries] = acc.get(entries, 0) + coeff
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(
            self, "terms",
            tuple((c, e) for e, c in acc.items() if c != 0),
        )

    def __setattr__(self, *a):
        raise AttributeError("MilnorSymbol is immutable")

    @classmethod
    def of(cls, *entries) -> "MilnorSymbol":
        if not entries:
            raise ValidationError("empty symbol needs an explicit field")
        return cls(entries[0].field, len(entries), [(1, entries)])

    @classmethod
    def zero(cls, field: Field, degree: int) -> "MilnorSymbol":
        return cls(field, degree, [])

    @classmethod
    def integer(cls, field: Field, n: int) -> "MilnorSymbol":
        return cls(field, 0, [(n, ())])

    def __add__(self, other: "MilnorSymbol") -> "MilnorSymbol":
        if other.field != self.field or other.degree != self.degree:
            raise DescriptorMismatch("mismatched symbols")
        return MilnorSymbol(
            self.field, self.degree, list(self.terms) + list(other.terms)
        )

    def __neg__(self) -> "MilnorSymbol":
        return self.intmul(-1)

    def __sub__(self, other: "MilnorSymbol") -> "MilnorSymbol":
        return self + (-other)

    def intmul(self, n: int) -> "MilnorSymbol":
        return MilnorSymbol(
            self.field, self.degree, [(n * c, e) for c, e in self.terms]
        )

    def is_formally_zero(self) -> bool:
        return not self.terms

    def integer_value(self) -> int:
        if self.degree != 0:
            raise ValidationError("not a degree-0 symbol")
        return sum(c for c, _ in self.terms)

    def k1_value(self) -> FieldElement:
        """Product of entries with multiplicity; the image in F^x."""
        if self.degree != 1:
            raise ValidationError("not a degree-1 symbol")
        acc = self.field.one()
        for c, (x,) in self.terms:
            acc = acc * x**c
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, MilnorSymbol)
            and other.field == self.field
            and other.degree == self.degree
            and sorted(other.terms, key=_term_key) == sorted(self.terms, key=_term_key)
        )

    def __hash__(self):
        return hash((self.field, self.degree,
                     tuple(sorted(self.terms, key=_term_key))))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for c, e in self.terms:
            body = "{" + ", ".join(str(x) for x in e) + "}"
            bits.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(bits)

    __repr__ = __str__


def _term_key(term):
    c, e = term
    return (tuple(str(x) for x in e), c)


def tame_symbol(g: FieldElement, f: FieldElement, P: Place) -> FieldElement:
    """(-1)^{v(g)v(f)} (g^{v(f)} / f^{v(g)})(P) in the residue field."""
    if g.is_zero() or f.is_zero():
        raise ZeroArgument("tame symbol of zero")
    vg = valuation(g, P)
    vf = valuation(f, P)
    h = g**vf / f**vg
    val = evaluate_at(h, P)
    if (vg * vf) % 2 == 1:
        val = -val
    return val


def boundary(sym: MilnorSymbol, P: Place) -> MilnorSymbol:
    """The residue-field boundary of a symbol over k(t) at P."""
    K = sym.field
    if K != P.K:
        raise DescriptorMismatch("symbol does not live over the place's field")
    E = P.residue_field
    if sym.degree == 0:
        raise ValidationError("boundary needs degree >= 1")
    if sym.degree == 1:
        total = 0
        for c, (x,) in sym.terms:
            total += c * valuation(x, P)
        return MilnorSymbol.integer(E, total)

    pi = P.uniformizer()
    out = []
    for coeff, entries in sym.terms:
        vals = [valuation(x, P) for x in entries]
        units = [x * pi ** (-v) for x, v in zip(entries, vals)]
        out.extend(_boundary_monomial(coeff, units, vals, P))
    return MilnorSymbol(E, sym.degree - 1, out)


def _boundary_monomial(coeff: int, units, vals, P: Place):
    """Expand {u_1 pi^{v_1}, ...} multilinearly and reduce each piece."""
    E = P.residue_field
    q = len(units)
    pieces = [(coeff, [])]  # entry lists of ('u', i) / ('pi',)
    for i in range(q):
        grown = []
        for c, picked in pieces:
            grown.append((c, picked + [("u", i)]))
            if vals[i]:
                grown.append((c * vals[i], picked + [("pi",)]))
        pieces = grown

    results = []
    minus_one = -E.one()
    for c, picked in pieces:
        npi = sum(1 for p in picked if p[0] == "pi")
        if npi == 0:
            continue  # all-unit monomials have boundary zero
        # sign for shuffling every pi-slot to the tail, order preserved
        sign = 1
        seen_pi = 0
        for p in picked:
            if p[0] == "pi":
                seen_pi += 1
            elif seen_pi % 2 == 1:
                sign = -sign
        bar = [evaluate_at(units[i], P) for p in picked if p[0] == "u"
               for i in [p[1]]]
        # reduce the trailing pi-block: {.., pi, pi} = {.., pi, -1}, then the
        # new unit -1 hops back over the remaining block
        while npi > 1:
            if (npi - 1) % 2 == 1:
                sign = -sign
            bar.append(minus_one)
            npi -= 1
        entries = tuple(bar)
        if any(x.is_zero() for x in entries):
            raise ZeroArgument("unit part evaluated to zero")
        results.append((c * sign, entries))
    return results


def weil_reciprocity_product(f_fact, g_fact, base: Field) -> FieldElement:
    """prod over all places of N_{k(P)/k} of the tame symbol of (f, g)."""
    from .places import merge_places

    K = f_fact.K
    if g_fact.K != K:
        raise DescriptorMismatch("pair over different function fields")
    f = f_fact.element()
    g = g_fact.element()
    places = merge_places(f_fact.places(), g_fact.places(),
                          [Place.infinite(K)])
    acc = base.one()
    for P in places:
        t = tame_symbol(f, g, P)
        acc = acc * field_norm(t, base)
    return acc
