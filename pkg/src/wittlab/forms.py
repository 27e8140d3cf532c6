"""Absolute Kähler differential forms over tower fields.

A form is stored in the basis of differentials of the transcendental
variables only: differentials of algebraic generators are eliminated at
construction through implicit differentiation of their minimal polynomials,
so equal forms have equal representations.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import DescriptorMismatch, ValidationError, ZeroArgument
from .fields import (
    Field,
    FieldElement,
    d_components,
    embed,
    field_trace,
    generators,
    map_element,
)


def _order_map(K: Field) -> dict:
    return {n: i for i, n in enumerate(generators(K))}


def _merge_keys(a: tuple, b: tuple, order: dict):
    """Concatenate two sorted differential words; returns (key, sign) or None."""
    if set(a) & set(b):
        return None
    merged = []
    i = j = 0
    sign = 1
    while i < len(a) and j < len(b):
        if order[a[i]] < order[b[j]]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] moves left across the remaining entries of a
            if (len(a) - i) % 2 == 1:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), sign


class DifferentialForm:
    __slots__ = ("field", "degree", "terms")

    def __init__(self, field: Field, degree: int, terms: dict):
        if degree < 0:
            raise ValidationError("negative form degree")
        order = _order_map(field)
        clean = {}
        for key, c in terms.items():
            key = tuple(key)
            if len(key) != degree:
                raise ValidationError(f"key {key} has wrong length for degree {degree}")
            if len(set(key)) != len(key):
                raise ValidationError(f"repeated differential in {key}")
            for n in key:
                if n not in order:
                    raise ValidationError(f"{n!r} is not a variable of {field!r}")
            if list(key) != sorted(key, key=order.__getitem__):
                raise ValidationError(f"key {key} is not in canonical order")
            if not isinstance(c, FieldElement) or c.field != field:
                raise DescriptorMismatch("coefficient field mismatch")
            if not c.is_zero():
                clean[key] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("DifferentialForm is immutable")

    # -------------------------------------------------------------- builders

    @classmethod
    def zero(cls, field: Field, degree: int = 0) -> "DifferentialForm":
        return cls(field, degree, {})

    @classmethod
    def function(cls, x: FieldElement) -> "DifferentialForm":
        return cls(x.field, 0, {(): x})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: tuple) -> FieldElement:
        return self.terms.get(tuple(key), self.field.zero())

    def constant_value(self) -> FieldElement:
        if self.degree != 0:
            raise ValidationError("not a 0-form")
        return self.terms.get((), self.field.zero())

    # ------------------------------------------------------------ arithmetic

    def _coerce(self, other):
        if isinstance(other, DifferentialForm):
            return other
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DescriptorMismatch("scalar from a different field")
            return DifferentialForm.function(other)
        if isinstance(other, int):
            return DifferentialForm.function(self.field.from_int(other))
        if isinstance(other, Fraction):
            return DifferentialForm.function(self.field.from_fraction(other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.field != self.field:
            raise DescriptorMismatch("forms over different fields")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise ValidationError("adding forms of different degrees")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, self.field.zero()) + c
        return DifferentialForm(self.field, self.degree, terms)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialForm(
            self.field, self.degree, {k: -c for k, c in self.terms.items()}
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "DifferentialForm":
        if isinstance(c, int):
            c = self.field.from_int(c)
        if not isinstance(c, FieldElement):
            c = self.field.from_fraction(c)
        return DifferentialForm(
            self.field, self.degree, {k: v * c for k, v in self.terms.items()}
        )

    def __mul__(self, other):
        """Wedge product (0-forms act as scalars)."""
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.field != self.field:
            raise DescriptorMismatch("forms over different fields")
        order = _order_map(self.field)
        deg = self.degree + other.degree
        out: dict = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                m = _merge_keys(ka, kb, order)
                if m is None:
                    continue
                key, sign = m
                c = ca * cb if sign == 1 else -(ca * cb)
                out[key] = out.get(key, self.field.zero()) + c
        return DifferentialForm(self.field, deg, out)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self

    def __eq__(self, other):
        return (
            isinstance(other, DifferentialForm)
            and other.field == self.field
            and other.degree == self.degree
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash(
            (self.field, self.degree, tuple(sorted(self.terms.items())))
        )

    # ------------------------------------------------------------- calculus

    def d(self) -> "DifferentialForm":
        order = _order_map(self.field)
        out: dict = {}
        for key, c in self.terms.items():
            for v, dc in d_components(c).items():
                m = _merge_keys((v,), key, order)
                if m is None:
                    continue
                mkey, sign = m
                term = dc if sign == 1 else -dc
                out[mkey] = out.get(mkey, self.field.zero()) + term
        return DifferentialForm(self.field, self.degree + 1, out)

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms, key=lambda k: k):
            c = self.terms[key]
            word = "^".join(f"d{n}" for n in key) if key else ""
            bits.append(f"({c}){'*' + word if word else ''}")
        return " + ".join(bits)

    __repr__ = __str__


def differential(x: FieldElement) -> DifferentialForm:
    """dx as a 1-form (algebraic generators eliminated)."""
    return DifferentialForm(x.field, 1, {(v,): c for v, c in d_components(x).items()})


def dlog(x: FieldElement) -> DifferentialForm:
    if x.is_zero():
        raise ZeroArgument("dlog of zero")
    return differential(x).scale(x.inverse())


def wedge(*forms: DifferentialForm) -> DifferentialForm:
    if not forms:
        raise ValidationError("empty wedge")
    acc = forms[0]
    for f in forms[1:]:
        acc = acc * f
    return acc


def trace_form(omega: DifferentialForm, F: Field) -> DifferentialForm:
    """Coefficientwise field trace along a finite extension of F in the tower."""
    return DifferentialForm(
        F, omega.degree, {k: field_trace(c, F) for k, c in omega.terms.items()}
    )


def embed_form(omega: DifferentialForm, E: Field) -> DifferentialForm:
    return DifferentialForm(
        E, omega.degree, {k: embed(c, E) for k, c in omega.terms.items()}
    )


def pullback_form(omega: DifferentialForm, target: Field, images: dict,
                  dimages: dict) -> DifferentialForm:
    """Apply a ring map to a form: coefficients through `images`, each basis
    differential dv through the 1-form `dimages[v]`."""
    out = DifferentialForm.zero(target, omega.degree)
    for key, c in omega.terms.items():
        t = DifferentialForm.function(map_element(c, target, images))
        for v in key:
            t = t * dimages[v]
        out = out + t
    return out
