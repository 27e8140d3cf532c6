"""Laurent series with explicit precision tracking.

A series stores exact coefficients from `order` upward; coefficients between
the stored window and `prec` are exactly zero, anything at or beyond `prec` is
unknown. The zero-within-precision series keeps order == prec.
"""
from __future__ import annotations

from .errors import (
    DescriptorMismatch,
    DivisionByZero,
    InsufficientPrecision,
    ValidationError,
    ZeroLeadingTerm,
)


class LaurentSeries:
    __slots__ = ("field", "order", "coeffs", "prec")

    def __init__(self, field, order: int, coeffs, prec: int):
        coeffs = tuple(coeffs)
        if coeffs and coeffs[0].is_zero():
            raise ZeroLeadingTerm("leading coefficient is zero")
        if order + len(coeffs) > prec:
            raise ValidationError("coefficients extend past the stated precision")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "order", prec if not coeffs else order)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def _make(cls, field, order: int, coeffs: list, prec: int) -> "LaurentSeries":
        """Normalizing constructor: clips to prec, strips zero fringes."""
        coeffs = list(coeffs)[: max(0, prec - order)]
        while coeffs and coeffs[0].is_zero():
            coeffs.pop(0)
            order += 1
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            order = prec
        return cls(field, order, coeffs, prec)

    @classmethod
    def zero(cls, field, prec: int) -> "LaurentSeries":
        return cls(field, prec, (), prec)

    @classmethod
    def const(cls, field, c, prec: int) -> "LaurentSeries":
        return cls._make(field, 0, [c], prec)

    @classmethod
    def uniformizer(cls, field, prec: int, power: int = 1) -> "LaurentSeries":
        return cls._make(field, power, [field.one()], prec)

    @classmethod
    def from_coeffs(cls, field, order: int, coeffs, prec: int) -> "LaurentSeries":
        return cls._make(field, order, list(coeffs), prec)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int):
        if k >= self.prec:
            raise InsufficientPrecision(
                f"coefficient {k} beyond precision {self.prec}"
            )
        if k < self.order or k >= self.order + len(self.coeffs):
            return self.field.zero()
        return self.coeffs[k - self.order]

    def _check(self, other: "LaurentSeries"):
        if self.field != other.field:
            raise DescriptorMismatch("series over different coefficient fields")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return LaurentSeries._make(
                other.field, other.order, list(other.coeffs), prec
            )
        if other.is_zero():
            return LaurentSeries._make(self.field, self.order, list(self.coeffs), prec)
        order = min(self.order, other.order)
        end = min(prec, max(self.order + len(self.coeffs), other.order + len(other.coeffs)))
        out = []
        for k in range(order, end):
            a = self.coeffs[k - self.order] if self.order <= k < self.order + len(self.coeffs) else self.field.zero()
            b = other.coeffs[k - other.order] if other.order <= k < other.order + len(other.coeffs) else self.field.zero()
            out.append(a + b)
        return LaurentSeries._make(self.field, order, out, prec)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.field, self.order, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        prec = min(self.prec + other.order, other.prec + self.order)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(self.field, prec)
        order = self.order + other.order
        n = prec - order
        out = [self.field.zero()] * max(0, n)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + a * b
        return LaurentSeries._make(self.field, order, out, prec)

    def scale(self, c) -> "LaurentSeries":
        if c.is_zero():
            return LaurentSeries.zero(self.field, self.prec)
        return LaurentSeries(
            self.field, self.order, tuple(c * x for x in self.coeffs), self.prec
        )

    def shift(self, k: int) -> "LaurentSeries":
        return LaurentSeries(self.field, self.order + k, self.coeffs, self.prec + k)

    def inverse(self) -> "LaurentSeries":
        if self.is_zero():
            raise DivisionByZero("inverting a series that is zero within precision")
        n = self.prec - self.order
        c0inv = self.coeffs[0].inverse()
        inv = [c0inv]
        for k in range(1, n):
            acc = self.field.zero()
            for j in range(max(0, k - len(self.coeffs) + 1), k):
                acc = acc + inv[j] * self.coeffs[k - j]
            inv.append(-(acc * c0inv))
        return LaurentSeries._make(self.field, -self.order, inv, self.prec - 2 * self.order)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self * other.inverse()

    def __pow__(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            width = max(1, self.prec - self.order)
            return LaurentSeries._make(self.field, 0, [self.field.one()], width)
        base = self
        result = None
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "LaurentSeries":
        out = [c * (self.order + i) for i, c in enumerate(self.coeffs)]
        return LaurentSeries._make(self.field, self.order - 1, out, self.prec - 1)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeries)
            and other.field == self.field
            and other.order == self.order
            and other.coeffs == self.coeffs
            and other.prec == self.prec
        )

    def __hash__(self):
        return hash((self.field, self.order, self.coeffs, self.prec))

    def __str__(self):
        if self.is_zero():
            return f"O(u^{self.prec})"
        bits = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            k = self.order + i
            cs = str(c)
            if "+" in cs[1:] or "-" in cs[1:] or " " in cs or "/" in cs:
                cs = f"({cs})"
            if k == 0:
                bits.append(cs)
            else:
                u = "u" if k == 1 else f"u^{k}"
                bits.append(u if cs == "1" else f"{cs}*{u}")
        bits.append(f"O(u^{self.prec})")
        return " + ".join(bits)

    __repr__ = __str__
