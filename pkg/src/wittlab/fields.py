"""Field towers with canonical exact arithmetic.

A field descriptor is one of: the rationals, a prime field F_p (p an odd
prime), a rational function field over a base descriptor, or a simple
algebraic extension base[g]/(minpoly). Towers nest arbitrarily. Every element
owns a canonical payload, so equality is payload comparison:

  rationals          Fraction in lowest terms
  prime field        int in 0..p-1
  function field     coprime (num, den) MPoly pair, den lex-monic
  simple extension   coefficient tuple of length deg(minpoly), reduced

Only same-descriptor elements combine; ints and Fractions promote implicitly.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import (
    CharacteristicObstruction,
    DescriptorMismatch,
    DivisionByZero,
    NotAFiniteExtension,
    UnknownVariable,
    ValidationError,
)
from .polys import (
    MPoly,
    mpoly_gcd,
    udivmod,
    uextgcd,
    ugcd,
    umul,
    uderiv,
    urem,
    usquarefree,
    utrim,
)


class Field:
    """Descriptor base class; concrete kinds implement payload arithmetic."""

    char: int = 0

    def element(self, payload) -> "FieldElement":
        return FieldElement(self, payload)

    def zero(self) -> "FieldElement":
        return self.element(self._zero())

    def one(self) -> "FieldElement":
        return self.element(self._one())

    def from_int(self, n: int) -> "FieldElement":
        return self.from_fraction(Fraction(n))

    def embed(self, x: "FieldElement") -> "FieldElement":
        return embed(x, self)

    def __ne__(self, other):
        return not self.__eq__(other)


class RationalField(Field):
    char = 0

    def _zero(self):
        return Fraction(0)

    def _one(self):
        return Fraction(1)

    def from_fraction(self, q) -> "FieldElement":
        return self.element(Fraction(q))

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        if a == 0:
            raise DivisionByZero("1/0 in Q")
        return 1 / a

    def _is_zero(self, a):
        return a == 0

    def _is_one(self, a):
        return a == 1

    def _str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


QQ = RationalField()


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValidationError(f"{p} is not prime")
        if p == 2:
            raise CharacteristicObstruction("characteristic 2 is out of scope")
        self.p = p
        self.char = p

    def _zero(self):
        return 0

    def _one(self):
        return 1

    def from_int(self, n: int) -> "FieldElement":
        return self.element(n % self.p)

    def from_fraction(self, q) -> "FieldElement":
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise DivisionByZero(f"denominator divisible by {self.p}")
        return self.element(q.numerator * pow(q.denominator, -1, self.p) % self.p)

    def _add(self, a, b):
        return (a + b) % self.p

    def _neg(self, a):
        return (-a) % self.p

    def _mul(self, a, b):
        return (a * b) % self.p

    def _inv(self, a):
        if a == 0:
            raise DivisionByZero(f"1/0 in F_{self.p}")
        return pow(a, -1, self.p)

    def _is_zero(self, a):
        return a == 0

    def _is_one(self, a):
        return a == 1

    def _str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class FunctionField(Field):
    """Rational functions over `base` in the listed variables."""

    def __init__(self, base: Field, names):
        names = tuple(names)
        if not names:
            raise ValidationError("function field needs at least one variable")
        taken = set(all_symbols(base))
        for n in names:
            if not (isinstance(n, str) and n.isidentifier()):
                raise ValidationError(f"bad variable name {n!r}")
            if n in taken:
                raise ValidationError(f"variable {n!r} already used in the tower")
            taken.add(n)
        self.base = base
        self.names = names
        self.nvars = len(names)
        self.char = base.char

    def _zero(self):
        return (MPoly.zero(self.base, self.nvars), self._one_poly())

    def _one(self):
        return (self._one_poly(), self._one_poly())

    def _one_poly(self) -> MPoly:
        return MPoly.const(self.base, self.nvars, self.base.one())

    def from_fraction(self, q) -> "FieldElement":
        return self._lift(self.base.from_fraction(q))

    def _lift(self, x: "FieldElement") -> "FieldElement":
        return self.element((MPoly.const(self.base, self.nvars, x), self._one_poly()))

    def var(self, name: str) -> "FieldElement":
        return var_element(self, name)

    def _make(self, num: MPoly, den: MPoly) -> "FieldElement":
        return self.element(self._normalize(num, den))

    def from_upolys(self, num: list, den: list) -> "FieldElement":
        """Element from univariate coefficient lists over the base (single-var fields)."""
        if self.nvars != 1:
            raise ValidationError("from_upolys needs a single-variable field")
        return self._make(
            MPoly.from_upoly(self.base, num), MPoly.from_upoly(self.base, den)
        )

    def _normalize(self, num: MPoly, den: MPoly):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            return (MPoly.zero(self.base, self.nvars), self._one_poly())
        if not num.is_const() and not den.is_const():
            if isinstance(self.base, FunctionField):
                g = _nested_gcd(num, den, self)
            else:
                g = mpoly_gcd(num, den)
            if not g.is_const():
                num = num.divexact(g)
                den = den.divexact(g)
        _, lc = den.lex_leading()
        if not lc.is_one():
            inv = self.base.one() / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return (num, den)

    def _gcd(self, A: MPoly, B: MPoly) -> MPoly:
        if A.is_const() or B.is_const():
            return self._one_poly()
        if isinstance(self.base, FunctionField):
            return _nested_gcd(A, B, self)
        return mpoly_gcd(A, B)

    def _zero_pair(self):
        return (MPoly.zero(self.base, self.nvars), self._one_poly())

    def _canon(self, num: MPoly, den: MPoly):
        _, lc = den.lex_leading()
        if lc.is_one():
            return (num, den)
        inv = self.base.one() / lc
        return (num.scale(inv), den.scale(inv))

    # Addition and multiplication keep fractions canonical the classical way:
    # gcd the denominators (numerators stay coprime to their denominators by
    # the representation invariant), so no gcd of full cross-products is ever
    # taken.

    def _add(self, a, b):
        n1, d1 = a
        n2, d2 = b
        if d1 == d2:
            num = n1 + n2
            if num.is_zero():
                return self._zero_pair()
            h = self._gcd(num, d1)
            if h.is_const():
                return (num, d1)
            return self._canon(num.divexact(h), d1.divexact(h))
        g = self._gcd(d1, d2)
        if g.is_const():
            return self._canon(n1 * d2 + n2 * d1, d1 * d2)
        e1 = d1.divexact(g)
        e2 = d2.divexact(g)
        num = n1 * e2 + n2 * e1
        if num.is_zero():
            return self._zero_pair()
        h = self._gcd(num, g)
        if not h.is_const():
            num = num.divexact(h)
            g = g.divexact(h)
        return self._canon(num, g * e1 * e2)

    def _neg(self, a):
        return (-a[0], a[1])

    def _mul(self, a, b):
        n1, d1 = a
        n2, d2 = b
        if n1.is_zero() or n2.is_zero():
            return self._zero_pair()
        g1 = self._gcd(n1, d2)
        if not g1.is_const():
            n1 = n1.divexact(g1)
            d2 = d2.divexact(g1)
        g2 = self._gcd(n2, d1)
        if not g2.is_const():
            n2 = n2.divexact(g2)
            d1 = d1.divexact(g2)
        return self._canon(n1 * n2, d1 * d2)

    def _inv(self, a):
        num, den = a
        if num.is_zero():
            raise DivisionByZero("1/0 in function field")
        _, lc = num.lex_leading()
        if lc.is_one():
            return (den, num)
        inv = self.base.one() / lc
        return (den.scale(inv), num.scale(inv))

    def _is_zero(self, a):
        return a[0].is_zero()

    def _is_one(self, a):
        return a[0] == a[1]

    def _str(self, a):
        num, den = a
        ns = num.str_with(self.names)
        if den.is_const() and den.const_value().is_one():
            return ns
        ds = den.str_with(self.names)
        ns = f"({ns})" if " " in ns or "+" in ns[1:] else ns
        ds = f"({ds})" if " " in ds or "+" in ds[1:] or "*" in ds or "^" in ds else ds
        return f"{ns}/{ds}"

    def __eq__(self, other):
        return (
            isinstance(other, FunctionField)
            and other.names == self.names
            and other.base == self.base
        )

    def __hash__(self):
        return hash(("FF", self.names, self.base))

    def __repr__(self):
        return f"{self.base!r}({','.join(self.names)})"


def _tower_width(F) -> int:
    """Total count of function-field variables in the tower under F."""
    n = 0
    while isinstance(F, FunctionField):
        n += F.nvars
        F = F.base
    return n


def _tower_bottom(F):
    while isinstance(F, FunctionField):
        F = F.base
    return F


def _flatten_mpoly(p: MPoly, F: "FunctionField"):
    """Clear nested denominators out of a numerator/denominator payload of F.

    Returns (P, D) with P an MPoly over the tower bottom in _tower_width(F)
    variables (inner tower variables first, F's own variables last) and D a
    common denominator involving only the inner variables, so that p = P / D
    after regrouping.  D is a unit for gcd purposes over F."""
    B = F.base
    if not isinstance(B, FunctionField):
        return p, MPoly.const(B, F.nvars, B.one())
    bottom = _tower_bottom(F)
    total = _tower_width(F)
    pairs = {e: _flatten_fraction(c) for e, c in p.terms.items()}
    inner = total - F.nvars
    D = MPoly.const(bottom, inner, bottom.one())
    for _, d in pairs.values():
        g = mpoly_gcd(D, d)
        D = D.divexact(g) * d
    out: dict = {}
    for e, (n, d) in pairs.items():
        contrib = n * D.divexact(d)
        for ie, c in contrib.terms.items():
            out[ie + e] = c
    P = MPoly(bottom, total, out, clean=True)
    D_emb = MPoly(
        bottom, total,
        {ie + (0,) * F.nvars: c for ie, c in D.terms.items()}, clean=True)
    return P, D_emb


def _flatten_fraction(c):
    """Element of a function-field tower -> (num, den) over the tower bottom."""
    F = c.field
    num, den = c.payload
    PN, DN = _flatten_mpoly(num, F)
    PD, DD = _flatten_mpoly(den, F)
    return PN * DD, DN * PD


def _unflatten_mpoly(P: MPoly, F: "FunctionField") -> MPoly:
    """Regroup a bottom-field MPoly in _tower_width(F) variables as an MPoly
    over F.base in F.nvars variables with denominator-free coefficients."""
    B = F.base
    if not isinstance(B, FunctionField):
        return P
    inner = _tower_width(F) - F.nvars
    bottom = _tower_bottom(F)
    groups: dict = {}
    for e, c in P.terms.items():
        groups.setdefault(e[inner:], {})[e[:inner]] = c
    terms = {}
    for oe, inner_terms in groups.items():
        ip = MPoly(bottom, inner, inner_terms, clean=True)
        terms[oe] = B.element((_unflatten_mpoly(ip, B), B._one_poly()))
    return MPoly(B, F.nvars, terms, clean=True)


def _specialize_inner(P: MPoly, inner: int, points: list, bottom):
    """Evaluate the inner variables at the given points; coefficient list in
    the single remaining outer variable."""
    out: dict = {}
    for e, c in P.terms.items():
        v = c
        for i, k in enumerate(e[:inner]):
            if k:
                v = v * points[i] ** k
        d = e[inner]
        out[d] = out[d] + v if d in out else v
    deg = max(out) if out else -1
    return utrim([out.get(i, bottom.zero()) for i in range(deg + 1)])


def _nested_gcd(num: MPoly, den: MPoly, F: "FunctionField") -> MPoly:
    """gcd of payload polynomials over a nested function-field base.

    Euclidean remainder sequences over a rational function field suffer severe
    coefficient growth, so the pair is flattened to the tower bottom where the
    primitive pseudo-remainder sequence stays small.  A specialization probe
    settles the common coprime case without any polynomial gcd at all: when
    both leading coefficients survive evaluation of the inner variables and
    the specialized gcd is trivial, the true gcd is a unit."""
    PN, _ = _flatten_mpoly(num, F)
    PD, _ = _flatten_mpoly(den, F)
    bottom = PN.field
    inner = PN.nvars - F.nvars
    if F.nvars == 1 and inner:
        outer = PN.nvars - 1
        for probe in (2, -3, 5):
            points = [bottom.from_int(probe + 7 * i) for i in range(inner)]
            un = _specialize_inner(PN, inner, points, bottom)
            ud = _specialize_inner(PD, inner, points, bottom)
            if (len(un) - 1 != PN.degree_in(outer)
                    or len(ud) - 1 != PD.degree_in(outer)):
                continue
            if len(ugcd(bottom, un, ud)) == 1:
                return MPoly.const(F.base, F.nvars, F.base.one())
            break
    return _unflatten_mpoly(mpoly_gcd(PN, PD), F)


class SimpleExtension(Field):
    """base[g]/(minpoly); serves number fields and relative extensions alike.

    The minpoly must be monic and squarefree; irreducibility is the caller's
    responsibility and surfaces as DivisionByZero if violated by an inversion.
    """

    def __init__(self, base: Field, minpoly, name: str):
        if not (isinstance(name, str) and name.isidentifier()):
            raise ValidationError(f"bad generator name {name!r}")
        if name in all_symbols(base):
            raise ValidationError(f"generator {name!r} already used in the tower")
        coeffs = [_promote(base, c) for c in minpoly]
        coeffs = utrim(coeffs)
        if len(coeffs) < 2:
            raise ValidationError("minpoly must have degree at least 1")
        if not coeffs[-1].is_one():
            inv = base.one() / coeffs[-1]
            coeffs = [c * inv for c in coeffs]
        if not usquarefree(base, coeffs):
            raise ValidationError("minpoly is not squarefree")
        self.base = base
        self.minpoly = tuple(coeffs)
        self.name = name
        self.deg = len(coeffs) - 1
        self.char = base.char

    def _pad(self, cs: list) -> tuple:
        cs = list(cs) + [self.base.zero()] * (self.deg - len(cs))
        return tuple(cs[: self.deg])

    def _zero(self):
        return self._pad([])

    def _one(self):
        return self._pad([self.base.one()])

    def from_fraction(self, q) -> "FieldElement":
        return self._lift(self.base.from_fraction(q))

    def _lift(self, x: "FieldElement") -> "FieldElement":
        return self.element(self._pad([x]))

    def gen(self) -> "FieldElement":
        return self.element(self._pad([self.base.zero(), self.base.one()]))

    def from_coeffs(self, cs) -> "FieldElement":
        cs = [_promote(self.base, c) for c in cs]
        return self.element(self._pad(urem(self.base, cs, list(self.minpoly))))

    def _add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _neg(self, a):
        return tuple(-x for x in a)

    def _mul(self, a, b):
        prod = umul(self.base, utrim(list(a)), utrim(list(b)))
        return self._pad(urem(self.base, prod, list(self.minpoly)))

    def _inv(self, a):
        pa = utrim(list(a))
        if not pa:
            raise DivisionByZero("1/0 in extension")
        g, s, _ = uextgcd(self.base, pa, list(self.minpoly))
        if len(g) != 1:
            raise DivisionByZero("minpoly is not irreducible: zero divisor inverted")
        return self._pad(urem(self.base, s, list(self.minpoly)))

    def _is_zero(self, a):
        return all(c.is_zero() for c in a)

    def _is_one(self, a):
        return a[0].is_one() and all(c.is_zero() for c in a[1:])

    def _str(self, a):
        bits = []
        for i in range(self.deg - 1, -1, -1):
            c = a[i]
            if c.is_zero():
                continue
            mono = self.name if i == 1 else (f"{self.name}^{i}" if i else "")
            cs = str(c)
            if mono:
                if cs == "1":
                    bits.append(mono)
                elif cs == "-1":
                    bits.append(f"-{mono}")
                else:
                    if "+" in cs[1:] or "-" in cs[1:] or "/" in cs or " " in cs:
                        cs = f"({cs})"
                    bits.append(f"{cs}*{mono}")
            else:
                bits.append(cs)
        return " + ".join(bits).replace("+ -", "- ") if bits else "0"

    def __eq__(self, other):
        return (
            isinstance(other, SimpleExtension)
            and other.name == self.name
            and other.minpoly == self.minpoly
            and other.base == self.base
        )

    def __hash__(self):
        return hash(("EXT", self.name, self.minpoly, self.base))

    def __repr__(self):
        pi = "+".join(
            f"({c})*T^{i}" if i else f"({c})" for i, c in enumerate(self.minpoly)
        )
        return f"{self.base!r}[{self.name}]/({pi})"


def number_field(minpoly, name: str) -> SimpleExtension:
    """Q[name]/(minpoly), the absolute number field case."""
    return SimpleExtension(QQ, minpoly, name)


def _promote(field: Field, c) -> "FieldElement":
    if isinstance(c, FieldElement):
        if c.field != field:
            raise DescriptorMismatch(f"expected element of {field!r}")
        return c
    if isinstance(c, int):
        return field.from_int(c)
    if isinstance(c, Fraction):
        return field.from_fraction(c)
    raise ValidationError(f"cannot promote {c!r} into {field!r}")


class FieldElement:
    __slots__ = ("field", "payload", "_h")

    def __init__(self, field: Field, payload):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "_h", None)

    def __setattr__(self, *a):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DescriptorMismatch(
                    f"cannot mix {self.field!r} and {other.field!r}"
                )
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            return self.field.from_fraction(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field._add(self.payload, o.payload))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.payload))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.payload, o.payload))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field._inv(self.payload))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return other.field == self.field and other.payload == self.payload
        if isinstance(other, (int, Fraction)):
            try:
                return self == self._coerce(other)
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            object.__setattr__(self, "_h", hash((self.field, self.payload)))
        return self._h

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return self.field._is_zero(self.payload)

    def is_one(self) -> bool:
        return self.field._is_one(self.payload)

    def __str__(self):
        return self.field._str(self.payload)

    def __repr__(self):
        return self.field._str(self.payload)


# ------------------------------------------------------------- tower walking


def all_symbols(E: Field) -> list[str]:
    if isinstance(E, FunctionField):
        return all_symbols(E.base) + list(E.names)
    if isinstance(E, SimpleExtension):
        return all_symbols(E.base) + [E.name]
    return []


def generators(E: Field) -> list[str]:
    """Transcendental variable names of the tower, bottom level first."""
    if isinstance(E, FunctionField):
        return generators(E.base) + list(E.names)
    if isinstance(E, SimpleExtension):
        return generators(E.base)
    return []


def tower_contains(E: Field, F: Field) -> bool:
    cur = E
    while True:
        if cur == F:
            return True
        cur = getattr(cur, "base", None)
        if cur is None:
            return False


def embed(x: FieldElement, E: Field) -> FieldElement:
    """Inclusion of x along the tower into E."""
    path = []
    cur = E
    while cur != x.field:
        path.append(cur)
        cur = getattr(cur, "base", None)
        if cur is None:
            raise DescriptorMismatch(f"{x.field!r} is not part of {E!r}")
    for lev in reversed(path):
        x = lev._lift(x)
    return x


def var_element(E: Field, name: str) -> FieldElement:
    if isinstance(E, FunctionField) and name in E.names:
        i = E.names.index(name)
        num = MPoly.variable(E.base, E.nvars, i)
        return E.element((num, E._one_poly()))
    base = getattr(E, "base", None)
    if base is None:
        raise UnknownVariable(f"no variable {name!r} in {E!r}")
    return E._lift(var_element(base, name))


def map_element(x: FieldElement, target: Field, images: dict) -> FieldElement:
    """Apply the ring map sending each named variable/generator to its image."""
    F = x.field
    if isinstance(F, RationalField):
        return target.from_fraction(x.payload)
    if isinstance(F, PrimeField):
        if target.char != F.p:
            raise CharacteristicObstruction("characteristic changes under map")
        return target.from_int(x.payload)
    if isinstance(F, FunctionField):
        try:
            imgs = [images[n] for n in F.names]
        except KeyError as e:
            raise UnknownVariable(f"no image for variable {e.args[0]!r}")
        cmap = lambda c: map_element(c, target, images)
        num, den = x.payload
        nv = num.evaluate(imgs, cmap)
        if nv is None:
            nv = target.zero()
        dv = den.evaluate(imgs, cmap)
        if dv is None or dv.is_zero():
            raise DivisionByZero("denominator vanishes under map")
        return nv / dv
    if isinstance(F, SimpleExtension):
        if F.name not in images:
            raise UnknownVariable(f"no image for generator {F.name!r}")
        g = images[F.name]
        acc = target.zero()
        for c in reversed(x.payload):
            acc = acc * g + map_element(c, target, images)
        return acc
    raise ValidationError(f"unsupported field {F!r}")


def identity_images(E: Field, target: Field) -> dict:
    """Images reproducing each symbol of E by its namesake inside target."""
    out = {}
    for n in generators(E):
        out[n] = var_element(target, n)
    cur = E
    while cur is not None:
        if isinstance(cur, SimpleExtension):
            out.setdefault(cur.name, _find_gen(target, cur.name))
        cur = getattr(cur, "base", None)
    return out


def _find_gen(E: Field, name: str) -> FieldElement:
    cur = E
    while cur is not None:
        if isinstance(cur, SimpleExtension) and cur.name == name:
            return embed(cur.gen(), E)
        cur = getattr(cur, "base", None)
    raise UnknownVariable(f"no generator {name!r} in {E!r}")


# ----------------------------------------------------------------- trace/norm


def _ext_steps(E: Field, F: Field) -> list[SimpleExtension]:
    steps = []
    cur = E
    while cur != F:
        if not isinstance(cur, SimpleExtension):
            raise NotAFiniteExtension(f"{E!r} is not finite over {F!r}")
        steps.append(cur)
        cur = cur.base
    return steps


def _mult_matrix(E: SimpleExtension, x: FieldElement) -> list[list]:
    """Columns are x * g^i in the power basis, as base-field coordinates."""
    cols = []
    col = list(x.payload)
    for _ in range(E.deg):
        cols.append(col)
        shifted = [E.base.zero()] + col[:-1]
        lead = col[-1]
        if not lead.is_zero():
            shifted = [
                c - lead * m for c, m in zip(shifted + [E.base.zero()], E.minpoly)
            ][: E.deg]
        col = shifted
    return cols


def _det(F: Field, cols: list[list]) -> FieldElement:
    n = len(cols)
    M = [[cols[j][i] for j in range(n)] for i in range(n)]
    det = F.one()
    for i in range(n):
        piv = next((r for r in range(i, n) if not M[r][i].is_zero()), None)
        if piv is None:
            return F.zero()
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            det = -det
        det = det * M[i][i]
        inv = M[i][i].inverse()
        for r in range(i + 1, n):
            f = M[r][i] * inv
            if f.is_zero():
                continue
            M[r] = [a - f * b for a, b in zip(M[r], M[i])]
    return det


def field_trace(x: FieldElement, F: Field) -> FieldElement:
    """Trace of x from its own field down to F along SimpleExtension steps."""
    for E in _ext_steps(x.field, F):
        cols = _mult_matrix(E, x)
        t = E.base.zero()
        for i in range(E.deg):
            t = t + cols[i][i]
        x = t
    return x


def field_norm(x: FieldElement, F: Field) -> FieldElement:
    for E in _ext_steps(x.field, F):
        x = _det(E.base, _mult_matrix(E, x))
    return x


# -------------------------------------------------------------- differentials


@lru_cache(maxsize=None)
def _dgen(E: SimpleExtension) -> dict:
    """d(generator) of a simple extension, as components over E's variables."""
    theta = E.gen()
    powers = [E.one()]
    for _ in range(E.deg):
        powers.append(powers[-1] * theta)
    dpi = E.zero()
    for j in range(1, E.deg + 1):
        c = E.minpoly[j] if j < E.deg else E.base.one()
        dpi = dpi + j * embed(c, E) * powers[j - 1]
    comps: dict[str, FieldElement] = {}
    for j in range(E.deg + 1):
        c = E.minpoly[j] if j < E.deg else E.base.one()
        for v, dc in d_components(c).items():
            contrib = embed(dc, E) * powers[j]
            comps[v] = comps.get(v, E.zero()) + contrib
    inv = dpi.inverse()
    return {v: -(val * inv) for v, val in comps.items() if not val.is_zero()}


def d_components(x: FieldElement) -> dict:
    """Total differential of x as a map variable -> coefficient in x.field.

    Generators of simple extensions are differentiated implicitly through
    their minpoly; in positive characteristic everything is a constant here
    (absolute 1-forms of the supported char-p fields vanish).
    """
    F = x.field
    if F.char != 0 or isinstance(F, (RationalField, PrimeField)):
        return {}
    if isinstance(F, FunctionField):
        num, den = x.payload
        comps = {}
        dnum = _mpoly_dcomps(F, num)
        dden = _mpoly_dcomps(F, den)
        den2 = den * den
        for v in set(dnum) | set(dden):
            dn = dnum.get(v, MPoly.zero(F.base, F.nvars))
            dd = dden.get(v, MPoly.zero(F.base, F.nvars))
            val = F._make(dn * den - num * dd, den2)
            if not val.is_zero():
                comps[v] = val
        return comps
    if isinstance(F, SimpleExtension):
        comps: dict[str, FieldElement] = {}
        theta = F.gen()
        powers = [F.one()]
        for _ in range(F.deg):
            powers.append(powers[-1] * theta)
        dtail = F.zero()
        for i, c in enumerate(x.payload):
            for v, dc in d_components(c).items():
                comps[v] = comps.get(v, F.zero()) + embed(dc, F) * powers[i]
            if i >= 1:
                dtail = dtail + i * embed(c, F) * powers[i - 1]
        if not dtail.is_zero():
            for v, dg in _dgen(F).items():
                comps[v] = comps.get(v, F.zero()) + dtail * dg
        return {v: c for v, c in comps.items() if not c.is_zero()}
    raise ValidationError(f"unsupported field {F!r}")


def _mpoly_dcomps(F: FunctionField, p: MPoly) -> dict:
    comps: dict[str, MPoly] = {}
    for i, n in enumerate(F.names):
        d = p.deriv(i)
        if not d.is_zero():
            comps[n] = d
    coeff_d: dict[str, dict] = {}
    for e, c in p.terms.items():
        for v, dc in d_components(c).items():
            coeff_d.setdefault(v, {})[e] = dc
    for v, terms in coeff_d.items():
        extra = MPoly(F.base, F.nvars, terms)
        comps[v] = comps.get(v, MPoly.zero(F.base, F.nvars)) + extra
    return comps


def partial_derivative(x: FieldElement, name: str) -> FieldElement:
    if name not in generators(x.field):
        raise UnknownVariable(f"variable {name!r} not in {x.field!r}")
    return d_components(x).get(name, x.field.zero())
