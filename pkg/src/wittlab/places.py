"""Places of k(t), exact local Laurent expansion, and refined residues.

A finite place is a caller-supplied monic squarefree polynomial pi(t); its
residue field adjoins one root theta. Expansion at a place is a Taylor shift
t = theta + u followed by exact series division, so no factorization is ever
performed: pole bookkeeping (the UncoveredPole audit) is driven entirely by
supplied factorizations. The refined residue of a q-form is the coefficient
of u^{-1} in its du-component, with du sorted after every other differential
(matching the normal form whose dt-words carry d[t] on the right); it lands
in forms over the residue field, keeping the dtheta-contributions of dt.
"""
from __future__ import annotations

from math import gcd

from .errors import (
    DescriptorMismatch,
    InsufficientFactorization,
    InsufficientPrecision,
    NotIntegral,
    UncoveredPole,
    ValidationError,
    ZeroArgument,
)
from .fields import (
    Field,
    FieldElement,
    FunctionField,
    SimpleExtension,
    all_symbols,
    embed,
    generators,
    map_element,
    var_element,
    _find_gen,
    _ext_steps,
)
from .forms import (
    DifferentialForm,
    _merge_keys,
    _order_map,
    differential,
    dlog,
    pullback_form,
    trace_form,
)
from .ghost import GhostForm
from .laurent import LaurentSeries
from .polys import udivmod, usquarefree, utrim
from .witt import TruncationSet, WittVector

DEFAULT_PREC = 8

# Residue extraction needs few exact terms and retries adaptively, and series
# coefficient sizes grow quickly with the index, so start small.
RESIDUE_START_PREC = 2


def _promote_coeffs(k: Field, coeffs) -> tuple:
    from .fields import _promote

    out = utrim([_promote(k, c) for c in coeffs])
    if len(out) < 2:
        raise ValidationError("a finite place needs a polynomial of degree >= 1")
    return tuple(out)


class Place:
    """A closed point of the projective t-line over k."""

    __slots__ = ("K", "k", "tname", "pi", "residue_field", "theta", "degree",
                 "is_infinite")

    def __init__(self, K: FunctionField, pi, theta_name: str = "th"):
        if not isinstance(K, FunctionField) or len(K.names) != 1:
            raise ValidationError("places live on a one-variable function field")
        k = K.base
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "tname", K.names[0])
        if pi is None:
            object.__setattr__(self, "is_infinite", True)
            object.__setattr__(self, "pi", None)
            object.__setattr__(self, "residue_field", k)
            object.__setattr__(self, "theta", None)
            object.__setattr__(self, "degree", 1)
            return
        pi = _promote_coeffs(k, pi)
        if not pi[-1].is_one():
            raise ValidationError("place polynomial must be monic")
        if not usquarefree(k, list(pi)):
            raise InsufficientFactorization("place polynomial is not squarefree")
        object.__setattr__(self, "is_infinite", False)
        object.__setattr__(self, "pi", pi)
        deg = len(pi) - 1
        object.__setattr__(self, "degree", deg)
        if deg == 1:
            object.__setattr__(self, "residue_field", k)
            object.__setattr__(self, "theta", -pi[0])
        else:
            name = theta_name
            taken = set(all_symbols(k))
            while name in taken:
                name = name + "_"
            E = SimpleExtension(k, list(pi), name)
            object.__setattr__(self, "residue_field", E)
            object.__setattr__(self, "theta", E.gen())

    def __setattr__(self, *a):
        raise AttributeError("Place is immutable")

    @classmethod
    def finite(cls, K: FunctionField, pi, theta_name: str = "th") -> "Place":
        return cls(K, pi, theta_name)

    @classmethod
    def infinite(cls, K: FunctionField) -> "Place":
        return cls(K, None)

    def uniformizer(self) -> FieldElement:
        t = self.K.var(self.tname)
        if self.is_infinite:
            return t.inverse()
        acc = self.K.zero()
        for c in reversed(self.pi):
            acc = acc * t + embed(c, self.K)
        return acc

    def dt_parts(self, prec: int):
        """dt = factor*du + rest with rest a 1-form over the residue field."""
        E = self.residue_field
        if self.is_infinite:
            fac = LaurentSeries.from_coeffs(E, -2, [-E.one()], prec)
            return fac, DifferentialForm.zero(E, 1)
        fac = LaurentSeries.const(E, E.one(), prec)
        return fac, differential(self.theta)

    def __eq__(self, other):
        return (
            isinstance(other, Place)
            and other.K == self.K
            and other.is_infinite == self.is_infinite
            and other.pi == self.pi
        )

    def __hash__(self):
        return hash((self.K, self.is_infinite, self.pi))

    def __repr__(self):
        if self.is_infinite:
            return "(infinity)"
        t = self.tname
        bits = []
        for i, c in enumerate(self.pi):
            if c.is_zero():
                continue
            if i == 0:
                bits.append(str(c))
            else:
                head = "" if c.is_one() else f"({c})*"
                bits.append(f"{head}{t}" if i == 1 else f"{head}{t}^{i}")
        return "(" + " + ".join(reversed(bits)) + ")"


# ------------------------------------------------------------- expansion core


def _f_upolys(f: FieldElement):
    num, den = f.payload
    return num.as_upoly(), den.as_upoly()


def _taylor_at(coeffs, P: Place) -> list:
    """Coefficients of p(theta + u) as elements of the residue field."""
    E = P.residue_field
    cs = [embed(c, E) for c in coeffs]
    theta = P.theta
    out = []
    while cs:
        rem = cs[-1]
        quot = []
        for c in reversed(cs[:-1]):
            quot.append(rem)
            rem = rem * theta + c
        out.append(rem)
        cs = list(reversed(quot))
    return out


def _poly_series(coeffs, P: Place, prec: int) -> LaurentSeries:
    E = P.residue_field
    coeffs = utrim(list(coeffs))
    if not coeffs:
        return LaurentSeries.zero(E, prec)
    if P.is_infinite:
        rev = [embed(c, E) for c in reversed(coeffs)]
        return LaurentSeries.from_coeffs(E, -(len(coeffs) - 1), rev, prec)
    return LaurentSeries.from_coeffs(E, 0, _taylor_at(coeffs, P), prec)


def _poly_lead(coeffs, P: Place):
    """(valuation, leading residue-field coefficient) of a polynomial."""
    coeffs = utrim(list(coeffs))
    if not coeffs:
        raise ZeroArgument("zero polynomial has no valuation")
    E = P.residue_field
    if P.is_infinite:
        return -(len(coeffs) - 1), embed(coeffs[-1], E)
    tay = _taylor_at(coeffs, P)
    for i, c in enumerate(tay):
        if not c.is_zero():
            return i, c
    raise ValidationError("place polynomial divides the input beyond its degree")


def local_expand(f: FieldElement, P: Place, prec: int = DEFAULT_PREC) -> LaurentSeries:
    """Laurent expansion of f in the local parameter at P, exact below prec."""
    if f.field != P.K:
        raise DescriptorMismatch("element does not live on the place's field")
    E = P.residue_field
    if f.is_zero():
        return LaurentSeries.zero(E, prec)
    num, den = _f_upolys(f)
    # Pad exactly for the precision lost dividing by the denominator series:
    # inverse() costs 2*v_d and the product keeps min(prec - v_d, prec - 2*v_d + v_n).
    vn, _ = _poly_lead(num, P)
    vd, _ = _poly_lead(den, P)
    pad = max(0, vd, 2 * vd - vn)
    sn = _poly_series(num, P, prec + pad)
    sd = _poly_series(den, P, prec + pad)
    out = sn * sd.inverse()
    return out + LaurentSeries.zero(E, prec)


def valuation(f: FieldElement, P: Place) -> int:
    if f.is_zero():
        raise ZeroArgument("the zero function has no valuation")
    num, den = _f_upolys(f)
    vn, _ = _poly_lead(num, P)
    vd, _ = _poly_lead(den, P)
    return vn - vd


def evaluate_at(f: FieldElement, P: Place) -> FieldElement:
    """Value in the residue field; requires v_P(f) = 0 (a unit at P)."""
    if f.is_zero():
        raise ZeroArgument("evaluating the zero function as a unit")
    num, den = _f_upolys(f)
    vn, ln = _poly_lead(num, P)
    vd, ld = _poly_lead(den, P)
    if vn != vd:
        raise ValidationError(f"v_P = {vn - vd} != 0; not a unit at {P!r}")
    return ln / ld


def witt_evaluate(w: WittVector, P: Place) -> WittVector:
    """Componentwise reduction W_S(O_P) -> W_S(k(P))."""
    E = P.residue_field
    comps = {}
    for s, c in w.comps.items():
        if c.is_zero():
            comps[s] = E.zero()
            continue
        v = valuation(c, P)
        if v < 0:
            raise NotIntegral(f"component {s} has a pole at {P!r}")
        comps[s] = E.zero() if v > 0 else evaluate_at(c, P)
    return WittVector(w.S, E, comps)


def compose_series(f: LaurentSeries, r: LaurentSeries) -> LaurentSeries:
    """f(r(tau)) for a reparametrization r of order exactly 1."""
    if r.order != 1:
        raise ValidationError("substitution series must have order 1")
    E = f.field
    if f.is_zero():
        return LaurentSeries.zero(E, f.prec)
    acc = LaurentSeries.zero(E, f.prec + abs(f.order) + 2)
    rk = r ** f.order
    for c in f.coeffs:
        if not c.is_zero():
            acc = acc + rk.scale(c)
        rk = rk * r
    return acc + LaurentSeries.zero(E, f.prec)


# ----------------------------------------------------------------- LocalForm


class LocalForm:
    """Form over k(P)((u)) in the basis {dx_i} + {du}, du sorted last.

    terms maps (variable-name tuple, has_du flag) to a Laurent coefficient.
    """

    __slots__ = ("place", "degree", "terms")

    def __init__(self, place: Place, degree: int, terms: dict):
        E = place.residue_field
        order = _order_map(E)
        clean = {}
        for (key, has_du), s in terms.items():
            key = tuple(key)
            if len(key) + (1 if has_du else 0) != degree:
                raise ValidationError("key length does not match the degree")
            if list(key) != sorted(key, key=order.__getitem__) or len(set(key)) != len(key):
                raise ValidationError(f"bad differential word {key}")
            if not isinstance(s, LaurentSeries) or s.field != E:
                raise DescriptorMismatch("coefficient is not a series over k(P)")
            if not s.is_zero():
                clean[(key, has_du)] = s
        object.__setattr__(self, "place", place)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("LocalForm is immutable")

    @classmethod
    def zero(cls, place: Place, degree: int) -> "LocalForm":
        return cls(place, degree, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LocalForm") -> "LocalForm":
        if other.place != self.place:
            raise DescriptorMismatch("local forms at different places")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise ValidationError("adding local forms of different degrees")
        terms = dict(self.terms)
        for key, s in other.terms.items():
            terms[key] = terms[key] + s if key in terms else s
        return LocalForm(self.place, self.degree, terms)

    def __neg__(self) -> "LocalForm":
        return LocalForm(
            self.place, self.degree, {k: -s for k, s in self.terms.items()}
        )

    def __sub__(self, other: "LocalForm") -> "LocalForm":
        return self + (-other)

    def scale_series(self, c: LaurentSeries) -> "LocalForm":
        return LocalForm(
            self.place, self.degree, {k: s * c for k, s in self.terms.items()}
        )

    def __mul__(self, other: "LocalForm") -> "LocalForm":
        if other.place != self.place:
            raise DescriptorMismatch("local forms at different places")
        order = _order_map(self.place.residue_field)
        out: dict = {}
        for (ka, adu), sa in self.terms.items():
            for (kb, bdu), sb in other.terms.items():
                if adu and bdu:
                    continue
                m = _merge_keys(ka, kb, order)
                if m is None:
                    continue
                key, sign = m
                if adu and len(kb) % 2 == 1:
                    sign = -sign
                s = sa * sb
                if sign < 0:
                    s = -s
                slot = (key, adu or bdu)
                out[slot] = out[slot] + s if slot in out else s
        return LocalForm(self.place, self.degree + other.degree, out)

    def __eq__(self, other):
        return (
            isinstance(other, LocalForm)
            and other.place == self.place
            and other.degree == self.degree
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.place, self.degree, tuple(sorted(self.terms.items()))))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for (key, has_du), s in sorted(self.terms.items(), key=lambda kv: kv[0]):
            word = [f"d{n}" for n in key] + (["du"] if has_du else [])
            w = "^".join(word)
            bits.append(f"({s})" + (f"*{w}" if w else ""))
        return " + ".join(bits)

    __repr__ = __str__

    # ------------------------------------------------------------ operations

    def residue(self) -> DifferentialForm:
        """Coefficient of u^{-1} in the du-component."""
        E = self.place.residue_field
        if self.degree == 0:
            return DifferentialForm.zero(E, 0)
        out = {}
        for (key, has_du), s in self.terms.items():
            if not has_du:
                continue
            c = s.coefficient(-1)
            if not c.is_zero():
                out[key] = c
        return DifferentialForm(E, self.degree - 1, out)

    def evaluate0(self) -> DifferentialForm:
        """Reduction at u = 0: du-words die, coefficients evaluate."""
        E = self.place.residue_field
        out = {}
        for (key, has_du), s in self.terms.items():
            if s.order < 0:
                raise NotIntegral("form has a pole; cannot evaluate at the point")
            if has_du:
                continue
            c = s.coefficient(0)
            if not c.is_zero():
                out[key] = c
        return DifferentialForm(E, self.degree, out)

    def substitute(self, r: LaurentSeries) -> "LocalForm":
        """Reparametrize u = r(tau); du becomes r'(tau) dtau."""
        dr = r.derivative()
        out = {}
        for (key, has_du), s in self.terms.items():
            ns = compose_series(s, r)
            if has_du:
                ns = ns * dr
            slot = (key, has_du)
            out[slot] = out[slot] + ns if slot in out else ns
        return LocalForm(self.place, self.degree, out)

    def d(self) -> "LocalForm":
        """Exterior derivative, differentiating both u and the coefficients."""
        from .fields import d_components

        E = self.place.residue_field
        order = _order_map(E)
        out: dict = {}

        def _acc(slot, series):
            out[slot] = out[slot] + series if slot in out else series

        for (key, has_du), s in self.terms.items():
            if not has_du:
                ds = s.derivative()
                if not ds.is_zero():
                    if len(key) % 2 == 1:
                        ds = -ds
                    _acc((key, True), ds)
            comps: dict = {}
            for i, c in enumerate(s.coeffs):
                for v, dc in d_components(c).items():
                    comps.setdefault(v, {})[s.order + i] = dc
            for v, sparse in comps.items():
                m = _merge_keys((v,), key, order)
                if m is None:
                    continue
                nkey, sign = m
                lo = min(sparse)
                row = [sparse.get(e, E.zero()) for e in range(lo, max(sparse) + 1)]
                ns = LaurentSeries.from_coeffs(E, lo, row, s.prec)
                if sign < 0:
                    ns = -ns
                _acc((nkey, has_du), ns)
        return LocalForm(self.place, self.degree + 1, out)


def local_function(P: Place, s: LaurentSeries) -> LocalForm:
    return LocalForm(P, 0, {((), False): s})


def local_du(P: Place, prec: int = DEFAULT_PREC) -> LocalForm:
    E = P.residue_field
    return LocalForm(P, 1, {((), True): LaurentSeries.const(E, E.one(), prec)})


def local_dvar(P: Place, name: str, prec: int = DEFAULT_PREC) -> LocalForm:
    E = P.residue_field
    return LocalForm(
        P, 1, {((name,), False): LaurentSeries.const(E, E.one(), prec)}
    )


def to_local_form(omega: DifferentialForm, P: Place,
                  prec: int = DEFAULT_PREC) -> LocalForm:
    """Expand a form over k(t) at P, rewriting dt = factor*du + dtheta."""
    if omega.field != P.K:
        raise DescriptorMismatch("form does not live over the place's field")
    E = P.residue_field
    order = _order_map(E)
    fac, rest = P.dt_parts(prec + 4)
    out: dict = {}

    def _acc(slot, series):
        out[slot] = out[slot] + series if slot in out else series

    for key, c in omega.terms.items():
        cs = local_expand(c, P, prec + 4)
        if cs.is_zero():
            continue
        if key and key[-1] == P.tname:
            J = key[:-1]
            _acc((J, True), cs * fac)
            for (v,), ev in rest.terms.items():
                m = _merge_keys(J, (v,), order)
                if m is None:
                    continue
                nkey, sign = m
                ns = cs.scale(ev)
                if sign < 0:
                    ns = -ns
                _acc((nkey, False), ns)
        else:
            _acc((key, False), cs)
    return LocalForm(P, omega.degree, out)


# ------------------------------------------------------------ refined residue


def _expand_until(prec: int, compute):
    """Run compute(p), doubling the expansion precision while the truncated
    series stops short of a requested coefficient.  Inputs are exact rational
    data, so a retry recomputes from scratch without information loss."""
    p = prec
    for _ in range(6):
        try:
            return compute(p)
        except InsufficientPrecision:
            p *= 2
    return compute(p)


def refined_residue(omega, P: Place, prec: int = RESIDUE_START_PREC):
    """Residue at P: DifferentialForm -> DifferentialForm over k(P);
    ghost families coordinatewise."""
    if isinstance(omega, GhostForm):
        return GhostForm(
            omega.S, P.residue_field, max(omega.degree - 1, 0),
            {s: _expand_until(
                prec, lambda p, c=omega.coords[s]:
                to_local_form(c, P, p).residue())
             for s in omega.S},
        )
    return _expand_until(
        prec, lambda p: to_local_form(omega, P, p).residue())


def witt_local_symbol(w: WittVector, f: FieldElement, P: Place,
                      prec: int = RESIDUE_START_PREC) -> WittVector:
    """d_P(w dlog[f]) through ghost coordinates, unghosted over k(P)."""
    if f.is_zero():
        raise ZeroArgument("dlog argument is zero")
    if w.ring != f.field or f.field != P.K:
        raise DescriptorMismatch("witt vector, function, and place disagree")
    dl = dlog(f)
    g = w.ghost()
    res = {}
    for s in w.S:
        r = _expand_until(
            prec, lambda p, c=g[s]:
            to_local_form(dl.scale(c), P, p).residue())
        res[s] = r.constant_value()
    return WittVector.unghost(res, w.S, P.residue_field)


def residue_formula_g(n: int, m: int, j: int, i: int,
                      a: FieldElement, b: FieldElement,
                      S: TruncationSet) -> WittVector:
    """Closed form for Res(V_n([a t^j]) d V_m([b t^i]))."""
    k = a.field
    if i == 0 or j * m + i * n != 0:
        return WittVector.zero(S, k)
    g0 = gcd(m, n)
    N = m * n // g0
    coef = gcd(abs(i), abs(j)) * (1 if i > 0 else -1)
    from .errors import EmptyTruncation

    try:
        SN = S.quotient(N)
    except EmptyTruncation:
        return WittVector.zero(S, k)
    val = a ** (m // g0) * b ** (n // g0)
    return WittVector.teichmuller(val, SN).verschiebung(N, S).intmul(coef)


def residue_formula_g_series(n: int, m: int, j: int, i: int,
                             a: FieldElement, b: FieldElement,
                             S: TruncationSet,
                             prec: int = None) -> WittVector:
    """The same residue evaluated by actual series expansion at t = 0."""
    k = a.field
    tname = "t"
    taken = set(all_symbols(k))
    while tname in taken:
        tname = tname + "_"
    K = FunctionField(k, [tname])
    t = K.var(tname)
    at = embed(a, K) * t**j
    bt = embed(b, K) * t**i
    w1 = WittVector.teichmuller(at, S.quotient(n)).verschiebung(n, S)
    w2 = WittVector.teichmuller(bt, S.quotient(m)).verschiebung(m, S)
    gf = GhostForm.from_witt(w1) * GhostForm.from_witt(w2).d()
    P = Place.finite(K, [0, 1])
    if prec is None:
        prec = 2 * S.max() * (abs(i) + abs(j)) + 6
    res = refined_residue(gf, P, prec)
    return res.to_witt()


# ----------------------------------------------------- factored functions


class FactoredFunction:
    """unit * prod pi_i^{e_i} with monic pairwise-coprime pi_i over k."""

    __slots__ = ("K", "unit", "factors")

    def __init__(self, K: FunctionField, unit, factors):
        if not isinstance(K, FunctionField) or len(K.names) != 1:
            raise ValidationError("factored functions live on k(t)")
        k = K.base
        from .fields import _promote

        unit = _promote(k, unit)
        if unit.is_zero():
            raise ZeroArgument("unit part is zero")
        merged: dict = {}
        for coeffs, e in factors:
            if e == 0:
                continue
            pi = _promote_coeffs(k, coeffs)
            if not pi[-1].is_one():
                raise ValidationError("factors must be monic")
            merged[pi] = merged.get(pi, 0) + e
        pis = [list(p) for p in merged]
        for ai in range(len(pis)):
            for bi in range(ai + 1, len(pis)):
                from .polys import ugcd

                if len(ugcd(k, pis[ai], pis[bi])) > 1:
                    raise InsufficientFactorization(
                        "factors share a common divisor"
                    )
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(
            self, "factors",
            tuple(sorted(((p, e) for p, e in merged.items() if e != 0),
                         key=lambda t: (len(t[0]), [str(c) for c in t[0]]))),
        )

    def __setattr__(self, *a):
        raise AttributeError("FactoredFunction is immutable")

    @classmethod
    def constant(cls, K: FunctionField, c) -> "FactoredFunction":
        return cls(K, c, [])

    def element(self) -> FieldElement:
        one = [self.K.base.one()]
        acc = self.K._lift(self.unit)
        for pi, e in self.factors:
            acc = acc * self.K.from_upolys(list(pi), one) ** e
        return acc

    def places(self) -> list:
        return [Place.finite(self.K, list(pi)) for pi, _ in self.factors]

    def valuation_at(self, P: Place) -> int:
        if P.is_infinite:
            return -sum(e * (len(pi) - 1) for pi, e in self.factors)
        for pi, e in self.factors:
            if pi == P.pi:
                return e
        return 0

    def inverse(self) -> "FactoredFunction":
        return FactoredFunction(
            self.K, self.unit.inverse(),
            [(list(pi), -e) for pi, e in self.factors],
        )

    def __mul__(self, other: "FactoredFunction") -> "FactoredFunction":
        if other.K != self.K:
            raise DescriptorMismatch("factored functions over different fields")
        return FactoredFunction(
            self.K, self.unit * other.unit,
            [(list(p), e) for p, e in self.factors]
            + [(list(p), e) for p, e in other.factors],
        )

    def __repr__(self):
        return f"{self.unit} * " + " * ".join(
            f"(deg {len(p) - 1})^{e}" for p, e in self.factors
        )


def merge_places(*groups) -> list:
    out = []
    for g in groups:
        for P in g:
            if P not in out:
                out.append(P)
    return out


# -------------------------------------------------------- global statements


def _form_coefficients(omega):
    if isinstance(omega, GhostForm):
        for s in omega.S:
            yield from omega.coords[s].terms.values()
    else:
        yield from omega.terms.values()


def audit_poles(omega, places) -> None:
    """Check every denominator factors through the supplied finite places."""
    K = omega.field
    k = K.base
    for c in _form_coefficients(omega):
        den = c.payload[1].as_upoly()
        den = utrim(list(den))
        for P in places:
            if P.is_infinite:
                continue
            pi = list(P.pi)
            while len(den) >= len(pi):
                q, r = udivmod(k, den, pi)
                if utrim(r):
                    break
                den = utrim(q) or [k.one()]
        if len(den) > 1:
            raise UncoveredPole(
                "a denominator factor of degree "
                f"{len(den) - 1} is not covered by the supplied places"
            )


def residue_theorem_sum(omega, places, prec: int = RESIDUE_START_PREC):
    """Sum over all places (infinity always included) of Tr_{k(P)/k} d_P."""
    K = omega.field
    k = K.base
    audit_poles(omega, places)
    all_places = merge_places(places, [Place.infinite(K)])
    total = None
    for P in all_places:
        r = refined_residue(omega, P, prec)
        tr = r.trace_to(k) if isinstance(r, GhostForm) else trace_form(r, k)
        total = tr if total is None else total + tr
    return total


def ramified_pullback_check(omega, e: int, tprime: str = None,
                            prec: int = RESIDUE_START_PREC):
    """(residue after t -> t'^e at (t'), e * residue at (t)); equal by the
    ramified base-change rule."""
    if e < 1:
        raise ValidationError("ramification index must be positive")
    is_ghost = isinstance(omega, GhostForm)
    K = omega.field
    k = K.base
    tname = K.names[0]
    if tprime is None:
        tprime = tname + "p"
        taken = set(all_symbols(k)) | {tname}
        while tprime in taken:
            tprime = tprime + "p"
    K2 = FunctionField(k, [tprime])
    images = {}
    for n in generators(K):
        if n == tname:
            images[n] = K2.var(tprime) ** e
        else:
            images[n] = var_element(K2, n)
    cur = k
    while cur is not None:
        if isinstance(cur, SimpleExtension):
            images.setdefault(cur.name, _find_gen(K2, cur.name))
        cur = getattr(cur, "base", None)
    dimages = {n: differential(images[n]) for n in generators(K)}

    def _pull(form):
        return pullback_form(form, K2, images, dimages)

    if is_ghost:
        pulled = GhostForm(
            omega.S, K2, omega.degree,
            {s: _pull(omega.coords[s]) for s in omega.S},
        )
    else:
        pulled = _pull(omega)
    lhs = refined_residue(pulled, Place.finite(K2, [0, 1]), prec)
    rhs = refined_residue(omega, Place.finite(K, [0, 1]), prec)
    rhs = rhs.intmul(e) if is_ghost else rhs.scale(e)
    return lhs, rhs


def trace_residue_square_check(omega, k: Field, c=None,
                               prec: int = RESIDUE_START_PREC):
    """Unramified square at the place t = c (c in k): residue of the traced
    form over k(t) versus trace of the residue over k'(t)."""
    is_ghost = isinstance(omega, GhostForm)
    A = omega.field
    if not isinstance(A, FunctionField) or len(A.names) != 1:
        raise ValidationError("expected a form over k'(t)")
    kp = A.base
    steps = _ext_steps(kp, k)
    tname = A.names[0]
    K = FunctionField(k, [tname])
    B = K
    for step in reversed(steps):
        B = SimpleExtension(B, [embed(cc, B) for cc in step.minpoly], step.name)
    images = {n: var_element(B, n) for n in generators(A)}
    for step in steps:
        images[step.name] = _find_gen(B, step.name)

    def _swap(form):
        return DifferentialForm(
            B, form.degree,
            {key: map_element(cc, B, images) for key, cc in form.terms.items()},
        )

    if c is None:
        c = k.zero()
    pi_K = [-c, k.one()]
    pi_A = [embed(-c, kp), kp.one()]
    P_K = Place.finite(K, pi_K)
    P_A = Place.finite(A, pi_A)
    if is_ghost:
        traced = GhostForm(
            omega.S, K, omega.degree,
            {s: trace_form(_swap(omega.coords[s]), K) for s in omega.S},
        )
        lhs = refined_residue(traced, P_K, prec)
        rhs = refined_residue(omega, P_A, prec).trace_to(k)
    else:
        lhs = refined_residue(trace_form(_swap(omega), K), P_K, prec)
        rhs = trace_form(refined_residue(omega, P_A, prec), k)
    return lhs, rhs
