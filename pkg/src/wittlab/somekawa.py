"""Symbol-level model of the K-group attached to (W_S, G_m, ..., G_m).

The group itself is never materialized: generators of its two relation
families (projection formula and reciprocity data over the projective line)
are evaluated through the map psi into forms, where every identity becomes a
finite exact computation.
"""
from __future__ import annotations

from .errors import (
    DegenerateParameter,
    DescriptorMismatch,
    ModulusViolation,
    NotAFiniteExtension,
    ValidationError,
    ZeroArgument,
)
from .fields import (
    Field,
    FieldElement,
    FunctionField,
    embed,
    field_norm,
    tower_contains,
    _ext_steps,
)
from .forms import DifferentialForm, dlog, trace_form, wedge
from .ghost import GhostForm, milnor_dlog
from .places import (
    FactoredFunction,
    Place,
    evaluate_at,
    merge_places,
    valuation,
    witt_evaluate,
    witt_local_symbol,
)
from .milnor import tame_symbol
from .witt import TruncationSet, WittVector, witt_trace

INFINITE_MULTIPLICITY = None


class SomekawaSymbol:
    """{w, x_1, ..., x_{q-1}}_{E/k}: one Witt slot and q-1 unit slots over E."""

    __slots__ = ("k", "E", "witt", "mults")

    def __init__(self, k: Field, E: Field, witt: WittVector, mults):
        if witt.ring != E:
            raise DescriptorMismatch("witt slot not over E")
        if not (E == k or tower_contains(E, k)):
            raise DescriptorMismatch("E does not contain k")
        _ext_steps(E, k)  # raises NotAFiniteExtension unless E/k is finite
        mults = tuple(mults)
        for x in mults:
            if not isinstance(x, FieldElement) or x.field != E:
                raise DescriptorMismatch("multiplicative entry not over E")
            if x.is_zero():
                raise ZeroArgument("zero entry in a symbol")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "witt", witt)
        object.__setattr__(self, "mults", mults)

    def __setattr__(self, *a):
        raise AttributeError("SomekawaSymbol is immutable")

    @property
    def S(self) -> TruncationSet:
        return self.witt.S

    @property
    def q(self) -> int:
        return 1 + len(self.mults)

    def __repr__(self):
        inner = ", ".join([str(self.witt.comps)] + [str(x) for x in self.mults])
        return "{" + inner + "}"


def psi(sym):
    """Tr_{E/k}(gh(w) dlog x_1 ... dlog x_{q-1}); a plain form when S = {1},
    an S-indexed family otherwise. Lists of symbols are summed."""
    if isinstance(sym, (list, tuple)):
        acc = None
        for s in sym:
            v = psi(s)
            acc = v if acc is None else acc + v
        if acc is None:
            raise ValidationError("empty symbol sum")
        return acc
    S = sym.S
    if len(S) == 1 and 1 in S:
        x = sym.witt.component(1)
        form = DifferentialForm.function(x)
        for y in sym.mults:
            form = form * dlog(y)
        return trace_form(form, sym.k)
    gf = GhostForm.from_witt(sym.witt)
    if sym.mults:
        gf = gf * milnor_dlog(sym.mults, S)
    return gf.trace_to(sym.k)


def phi(presentation, k: Field, S: TruncationSet = None):
    """Symbols {x, x_1, ..., x_{q-1}}_{k/k} from a dlog presentation
    [(x, [x_1, ...]), ...] of a form over k."""
    if S is None:
        S = TruncationSet([1])
    out = []
    for x, mults in presentation:
        w = WittVector(S, k, {1: x})
        out.append(SomekawaSymbol(k, k, w, mults))
    return out


def dlog_presentation(omega: DifferentialForm):
    """Write sum c dx_{i1}..dx_{iq} as sum (c x_{i1}..x_{iq}) dlog x_{i1}...;
    the canonical presentation fed to phi."""
    from .fields import var_element

    k = omega.field
    pres = []
    for key, c in omega.terms.items():
        x = c
        mults = []
        for name in key:
            v = var_element(k, name)
            x = x * v
            mults.append(v)
        pres.append((x, mults))
    return pres


def dlog_lift(mults, S: TruncationSet, E: Field, k: Field) -> SomekawaSymbol:
    """{y_1, ..., y_{q-1}} placed in the Witt slot's unit: {1, y_1, ...}."""
    return SomekawaSymbol(k, E, WittVector.one(S, E), mults)


def gamma_ghost(sym: SomekawaSymbol, s: int) -> SomekawaSymbol:
    """Replace the Witt slot by its ghost coordinate gh_s, over S = {1}."""
    g = sym.witt.ghost()[s]
    S1 = TruncationSet([1])
    return SomekawaSymbol(sym.k, sym.E, WittVector(S1, sym.E, {1: g}), sym.mults)


# ---------------------------------------------------------------- PF data


def pf_generator_eval(k: Field, E1: Field, E2: Field, slot: int,
                      witt: WittVector, mults, S: TruncationSet = None):
    """The two sides of the projection-formula relation: everything pushed up
    to E2 versus the designated slot pushed down to E1 by trace/norm.

    `slot` = 0 marks the Witt slot (given over E2, the rest over E1);
    `slot` = i >= 1 marks the multiplicative entry x_i over E2.
    """
    if not tower_contains(E2, E1):
        raise NotAFiniteExtension("E2 must contain E1")
    _ext_steps(E2, E1)
    mults = list(mults)
    if slot == 0:
        up = SomekawaSymbol(k, E2, witt,
                            [embed(x, E2) for x in mults])
        down = SomekawaSymbol(k, E1, witt_trace(witt, E1), mults)
    else:
        x2 = mults[slot - 1]
        if x2.field != E2:
            raise DescriptorMismatch("designated entry must live over E2")
        up_m = [x2 if i == slot - 1 else embed(x, E2)
                for i, x in enumerate(mults)]
        up = SomekawaSymbol(k, E2, witt.map(lambda c: embed(c, E2), E2), up_m)
        down_m = list(mults)
        down_m[slot - 1] = field_norm(x2, E1)
        down = SomekawaSymbol(k, E1, witt, down_m)
    return psi(up), psi(down)


# ---------------------------------------------------------------- WR data


def m_P(g, P: Place):
    """min_i v_P(1 - g_i); the infinity sentinel when some g_i = 1."""
    if isinstance(g, FieldElement):
        g = [g]
    best = INFINITE_MULTIPLICITY
    for gi in g:
        one_minus = 1 - gi
        if one_minus.is_zero():
            continue
        v = valuation(one_minus, P)
        if best is INFINITE_MULTIPLICITY or v < best:
            best = v
    return best


class WRDatum:
    """A reciprocity generator over the projective t-line.

    f and the multiplicative entries are supplied factored; the Witt entry g0
    is a vector over k(t) whose poles must be covered by the factor pool plus
    any `extra_places`. At each relevant place at most one slot may fail to
    be integral, and that slot is the one replaced by a local symbol.
    """

    __slots__ = ("K", "k", "S", "f", "g0", "gs", "places", "assignments")

    def __init__(self, K: FunctionField, S: TruncationSet,
                 f: FactoredFunction, g0: WittVector, gs,
                 extra_places=()):
        if g0.ring != K or g0.S != S:
            raise DescriptorMismatch("witt entry must be over k(t) with set S")
        gs = tuple(gs)
        for g in gs:
            if not isinstance(g, FactoredFunction) or g.K != K:
                raise DescriptorMismatch("multiplicative entries must be factored over k(t)")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "k", K.base)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g0", g0)
        object.__setattr__(self, "gs", gs)
        pool = merge_places(
            f.places(), *[g.places() for g in gs], extra_places,
            [Place.infinite(K)],
        )
        self._classify(pool)

    def __setattr__(self, *a):
        raise AttributeError("WRDatum is immutable")

    def _classify(self, pool):
        from .places import audit_poles
        from .forms import DifferentialForm as DF

        ghost = self.g0.ghost()
        for c in ghost.values():
            if not c.is_zero():
                audit_poles(DF.function(c), pool)
        assignments = []
        for P in pool:
            bad = []
            if any(not c.is_zero() and valuation(c, P) < 0
                   for c in ghost.values()):
                bad.append(0)
            for i, g in enumerate(self.gs, start=1):
                el = g.element()
                if valuation(el, P) != 0:
                    bad.append(i)
            if len(bad) > 1:
                raise ValidationError(
                    f"more than one non-integral slot at {P!r}: {bad}"
                )
            assignments.append((P, bad[0] if bad else 0))
        object.__setattr__(self, "places", tuple(P for P, _ in assignments))
        object.__setattr__(self, "assignments", tuple(assignments))


def modulus_check(d: WRDatum, P: Place) -> bool:
    """(m+1) v_P(gh_s(g0)) + sum_i m_P(g_i) + v_P(1-f) >= 0 for every s in S
    with a negative ghost valuation; vacuous where g0 is integral."""
    m = d.S.max()
    ghost = d.g0.ghost()
    f_el = d.f.element()
    one_minus_f = 1 - f_el
    negatives = []
    for s in d.S:
        c = ghost[s]
        if not c.is_zero() and valuation(c, P) < 0:
            negatives.append(valuation(c, P))
    if not negatives:
        return True
    tail = 0
    for g in d.gs:
        mg = m_P(g.element(), P)
        if mg is INFINITE_MULTIPLICITY:
            return True
        tail += mg
    if one_minus_f.is_zero():
        return True
    vf = valuation(one_minus_f, P)
    return all((m + 1) * v + tail + vf >= 0 for v in negatives)


def wr_generator_eval(d: WRDatum, prec: int = None):
    """Sum over places of psi of the local term, the i(P)-th slot replaced by
    the local symbol against f; the reciprocity statement is that it vanishes."""
    f_el = d.f.element()
    total = None
    for P, i in d.assignments:
        if i == 0:
            if not modulus_check(d, P):
                raise ModulusViolation(f"modulus fails at {P!r}")
            w_loc = (witt_local_symbol(d.g0, f_el, P) if prec is None
                     else witt_local_symbol(d.g0, f_el, P, prec))
            mult_loc = [evaluate_at(g.element(), P) for g in d.gs]
        else:
            w_loc = witt_evaluate(d.g0, P)
            mult_loc = []
            for idx, g in enumerate(d.gs, start=1):
                if idx == i:
                    mult_loc.append(tame_symbol(g.element(), f_el, P))
                else:
                    mult_loc.append(evaluate_at(g.element(), P))
        if any(x.is_zero() for x in mult_loc):
            raise ZeroArgument("local multiplicative entry vanished")
        term = psi(SomekawaSymbol(d.k, P.residue_field, w_loc, mult_loc))
        total = term if total is None else total + term
    return total


def cathelineau_instance(x: FieldElement, S: TruncationSet = None,
                         tail=()) -> WRDatum:
    """The reciprocity datum whose evaluation is the Cathelineau identity:
    f = 1/t, Witt slot [t], g_1 = (t-x)(t-(1-x)) / (t(t-1))."""
    k = x.field
    if x.is_zero() or (1 - x).is_zero():
        raise DegenerateParameter("x must avoid 0 and 1")
    if S is None:
        S = TruncationSet([1])
    for c in tail:
        if c.is_zero() or (1 - c).is_zero():
            raise DegenerateParameter("tail entries must avoid 0 and 1")
    tname = "t"
    from .fields import all_symbols

    taken = set(all_symbols(k))
    while tname in taken:
        tname = tname + "_"
    K = FunctionField(k, [tname])
    t = K.var(tname)
    f = FactoredFunction(K, 1, [([k.zero(), k.one()], -1)])
    g0 = WittVector.teichmuller(t, S, K)
    num = [([-x, k.one()], 1), ([x - 1, k.one()], 1)]
    den = [([k.zero(), k.one()], -1), ([-k.one(), k.one()], -1)]
    g1 = FactoredFunction(K, 1, num + den)
    gs = [g1] + [FactoredFunction.constant(K, c) for c in tail]
    return WRDatum(K, S, f, g0, gs)
