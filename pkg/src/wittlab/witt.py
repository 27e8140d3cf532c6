"""Big Witt vectors over truncation sets.

Arithmetic is transported through ghost coordinates. Over a characteristic-zero
coefficient ring the ghost map is invertible by a triangular solve; over Z the
same solve runs with exact integer divisions (any failure is a library defect);
over F_p and F_{p^n} components are lifted to Z resp. Z[y], combined there, and
reduced back, which is valid by functoriality of the Witt construction.
"""
from __future__ import annotations

from math import gcd

from .errors import (
    CharacteristicObstruction,
    DescriptorMismatch,
    EmptyTruncation,
    NotAFiniteExtension,
    NotIntegral,
    NotSubTruncation,
    ValidationError,
)
from .fields import Field, FieldElement, PrimeField, SimpleExtension, field_trace
from .polys import urem, utrim


class IntegerRing:
    """Marker ring for W_S(Z); components are python ints."""

    char = 0

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("Z")

    def __repr__(self):
        return "Z"


ZZ = IntegerRing()


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


class TruncationSet:
    """Finite divisor-closed set of positive integers."""

    __slots__ = ("elems",)

    def __init__(self, elems):
        elems = tuple(sorted(set(elems)))
        if not elems:
            raise EmptyTruncation("truncation set is empty")
        for s in elems:
            if not isinstance(s, int) or s < 1:
                raise ValidationError(f"bad truncation element {s!r}")
            for d in divisors(s):
                if d not in elems:
                    raise ValidationError(
                        f"{elems} is not divisor-closed: {d} divides {s}"
                    )
        object.__setattr__(self, "elems", elems)

    def __setattr__(self, *a):
        raise AttributeError("TruncationSet is immutable")

    @classmethod
    def closure(cls, elems) -> "TruncationSet":
        full = set()
        for s in elems:
            full.update(divisors(s))
        return cls(full)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, s) -> bool:
        return s in self.elems

    def __len__(self):
        return len(self.elems)

    def __eq__(self, other):
        return isinstance(other, TruncationSet) and other.elems == self.elems

    def __hash__(self):
        return hash(self.elems)

    def __repr__(self):
        return "{" + ",".join(map(str, self.elems)) + "}"

    def max(self) -> int:
        return self.elems[-1]

    def quotient(self, n: int) -> "TruncationSet":
        """S/n = {d : nd in S}; raises EmptyTruncation when nothing survives."""
        q = [d for d in range(1, self.max() // n + 1) if n * d in self.elems]
        if not q:
            raise EmptyTruncation(f"S/{n} is empty for S = {self!r}")
        return TruncationSet(q)

    def is_subset(self, other: "TruncationSet") -> bool:
        return all(s in other for s in self.elems)

    def p_part(self, p: int) -> "TruncationSet":
        out = [s for s in self.elems if _is_p_power(s, p)]
        if not out:
            raise EmptyTruncation(f"no powers of {p} in {self!r}")
        return TruncationSet(out)


def _is_p_power(s: int, p: int) -> bool:
    while s % p == 0:
        s //= p
    return s == 1


def _p_free_part(s: int, p: int) -> tuple[int, int]:
    """(j, p^v) with s = j * p^v and j coprime to p."""
    q = 1
    while s % p == 0:
        s //= p
        q *= p
    return s, q


# ------------------------------------------------------ lifted char-p values
# lift values are ints (prime field) or int tuples (polynomial over Z)


def _lv_add(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    a = (a,) if isinstance(a, int) else a
    b = (b,) if isinstance(b, int) else b
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _lv_neg(a):
    if isinstance(a, int):
        return -a
    return tuple(-x for x in a)

def _lv_mul(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a * b
    a = (a,) if isinstance(a, int) else a
    b = (b,) if isinstance(b, int) else b
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _lv_pow(a, n: int):
    if n == 0:
        return 1
    acc = None
    base = a
    while n:
        if n & 1:
            acc = base if acc is None else _lv_mul(acc, base)
        n >>= 1
        if n:
            base = _lv_mul(base, base)
    return acc


def _lv_scale(a, k: int):
    if isinstance(a, int):
        return a * k
    return tuple(x * k for x in a)


def _lv_divexact(a, s: int):
    if isinstance(a, int):
        q, r = divmod(a, s)
        if r:
            raise NotIntegral(f"ghost solve needs {a}/{s}")
        return q
    out = []
    for x in a:
        q, r = divmod(x, s)
        if r:
            raise NotIntegral(f"ghost solve needs {x}/{s}")
        out.append(q)
    return tuple(out)


def _ghost_generic(comps: dict, S: TruncationSet, pow_fn, scale_fn, add_fn, zero):
    out = {}
    for s in S:
        acc = zero
        for d in divisors(s):
            if d in comps:
                acc = add_fn(acc, scale_fn(pow_fn(comps[d], s // d), d))
        out[s] = acc
    return out


class WittVector:
    __slots__ = ("S", "ring", "comps")

    def __init__(self, S: TruncationSet, ring, comps: dict):
        if isinstance(ring, IntegerRing):
            cc = {s: int(comps.get(s, 0)) for s in S}
        else:
            cc = {}
            for s in S:
                v = comps.get(s, ring.zero())
                if not isinstance(v, FieldElement) or v.field != ring:
                    raise DescriptorMismatch(f"component {s} not in {ring!r}")
                cc[s] = v
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "comps", cc)

    def __setattr__(self, *a):
        raise AttributeError("WittVector is immutable")

    # ------------------------------------------------------------- builders

    @classmethod
    def zero(cls, S: TruncationSet, ring) -> "WittVector":
        return cls(S, ring, {})

    @classmethod
    def teichmuller(cls, a, S: TruncationSet, ring=None) -> "WittVector":
        if isinstance(a, FieldElement):
            ring = a.field if ring is None else ring
        elif ring is None:
            ring = ZZ
        if not isinstance(ring, IntegerRing) and not isinstance(a, FieldElement):
            a = ring.from_int(a) if isinstance(a, int) else ring.from_fraction(a)
        return cls(S, ring, {1: a})

    @classmethod
    def one(cls, S: TruncationSet, ring) -> "WittVector":
        v = 1 if isinstance(ring, IntegerRing) else ring.one()
        return cls(S, ring, {1: v})

    @classmethod
    def from_int(cls, n: int, S: TruncationSet, ring) -> "WittVector":
        return cls.one(S, ring).intmul(n)

    def component(self, s: int):
        return self.comps[s]

    def map(self, fn, ring=None) -> "WittVector":
        """Componentwise map; only valid for ring maps (functoriality)."""
        comps = {s: fn(v) for s, v in self.comps.items()}
        if ring is None:
            sample = comps[1]
            ring = sample.field if isinstance(sample, FieldElement) else ZZ
        return WittVector(self.S, ring, comps)

    # ------------------------------------------------------------ ghost side

    def ghost(self) -> dict:
        if isinstance(self.ring, IntegerRing):
            return _ghost_generic(
                self.comps, self.S, lambda v, k: v**k, lambda v, d: v * d,
                lambda a, b: a + b, 0
            )
        R = self.ring
        return _ghost_generic(
            self.comps, self.S, lambda v, k: v**k, lambda v, d: v * d,
            lambda a, b: a + b, R.zero()
        )

    @classmethod
    def unghost(cls, g: dict, S: TruncationSet, ring) -> "WittVector":
        if isinstance(ring, IntegerRing):
            comps = cls._unghost_int(g, S)
            return cls(S, ring, comps)
        if ring.char != 0:
            raise CharacteristicObstruction(
                "ghost coordinates do not determine a vector in characteristic p"
            )
        comps: dict = {}
        for s in S:
            acc = ring.zero()
            for d in divisors(s):
                if d == s:
                    continue
                acc = acc + d * comps[d] ** (s // d)
            comps[s] = (g[s] - acc) / ring.from_int(s)
        return cls(S, ring, comps)

    @staticmethod
    def _unghost_int(g: dict, S: TruncationSet) -> dict:
        comps: dict = {}
        for s in S:
            acc = 0
            for d in divisors(s):
                if d != s:
                    acc += d * comps[d] ** (s // d)
            num = g[s] - acc
            q, r = divmod(num, s)
            if r:
                raise NotIntegral(f"ghost coordinate {s} forces {num}/{s}")
            comps[s] = q
        return comps

    # ------------------------------------------------------------ arithmetic

    def _binop(self, other: "WittVector", op: str) -> "WittVector":
        if not isinstance(other, WittVector):
            if isinstance(other, int):
                other = WittVector.from_int(other, self.S, self.ring)
            else:
                return NotImplemented
        if other.S != self.S or other.ring != self.ring:
            raise DescriptorMismatch("witt vectors over different S or rings")
        kind = _ring_kind(self.ring)
        if kind in ("q", "z"):
            ga, gb = self.ghost(), other.ghost()
            if op == "add":
                g = {s: ga[s] + gb[s] for s in self.S}
            elif op == "sub":
                g = {s: ga[s] - gb[s] for s in self.S}
            else:
                g = {s: ga[s] * gb[s] for s in self.S}
            if kind == "z":
                try:
                    return WittVector.unghost(g, self.S, self.ring)
                except NotIntegral as e:  # pragma: no cover - defect guard
                    raise AssertionError(f"integral ghost transport failed: {e}")
            return WittVector.unghost(g, self.S, self.ring)
        return _char_p_binop(self, other, op)

    def __add__(self, other):
        return self._binop(other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, "sub")

    def __mul__(self, other):
        if isinstance(other, int):
            return self.intmul(other)
        return self._binop(other, "mul")

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.intmul(other)
        return self._binop(other, "mul")

    def __neg__(self):
        return self.intmul(-1)

    def intmul(self, n: int) -> "WittVector":
        kind = _ring_kind(self.ring)
        if kind == "q":
            g = self.ghost()
            return WittVector.unghost(
                {s: g[s] * n for s in self.S}, self.S, self.ring
            )
        if kind == "z":
            g = self.ghost()
            return WittVector.unghost({s: g[s] * n for s in self.S}, self.S, ZZ)
        return _char_p_unary(self, lambda g: {s: _lv_scale(g[s], n) for s in self.S})

    def __eq__(self, other):
        return (
            isinstance(other, WittVector)
            and other.S == self.S
            and other.ring == self.ring
            and other.comps == self.comps
        )

    def __hash__(self):
        return hash((self.S, self.ring, tuple(sorted((s, v) for s, v in self.comps.items()))))

    def is_zero(self) -> bool:
        if isinstance(self.ring, IntegerRing):
            return all(v == 0 for v in self.comps.values())
        return all(v.is_zero() for v in self.comps.values())

    # ------------------------------------------------------------- operators

    def frobenius(self, n: int) -> "WittVector":
        """F_n : W_S -> W_{S/n}, ghost-indexed by gh_s(F_n w) = gh_{sn}(w)."""
        if n < 1:
            raise ValidationError("frobenius index must be positive")
        Sn = self.S.quotient(n)
        kind = _ring_kind(self.ring)
        if kind in ("q", "z"):
            g = self.ghost()
            gq = {t: g[t * n] for t in Sn}
            if kind == "z":
                return WittVector.unghost(gq, Sn, ZZ)
            return WittVector.unghost(gq, Sn, self.ring)
        return _char_p_unary(self, lambda g: {t: g[t * n] for t in Sn}, Sn)

    def verschiebung(self, n: int, S: TruncationSet) -> "WittVector":
        """V_n : W_{S/n} -> W_S, (V_n w)_s = w_{s/n} when n | s, else 0."""
        if S.quotient(n) != self.S:
            raise NotSubTruncation(f"target {S!r} has {S!r}/{n} != {self.S!r}")
        zero = 0 if isinstance(self.ring, IntegerRing) else self.ring.zero()
        comps = {
            s: (self.comps[s // n] if s % n == 0 else zero) for s in S
        }
        return WittVector(S, self.ring, comps)

    def restrict(self, T: TruncationSet) -> "WittVector":
        if not T.is_subset(self.S):
            raise NotSubTruncation(f"{T!r} is not contained in {self.S!r}")
        return WittVector(T, self.ring, {s: self.comps[s] for s in T})


def _ring_kind(ring) -> str:
    if isinstance(ring, IntegerRing):
        return "z"
    if isinstance(ring, PrimeField):
        return "p"
    if isinstance(ring, SimpleExtension) and isinstance(ring.base, PrimeField):
        return "pk"
    if isinstance(ring, Field) and ring.char == 0:
        return "q"
    raise ValidationError(f"unsupported witt coefficient ring {ring!r}")


# ------------------------------------------------------------- char-p engine


def canonical_lift(v) -> object:
    """Smallest nonnegative lift: int for F_p, int tuple for F_{p^n}."""
    F = v.field
    if isinstance(F, PrimeField):
        return v.payload
    return tuple(c.payload for c in v.payload)


def _reduce_lift(ring, lv):
    if isinstance(ring, PrimeField):
        i = lv if isinstance(lv, int) else (lv[0] if lv else 0)
        return ring.from_int(i)
    p = ring.base
    cs = (lv,) if isinstance(lv, int) else lv
    coeffs = utrim([p.from_int(c) for c in cs])
    red = urem(p, coeffs, list(ring.minpoly))
    return ring.element(ring._pad(red))

def _lift_vector(w: WittVector, lift_override=None) -> dict:
    out = {}
    for s, v in w.comps.items():
        if lift_override and s in lift_override:
            out[s] = lift_override[s]
        else:
            out[s] = canonical_lift(v)
    return out


def _lift_ghost(lifted: dict, S: TruncationSet) -> dict:
    return _ghost_generic(lifted, S, _lv_pow, _lv_scale, _lv_add, 0)


def _lift_unghost(g: dict, S: TruncationSet) -> dict:
    comps: dict = {}
    for s in S:
        acc = 0
        for d in divisors(s):
            if d != s:
                acc = _lv_add(acc, _lv_scale(_lv_pow(comps[d], s // d), d))
        comps[s] = _lv_divexact(_lv_add(g[s], _lv_neg(acc)), s)
    return comps


def _char_p_binop(a: WittVector, b: WittVector, op: str,
                  lift_a=None, lift_b=None) -> WittVector:
    ga = _lift_ghost(_lift_vector(a, lift_a), a.S)
    gb = _lift_ghost(_lift_vector(b, lift_b), b.S)
    if op == "add":
        g = {s: _lv_add(ga[s], gb[s]) for s in a.S}
    elif op == "sub":
        g = {s: _lv_add(ga[s], _lv_neg(gb[s])) for s in a.S}
    else:
        g = {s: _lv_mul(ga[s], gb[s]) for s in a.S}
    comps = _lift_unghost(g, a.S)
    return WittVector(a.S, a.ring, {s: _reduce_lift(a.ring, v) for s, v in comps.items()})


def _char_p_unary(w: WittVector, ghost_map, S_out=None) -> WittVector:
    S_out = S_out or w.S
    g = ghost_map(_lift_ghost(_lift_vector(w), w.S))
    comps = _lift_unghost(g, S_out)
    return WittVector(S_out, w.ring, {s: _reduce_lift(w.ring, v) for s, v in comps.items()})


def witt_op_char_p(a: WittVector, b: WittVector, op: str,
                   lift_a=None, lift_b=None) -> WittVector:
    """Char-p arithmetic with caller-chosen integral lifts (must reduce back
    to the inputs mod p); exists so lift-independence can be demonstrated."""
    if _ring_kind(a.ring) not in ("p", "pk"):
        raise ValidationError("lift arithmetic only applies in characteristic p")
    return _char_p_binop(a, b, op, lift_a, lift_b)


# ------------------------------------------------------------ trace and more


def witt_trace(w: WittVector, F) -> WittVector:
    """Trace along a finite extension, componentwise on ghosts in char 0 and
    as a sum of Frobenius twists for F_{p^n} over F_p."""
    R = w.ring
    if R == F:
        return w
    kind = _ring_kind(R)
    if kind == "q":
        g = w.ghost()
        tg = {s: field_trace(v, F) for s, v in g.items()}
        return WittVector.unghost(tg, w.S, F)
    if kind == "pk" and isinstance(F, PrimeField) and R.base == F:
        p = F.p
        n = R.deg
        acc = None
        cur = w
        for _ in range(n):
            acc = cur if acc is None else acc + cur
            cur = cur.map(lambda e: e**p)
        comps = {}
        for s, v in acc.comps.items():
            if any(not c.is_zero() for c in v.payload[1:]):
                raise AssertionError("trace left the prime field")
            comps[s] = F.element(v.payload[0].payload)
        return WittVector(w.S, F, comps)
    raise NotAFiniteExtension(f"no witt trace from {R!r} to {F!r}")


def p_typical_decompose(w: WittVector, p: int) -> dict:
    """Split w into p-typical pieces indexed by j in S coprime to p."""
    out = {}
    for j in w.S:
        if gcd(j, p) == 1:
            piece = w.frobenius(j)
            out[j] = piece.restrict(piece.S.p_part(p))
    return out


def p_typical_recompose(parts: dict, S: TruncationSet, p: int, ring) -> WittVector:
    if _ring_kind(ring) != "q":
        raise CharacteristicObstruction("recomposition runs through ghost coordinates")
    g = {}
    for s in S:
        j, q = _p_free_part(s, p)
        g[s] = parts[j].ghost()[q]
    return WittVector.unghost(g, S, ring)
