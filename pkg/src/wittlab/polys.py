"""Polynomial engines shared by the field tower.

Univariate polynomials are plain python lists of field elements, lowest degree
first and always trimmed. Multivariate polynomials (MPoly) are immutable
exponent-dict polynomials over a coefficient field; they are the numerators and
denominators inside rational function fields, so gcd and exact division live
here. Everything is exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd, isqrt as _isqrt, lcm as _ilcm

from .errors import DivisionByZero, ValidationError

# ----------------------------------------------------------------- univariate
# coefficients are FieldElements of a single field F, passed for zero/one


def utrim(cs: list) -> list:
    n = len(cs)
    while n and cs[n - 1].is_zero():
        n -= 1
    return list(cs[:n])


def uconst(F, c) -> list:
    return [] if c.is_zero() else [c]


def uadd(F, a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return utrim(out)


def uneg(a: list) -> list:
    return [-c for c in a]


def usub(F, a: list, b: list) -> list:
    return uadd(F, a, uneg(b))


def uscale(a: list, c) -> list:
    if c.is_zero():
        return []
    return utrim([x * c for x in a])


def umul(F, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return utrim(out)


def udivmod(F, a: list, b: list) -> tuple[list, list]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    inv_lb = F.one() / b[-1]
    q = [F.zero()] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b):
        k = len(r) - len(b)
        c = r[-1] * inv_lb
        q[k] = c
        for i in range(len(b) - 1):
            r[k + i] = r[k + i] - c * b[i]
        r.pop()
        r = utrim(r)
    return utrim(q), r


def urem(F, a: list, b: list) -> list:
    return udivmod(F, a, b)[1]


def _as_fractions(a: list):
    """Coefficients as plain Fractions when the field is the rationals."""
    out = []
    for c in a:
        p = getattr(c, "payload", None)
        if not isinstance(p, Fraction):
            return None
        out.append(p)
    return out


def _int_primitive(v: list) -> list:
    g = 0
    for c in v:
        g = _igcd(g, c)
        if g == 1:
            return v
    return v if g == 0 else [c // g for c in v]


def _int_prem(A: list, B: list) -> list:
    dB = len(B) - 1
    lb = B[-1]
    R = list(A)
    while R and len(R) - 1 >= dB:
        lr = R.pop()
        shift = len(R) - dB
        R = [lb * c for c in R]
        for j in range(dB):
            R[shift + j] -= lr * B[j]
        while R and R[-1] == 0:
            R.pop()
    return R


def _mr_is_prime(n: int) -> bool:
    for p in (2, 3, 5, 7):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_GCD_PRIMES: list = []


def _gcd_prime(i: int) -> int:
    n = _GCD_PRIMES[-1] - 2 if _GCD_PRIMES else (1 << 30) - 1
    while len(_GCD_PRIMES) <= i:
        while not _mr_is_prime(n):
            n -= 2
        _GCD_PRIMES.append(n)
        n -= 2
    return _GCD_PRIMES[i]


def _poly_mod(v: list, p: int):
    """Reduce rational coefficients mod p; None when a denominator or the
    leading coefficient vanishes (the prime is unusable for gcd images)."""
    out = []
    for q in v:
        dn = q.denominator % p
        if dn == 0:
            return None
        out.append(q.numerator % p * pow(dn, -1, p) % p)
    if out[-1] == 0:
        return None
    return out


def _polyrem_mod(a: list, b: list, p: int) -> list:
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    while len(a) - 1 >= db:
        c = a[-1] * inv % p
        if c:
            shift = len(a) - 1 - db
            for j in range(db):
                a[shift + j] = (a[shift + j] - c * b[j]) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _gcd_mod(a: list, b: list, p: int) -> list:
    while b:
        a, b = b, _polyrem_mod(a, b, p)
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _rat_recon(r: int, m: int):
    """Fraction n/d with n ≡ d·r (mod m) and |n|, d ≤ sqrt(m/2), or None."""
    bound = _isqrt(m // 2)
    r0, t0 = m, 0
    r1, t1 = r % m, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    return Fraction(r1, t1) if t1 > 0 else Fraction(-r1, -t1)


def _monic_divides(g: list, v: list) -> bool:
    r = list(v)
    dg = len(g) - 1
    while len(r) - 1 >= dg:
        c = r[-1]
        if c:
            shift = len(r) - 1 - dg
            for j in range(dg):
                r[shift + j] -= c * g[j]
        r.pop()
        while r and not r[-1]:
            r.pop()
    return not r


def _crt_reconstruct(images: list, deg: int):
    """Coefficient list from prime images via CRT + rational reconstruction,
    or None when the combined modulus is still too small."""
    cand = []
    for k in range(deg + 1):
        r, m = 0, 1
        for pp, gg in images:
            r += m * ((gg[k] - r) * pow(m % pp, -1, pp) % pp)
            m *= pp
        q = _rat_recon(r, m)
        if q is None:
            return None
        cand.append(q)
    return cand


def _divides_mod(g: list, v: list, p: int) -> bool:
    gm, vm = _poly_mod(g, p), _poly_mod(v, p)
    if gm is None or vm is None:
        return True  # unusable prime: inconclusive, let exact division decide
    return not _polyrem_mod(vm, gm, p)


def _zgcd_modular(a: list, b: list):
    """Monic gcd over the rationals from gcd images mod word-size primes,
    recombined by CRT and rational reconstruction.  A single degree-0 image
    certifies coprimality outright (the image of the true gcd keeps its degree
    whenever the leading coefficients survive reduction).  Nontrivial
    candidates are prechecked against a fresh prime, then verified by exact
    division; None when the prime budget is exhausted (sized from the input
    coefficient heights) and the caller must fall back."""
    hb = 1
    for v in (a, b):
        for q in v:
            hb = max(hb, q.numerator.bit_length(), q.denominator.bit_length())
    budget = max(24, (2 * hb + len(a) + len(b) + 64) // 29 + 8)
    images = []
    deg_min = None
    index = 0
    used = 0
    attempt_at = 1
    while used < budget:
        p = _gcd_prime(index)
        index += 1
        am, bm = _poly_mod(a, p), _poly_mod(b, p)
        if am is None or bm is None:
            continue
        used += 1
        g = _gcd_mod(am, bm, p)
        d = len(g) - 1
        if d == 0:
            return [Fraction(1)]
        if deg_min is None or d < deg_min:
            deg_min, images = d, [(p, g)]
        elif d == deg_min:
            images.append((p, g))
        else:
            continue  # unlucky larger-degree image
        if len(images) < attempt_at and used < budget:
            continue
        attempt_at = 2 * len(images)
        cand = _crt_reconstruct(images, deg_min)
        if cand is None or cand[-1] != 1:
            continue
        check = _gcd_prime(index)
        if (_divides_mod(cand, a, check) and _divides_mod(cand, b, check)
                and _monic_divides(cand, a) and _monic_divides(cand, b)):
            return cand
    return None


def _zgcd_monic(a: list, b: list) -> list:
    """Monic gcd of rational coefficient lists: modular images first, with an
    integer primitive pseudo-remainder sequence as the unconditional fallback;
    both are immune to the coefficient explosion of plain Euclid over the
    rationals."""
    if len(a) == 1 or len(b) == 1:
        return [Fraction(1)]
    g = _zgcd_modular(a, b)
    if g is not None:
        return g

    def clear(v):
        den = 1
        for q in v:
            den = _ilcm(den, q.denominator)
        return _int_primitive([int(q * den) for q in v])

    A, B = clear(a), clear(b)
    if len(A) < len(B):
        A, B = B, A
    while B:
        A, B = B, _int_primitive(_int_prem(A, B))
    lc = A[-1]
    return [Fraction(c, lc) for c in A]


def ugcd(F, a: list, b: list) -> list:
    a, b = utrim(a), utrim(b)
    if a and b:
        ra, rb = _as_fractions(a), _as_fractions(b)
        if ra is not None and rb is not None:
            return [F.from_fraction(q) for q in _zgcd_monic(ra, rb)]
    while b:
        a, b = b, urem(F, a, b)
    if not a:
        return []
    return uscale(a, F.one() / a[-1])


def uextgcd(F, a: list, b: list) -> tuple[list, list, list]:
    """Monic g = gcd(a, b) together with s, t satisfying s*a + t*b = g."""
    r0, r1 = utrim(a), utrim(b)
    s0, s1 = [F.one()], []
    t0, t1 = [], [F.one()]
    while r1:
        q, r = udivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, usub(F, s0, umul(F, q, s1))
        t0, t1 = t1, usub(F, t0, umul(F, q, t1))
    if not r0:
        return [], s0, t0
    c = F.one() / r0[-1]
    return uscale(r0, c), uscale(s0, c), uscale(t0, c)


def ueval(F, a: list, x):
    acc = F.zero()
    for c in reversed(a):
        acc = acc * x + c
    return acc


def uderiv(F, a: list) -> list:
    return utrim([a[i] * i for i in range(1, len(a))])


def umonic(F, a: list) -> list:
    a = utrim(a)
    if not a:
        return a
    return uscale(a, F.one() / a[-1])


def usquarefree(F, a: list) -> bool:
    a = utrim(a)
    if len(a) <= 1:
        return True
    return len(ugcd(F, a, uderiv(F, a))) == 1


# --------------------------------------------------------------- multivariate


class MPoly:
    """Immutable multivariate polynomial over a coefficient field."""

    __slots__ = ("field", "nvars", "terms", "_h")

    def __init__(self, field, nvars: int, terms: dict, clean: bool = False):
        if not clean:
            terms = {e: c for e, c in terms.items() if not c.is_zero()}
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_h", None)

    def __setattr__(self, *a):
        raise AttributeError("MPoly is immutable")

    @classmethod
    def zero(cls, field, nvars: int) -> "MPoly":
        return cls(field, nvars, {}, clean=True)

    @classmethod
    def const(cls, field, nvars: int, c) -> "MPoly":
        if c.is_zero():
            return cls.zero(field, nvars)
        return cls(field, nvars, {(0,) * nvars: c}, clean=True)

    @classmethod
    def variable(cls, field, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): field.one()}, clean=True)

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def const_value(self):
        if self.is_zero():
            return self.field.zero()
        return self.terms[(0,) * self.nvars]

    def __eq__(self, other):
        return (
            isinstance(other, MPoly)
            and self.nvars == other.nvars
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._h is None:
            object.__setattr__(
                self, "_h", hash((self.nvars, frozenset(self.terms.items())))
            )
        return self._h

    def __add__(self, other: "MPoly") -> "MPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return MPoly(self.field, self.nvars, out, clean=True)

    def __neg__(self) -> "MPoly":
        return MPoly(
            self.field, self.nvars, {e: -c for e, c in self.terms.items()}, clean=True
        )

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        if self.is_zero() or other.is_zero():
            return MPoly.zero(self.field, self.nvars)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                if e in out:
                    s = out[e] + p
                    if s.is_zero():
                        del out[e]
                    else:
                        out[e] = s
                elif not p.is_zero():
                    out[e] = p
        return MPoly(self.field, self.nvars, out, clean=True)

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValidationError("negative power of a polynomial")
        acc = MPoly.const(self.field, self.nvars, self.field.one())
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def scale(self, c) -> "MPoly":
        if c.is_zero():
            return MPoly.zero(self.field, self.nvars)
        return MPoly(
            self.field, self.nvars, {e: x * c for e, x in self.terms.items()}, clean=True
        )

    def lex_leading(self) -> tuple[tuple, object]:
        e = max(self.terms)
        return e, self.terms[e]

    def lex_monic(self) -> "MPoly":
        if self.is_zero():
            return self
        _, c = self.lex_leading()
        return self.scale(self.field.one() / c)

    def degree_in(self, i: int) -> int:
        if self.is_zero():
            return -1
        return max(e[i] for e in self.terms)

    def deriv(self, i: int) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MPoly(self.field, self.nvars, out)

    def coeff_map(self, fn, field=None) -> "MPoly":
        return MPoly(
            field or self.field,
            self.nvars,
            {e: fn(c) for e, c in self.terms.items()},
        )

    def evaluate(self, images: list, cmap):
        """Sum of cmap(coeff) * prod(images[i]**e[i]); images live in any ring."""
        acc = None
        for e, c in self.terms.items():
            term = cmap(c)
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** k
            acc = term if acc is None else acc + term
        return acc

    def divexact(self, g: "MPoly") -> "MPoly":
        """Exact division by a known divisor; lex reduction, raises if inexact."""
        if g.is_zero():
            raise DivisionByZero("exact division by zero polynomial")
        q: dict = {}
        r = self
        eg, cg = g.lex_leading()
        while not r.is_zero():
            er, cr = r.lex_leading()
            e = tuple(a - b for a, b in zip(er, eg))
            if any(x < 0 for x in e):
                raise ValidationError("inexact polynomial division")
            c = cr / cg
            q[e] = c
            r = r - MPoly(self.field, self.nvars, {e: c}, clean=True) * g
        return MPoly(self.field, self.nvars, q)

    # univariate views used by gcd and by the places module

    def to_univar(self, main: int) -> list:
        """Coefficient list in variable `main`, coefficients drop that variable."""
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            rest = e[:main] + e[main + 1 :]
            buckets.setdefault(e[main], {})[rest] = c
        deg = max(buckets) if buckets else -1
        return [
            MPoly(self.field, self.nvars - 1, buckets.get(d, {}), clean=True)
            for d in range(deg + 1)
        ]

    @classmethod
    def from_univar(cls, field, nvars: int, main: int, coeffs: list) -> "MPoly":
        out = {}
        for d, p in enumerate(coeffs):
            for e, c in p.terms.items():
                out[e[:main] + (d,) + e[main:]] = c
        return cls(field, nvars, out, clean=True)

    def as_upoly(self) -> list:
        """Single-variable polynomial as a plain coefficient list."""
        if self.nvars != 1:
            raise ValidationError("as_upoly needs exactly one variable")
        deg = self.degree_in(0)
        out = [self.field.zero()] * (deg + 1)
        for e, c in self.terms.items():
            out[e[0]] = c
        return out

    @classmethod
    def from_upoly(cls, field, coeffs: list) -> "MPoly":
        return cls(field, 1, {(i,): c for i, c in enumerate(coeffs)})

    def str_with(self, names: tuple) -> str:
        if self.is_zero():
            return "0"
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i]
                for i, k in enumerate(e)
                if k
            )
            cs = str(c)
            if mono:
                if cs == "1":
                    bits.append(mono)
                elif cs == "-1":
                    bits.append(f"-{mono}")
                else:
                    cs = f"({cs})" if ("+" in cs[1:] or "-" in cs[1:] or "/" in cs) else cs
                    bits.append(f"{cs}*{mono}")
            else:
                bits.append(f"({cs})" if "+" in cs[1:] or "-" in cs[1:] else cs)
        return " + ".join(bits).replace("+ -", "- ")


def _trim_list(cs: list) -> list:
    n = len(cs)
    while n and cs[n - 1].is_zero():
        n -= 1
    return cs[:n]


def _prem(A: list, B: list) -> list:
    """Pseudo-remainder of coefficient lists of MPolys in one main variable."""
    R = list(A)
    dB = len(B) - 1
    lb = B[-1]
    while R and len(R) - 1 >= dB:
        lr = R[-1]
        shift = len(R) - 1 - dB
        R = [lb * c for c in R[:-1]]
        for j in range(dB):
            R[shift + j] = R[shift + j] - lr * B[j]
        R = _trim_list(R)
    return R


def _content(coeffs: list, field, nvars: int) -> MPoly:
    g = MPoly.zero(field, nvars)
    for c in coeffs:
        g = mpoly_gcd(g, c)
        if g.is_const() and not g.is_zero():
            break
    return g


def _list_scalar_primitive(A: list) -> list:
    """Jointly rescale a coefficient list of MPolys over the rationals so all
    coefficients become coprime integers.  Pseudo-remainder sequences explode
    without this scalar stripping; over other fields it is a no-op."""
    den = 1
    for p in A:
        for c in p.terms.values():
            q = getattr(c, "payload", None)
            if not isinstance(q, Fraction):
                return A
            den = _ilcm(den, q.denominator)
    g = 0
    for p in A:
        for c in p.terms.values():
            g = _igcd(g, int(c.payload * den))
            if g == 1 and den == 1:
                return A
    if g == 0:
        return A
    field = A[-1].field
    s = field.from_fraction(Fraction(den, g))
    return [p.scale(s) for p in A]


def _eval_except(p: MPoly, keep: int, points: dict) -> list:
    """Univariate coefficient list in variable `keep`, every other variable
    evaluated at the supplied field elements."""
    F = p.field
    out: dict = {}
    for e, c in p.terms.items():
        term = c
        for i, ei in enumerate(e):
            if i != keep and ei:
                term = term * points[i] ** ei
        d = e[keep]
        out[d] = out[d] + term if d in out else term
    if not out:
        return []
    return utrim([out.get(i, F.zero()) for i in range(max(out) + 1)])


def _coprime_probe(f: MPoly, g: MPoly, live: list) -> bool:
    """Certify gcd(f, g) is constant by specialization: for each live
    variable, if the leading coefficients in it survive evaluation of the
    others at integer points and the specialized univariate gcd is trivial,
    the true gcd has degree zero in that variable (its leading coefficient
    divides the surviving one).  Trivial in every variable means a unit."""
    F = f.field
    for keep in live:
        certified = False
        for base in (2, -3, 5):
            points = {i: F.from_int(base + 7 * i)
                      for i in range(f.nvars) if i != keep}
            ua = _eval_except(f, keep, points)
            ub = _eval_except(g, keep, points)
            if (len(ua) - 1 != f.degree_in(keep)
                    or len(ub) - 1 != g.degree_in(keep)):
                continue
            if len(ugcd(F, ua, ub)) == 1:
                certified = True
                break
        if not certified:
            return False
    return True


def mpoly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """Lex-monic gcd. Uses monic Euclid when one variable is live, otherwise a
    primitive pseudo-remainder sequence with recursive contents; a cheap
    specialization probe certifies the (dominant) coprime case first."""
    if f.is_zero():
        return g.lex_monic()
    if g.is_zero():
        return f.lex_monic()
    one = MPoly.const(f.field, f.nvars, f.field.one())
    if f.is_const() or g.is_const():
        return one
    live = [
        i
        for i in range(f.nvars)
        if f.degree_in(i) > 0 or g.degree_in(i) > 0
    ]
    if len(live) > 1 and _coprime_probe(f, g, live):
        return one
    if len(live) == 1:
        v = live[0]
        F = f.field
        a = [p.const_value() for p in f.to_univar(v)]
        b = [p.const_value() for p in g.to_univar(v)]
        h = ugcd(F, a, b)
        consts = [MPoly.const(F, f.nvars - 1, c) for c in h]
        return MPoly.from_univar(F, f.nvars, v, consts)
    main = live[-1]
    A = f.to_univar(main)
    B = g.to_univar(main)
    ca = _content(A, f.field, f.nvars - 1)
    cb = _content(B, f.field, f.nvars - 1)
    A = _list_scalar_primitive([c.divexact(ca) for c in A])
    B = _list_scalar_primitive([c.divexact(cb) for c in B])
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = _prem(A, B)
        if R:
            cr = _content(R, f.field, f.nvars - 1)
            R = _list_scalar_primitive([c.divexact(cr) for c in R])
        A, B = B, R
    cc = mpoly_gcd(ca, cb)
    res = MPoly.from_univar(f.field, f.nvars, main, [c * cc for c in A])
    return res.lex_monic()
