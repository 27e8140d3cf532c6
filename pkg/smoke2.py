import sys
sys.path.insert(0, "src")
from fractions import Fraction

from wittlab import *
from wittlab.fields import FunctionField
from wittlab.laurent import LaurentSeries

ok = 0


def check(name, got, want):
    global ok
    if got != want:
        print(f"FAIL {name}:\n  got  {got!r}\n  want {want!r}")
        sys.exit(1)
    ok += 1
    print(f"ok {name}")


# ---------------------------------------------------------------- forms
k = FunctionField(QQ, ["x", "y"])
x = k.var("x")
y = k.var("y")
dx = differential(x)
dy = differential(y)
check("d(x*y)", differential(x * y), dx.scale(y) + dy.scale(x))
check("antisym", dx * dy, -(dy * dx))
check("dx^dx=0", (dx * dx).is_zero(), True)
check("d(x dy)=dx^dy", dy.scale(x).d(), dx * dy)
check("d^2(x^2 y)", differential(x * x * y).d().is_zero(), True)
check("dlog(xy)", dlog(x * y), dlog(x) + dlog(y))
check("leibniz", differential(x * y * y),
      dx.scale(y * y) + dy.scale(x * y) + dy.scale(x * y))

# number-field coefficients: d kills algebraic generators
E = number_field([-2, 0, 1], "r2")  # r2^2 = 2
r2 = E.gen()
check("d(sqrt2)=0", differential(r2).is_zero(), True)
F = FunctionField(E, ["x"])
xe = F.var("x")
r2F = embed(r2, F)
check("d(r2*x)", differential(r2F * xe), differential(xe).scale(r2F))
kq1 = FunctionField(QQ, ["x"])
L = SimpleExtension(kq1, [kq1.from_int(-2), kq1.zero(), kq1.one()], "r2")
xl = embed(kq1.var("x"), L)
check("trace_form", trace_form(differential(xl).scale(L.gen() * L.gen()), kq1),
      differential(kq1.var("x")).scale(kq1.from_int(4)))
check("trace_form kills odd", trace_form(differential(xl).scale(L.gen()), kq1)
      .is_zero(), True)

# ---------------------------------------------------------------- ghost forms
S6 = TruncationSet([1, 2, 3, 6])
K = FunctionField(QQ, ["t"])
t = K.var("t")
w_t = WittVector.teichmuller(t, S6, K)
gf = GhostForm.from_witt(w_t)
check("ghost coords of [t]", [gf.coordinate(s).constant_value() for s in S6],
      [t, t * t, t * t * t, t ** 6])
check("dF = nFd", gf.frobenius(2).d(), gf.d().frobenius(2).intmul(2))
T = TruncationSet([1, 2])
small = GhostForm.from_witt(WittVector.teichmuller(t, TruncationSet([1]), K))
check("Vd = ndV", small.d().verschiebung(2, T),
      small.verschiebung(2, T).d().intmul(2))
wv = WittVector.teichmuller(t, TruncationSet([1, 3]), K)
check("FV=n", wv.verschiebung(2, TruncationSet([1, 2, 3, 6])).frobenius(2),
      wv.intmul(2))
check("dlog_teich mult", dlog_teich(t * t, S6), dlog_teich(t, S6).intmul(2))

# ---------------------------------------------------------------- laurent/local
P0 = Place.finite(K, [QQ.zero(), QQ.one()])   # (t)
Pinf = Place.infinite(K)
f1 = (1 + t) * t.inverse()
s1 = local_expand(f1, P0, 8)
check("val (1+t)/t", s1.order, -1)
check("lead", s1.coefficient(-1), QQ.one())
check("next", s1.coefficient(0), QQ.one())
check("val at inf", valuation(f1, Pinf), 0)
check("val at inf 1/t", valuation(t.inverse(), Pinf), 1)
check("val at inf t^2", valuation(t * t, Pinf), -2)
check("evaluate (t+2)/(t+1) at 0", evaluate_at((t + 2) / (t + 1), P0),
      QQ.from_int(2))

# residues
check("Res(du/u)=1", refined_residue(dlog(t), P0),
      DifferentialForm.function(QQ.one()))
kx = FunctionField(QQ, ["x"])
Kx = FunctionField(kx, ["t"])
tx = Kx.var("t")
xx = Kx.var("x")
P0x = Place.finite(Kx, [kx.zero(), kx.one()])
check("Res(dlog t ^ dx) = -dx", refined_residue(dlog(tx) * differential(xx), P0x),
      -differential(kx.var("x")))
check("Res((1/u)dx^du) = +dx", refined_residue(differential(xx) * dlog(tx), P0x),
      differential(kx.var("x")))
om2 = differential(xx).scale(xx + tx) * dlog(tx)
check("Res(w dlog t)=w(0)", refined_residue(om2, P0x),
      differential(kx.var("x")).scale(kx.var("x")))
check("Res regular", refined_residue(differential(tx).scale(tx), P0x).is_zero(),
      True)
P2 = Place.finite(K, [QQ.one(), QQ.zero(), QQ.one()])  # t^2+1
check("Res dlog(t^2+1) at (t^2+1)", refined_residue(dlog(t * t + 1), P2),
      DifferentialForm.function(P2.residue_field.one()))
check("Res_inf dt", refined_residue(differential(t), Pinf).is_zero(), True)
check("Res_inf dlog t", refined_residue(dlog(t), Pinf),
      -DifferentialForm.function(QQ.one()))

# unit-symbol identity at a place with non-constant theta: (t - x)
Ptx = Place.finite(Kx, [-kx.var("x"), kx.one()])
wv2 = WittVector.teichmuller(xx + tx, TruncationSet([1, 2]), Kx)
sym = witt_local_symbol(wv2, (tx - xx) ** 3, Ptx)
check("unit-symbol = v(f) w(P)", sym, witt_evaluate(wv2, Ptx).intmul(3))

# ---------------------------------------------------------------- formula (g)
S = TruncationSet([1, 2, 3, 6])
closed = residue_formula_g(1, 1, -1, 1, QQ.from_int(2), QQ.from_int(3), S)
series = residue_formula_g_series(1, 1, -1, 1, QQ.from_int(2),
                                  QQ.from_int(3), S)
check("g closed==series (1,1,-1,1)", closed, series)
check("g value", closed.comps[1], QQ.from_int(6))
for (nn, mm, jj, ii) in [(2, 1, -1, 2), (1, 2, -2, 1), (2, 2, -1, 1),
                         (3, 1, 1, -3), (2, 3, 3, -2), (2, 2, 1, 1)]:
    c2 = residue_formula_g(nn, mm, jj, ii, QQ.from_int(2), QQ.from_int(5), S)
    s2 = residue_formula_g_series(nn, mm, jj, ii, QQ.from_int(2),
                                  QQ.from_int(5), S)
    check(f"g {(nn,mm,jj,ii)}", c2, s2)

# ---------------------------------------------------------------- milnor
check("tame {1-t,t}", tame_symbol(1 - t, t, P0), QQ.one())
check("tame {t,t}", tame_symbol(t, t, P0), -QQ.one())
check("boundary {1-t,t} k1", boundary(MilnorSymbol.of(1 - t, t), P0).k1_value(),
      QQ.one())
check("boundary {t,t} k1", boundary(MilnorSymbol.of(t, t), P0).k1_value(),
      -QQ.one())
for (g_, f_) in [((t + 1) * t, (t + 2) * t ** 2), (t ** 3 * (t - 1), (1 - t) * t),
                 ((t + 1) / t, t * t + t)]:
    check(f"tame==k1(boundary) at {g_}", tame_symbol(g_, f_, P0),
          boundary(MilnorSymbol.of(g_, f_), P0).k1_value())

ff = FactoredFunction(K, 1, [([QQ.zero(), QQ.one()], 1),
                             ([-QQ.one(), QQ.one()], 1)])   # t(t-1)
gg = FactoredFunction(K, Fraction(3), [([QQ.one(), QQ.one()], 1)])  # 3(t+1)
check("weil", weil_reciprocity_product(ff, gg, QQ), QQ.one())
ff2 = FactoredFunction(K, 1, [([QQ.one(), QQ.zero(), QQ.one()], 1)])  # t^2+1
gg2 = FactoredFunction(K, 1, [([QQ.zero(), QQ.one()], 2),
                              ([QQ.from_int(-2), QQ.one()], -1)])  # t^2/(t-2)
check("weil deg2", weil_reciprocity_product(ff2, gg2, QQ), QQ.one())

# residue theorem
om3 = dlog(t * (t - 1))
pl = [P0, Place.finite(K, [-QQ.one(), QQ.one()])]
check("res thm dlog(t(t-1))", residue_theorem_sum(om3, pl).is_zero(), True)
om4 = differential(t).scale((t * t + 1).inverse())
check("res thm dt/(t^2+1)", residue_theorem_sum(om4, [P2]).is_zero(), True)
om5 = dlog(tx - xx) * dlog(xx)
check("res thm 2-form", residue_theorem_sum(om5, [Ptx]).is_zero(), True)
gf5 = GhostForm.from_witt(wv2) * dlog_teich((tx - xx) / tx, TruncationSet([1, 2]))
check("res thm ghost", residue_theorem_sum(gf5, [Ptx, P0x]).is_zero(), True)

# ramified pullback
a_, b_ = ramified_pullback_check(dlog(t), 3)
check("ramified dlog t", a_, b_)
a2_, b2_ = ramified_pullback_check(differential(t).scale((t - 1).inverse()), 2)
check("ramified dt/(t-1)", a2_, b2_)

# trace-residue square
kpi = number_field([-2, 0, 1], "a")
A = FunctionField(kpi, ["t"])
ta = A.var("t")
aa = embed(kpi.gen(), A)
omA = differential(ta).scale((ta - aa).inverse())
lhsq, rhsq = trace_residue_square_check(omA, QQ)
check("trace-residue square", lhsq, rhsq)

# ---------------------------------------------------------------- somekawa
kq = FunctionField(QQ, ["x"])
xq = kq.var("x")
S1 = TruncationSet([1])
symS = SomekawaSymbol(kq, kq, WittVector.teichmuller(xq, S1, kq), [xq])
check("psi {x,x} = dx", psi(symS), differential(xq))
om6 = differential(xq).scale(xq * xq + 1)
check("psi.phi=id", psi(phi(dlog_presentation(om6), kq)), om6)
kq2 = FunctionField(QQ, ["x", "y"])
om7 = (differential(kq2.var("x")) * differential(kq2.var("y"))).scale(
    kq2.var("x") + kq2.var("y"))
check("psi.phi=id deg2", psi(phi(dlog_presentation(om7), kq2)), om7)

kQ = FunctionField(QQ, ["x"])
kE = SimpleExtension(kQ, [kQ.from_int(-2), kQ.zero(), kQ.one()], "s2")
xE = embed(kQ.var("x"), kE)
wE = WittVector.teichmuller(xE * kE.gen(), S1, kE)
u1, d1 = pf_generator_eval(kQ, kQ, kE, 0, wE, [kQ.var("x") + 1])
check("pf witt slot", u1, d1)
wQ = WittVector.teichmuller(kQ.var("x"), S1, kQ)
u2, d2 = pf_generator_eval(kQ, kQ, kE, 1, wQ, [xE + kE.gen()])
check("pf mult slot", u2, d2)
S12pf = TruncationSet([1, 2])
wE2 = (WittVector.teichmuller(xE * kE.gen() + 1, S12pf, kE)
       + WittVector.teichmuller(kE.gen(), TruncationSet([1]), kE)
         .verschiebung(2, S12pf))
u3, d3 = pf_generator_eval(kQ, kQ, kE, 0, wE2,
                           [kQ.var("x") + 2, kQ.var("x") ** 2 + 1])
check("pf witt slot S12 q3", u3, d3)

# gamma intertwining
S36 = TruncationSet([1, 2, 3, 6])
wS = (WittVector.teichmuller(xq + 1, S36, kq)
      + WittVector.teichmuller(xq, TruncationSet([1, 3]), kq)
        .verschiebung(2, S36))
symG = SomekawaSymbol(kq, kq, wS, [xq * xq + 1])
pg = psi(symG)
for s in S36:
    check(f"gamma_{s}", psi(gamma_ghost(symG, s)), pg.coordinate(s))

# cathelineau
datum = cathelineau_instance(xq, S1)
check("cathelineau psi-sum", wr_generator_eval(datum).is_zero(), True)
S12 = TruncationSet([1, 2])
datum2 = cathelineau_instance(xq, S12)
try:
    wr_generator_eval(datum2)
    print("FAIL: expected ModulusViolation")
    sys.exit(1)
except ModulusViolation:
    check("modulus violation S={1,2}", True, True)
try:
    cathelineau_instance(kq.one())
    print("FAIL: expected DegenerateParameter")
    sys.exit(1)
except DegenerateParameter:
    check("degenerate x=1", True, True)
datumh = cathelineau_instance(kq.from_fraction(Fraction(1, 2)), S1)
check("cathelineau x=1/2", wr_generator_eval(datumh).is_zero(), True)
ky = FunctionField(QQ, ["y"])
datn = cathelineau_instance(ky.from_fraction(Fraction(1, 3)), S1)
check("cathelineau x=1/3 over Q(y)", wr_generator_eval(datn).is_zero(), True)

print(f"\nALL {ok} SMOKE CHECKS PASSED")
