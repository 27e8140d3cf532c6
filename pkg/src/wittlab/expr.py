"""Expression parsing and evaluation for the command-line layer.

One tokenizer and one recursive-descent grammar serve three roles:

* field towers       -- ``Q``, ``F_5``, ``Q(x,y)(t)``, ``Q[i]/(i^2+1)(t)``
* scalar expressions -- integers, rationals ``p/q``, tower variables and
  generators, ``+ - * / ^`` and parentheses
* structured values  -- ``[a]`` (multiplicative lift), ``V_n(...)``,
  ``F_n(...)``, ``d(...)``, ``dlog(...)``, ``wedge(...,...)``,
  ``Tr_{E/F}(...)``

Evaluation is context driven: a :class:`Context` fixes the ambient field and
truncation set, and every node evaluates to an ``int``/``Fraction``, a
:class:`~wittlab.fields.FieldElement`, a :class:`~wittlab.witt.WittVector`,
or a :class:`~wittlab.forms.DifferentialForm`.  Inside ``V_n`` the ambient
set becomes ``S/n``; inside ``F_n`` it becomes the divisor closure of
``n*S``, so that the operator lands back on ``S``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import (
    CharacteristicObstruction,
    DivisionByZero,
    ParseError,
    UnknownVariable,
    ValidationError,
)
from .fields import (
    QQ,
    FieldElement,
    FunctionField,
    PrimeField,
    SimpleExtension,
    embed,
    field_trace,
    generators,
    tower_contains,
    var_element,
    _find_gen,
)
from .forms import DifferentialForm, differential, dlog, trace_form, wedge
from .witt import TruncationSet, WittVector, witt_trace

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VF_RE = re.compile(r"([VF])_([0-9]+)$")
_FP_RE = re.compile(r"F_([0-9]+)$")
_PUNCT = set("+-*/^()[]{},;=:")

#: Names an expression atom may not shadow.
RESERVED_NAMES = frozenset(
    {"d", "dlog", "wedge", "Tr_", "Q", "S", "over", "at", "all",
     "inf", "infinity", "seed"}
)


def _name_reserved(name: str) -> bool:
    return name in RESERVED_NAMES or _VF_RE.match(name) is not None


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind       # "int" | "name" | "punct" | "end"
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


def tokenize(text: str) -> list:
    """Split `text` into tokens, tracking 1-based line/column positions."""
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        m = _NAME_RE.match(text, i)
        if m:
            toks.append(Token("name", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        if ch in _PUNCT:
            toks.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("end", "", line, col))
    return toks


class Parser:
    """Recursive-descent parser over a token list.

    Produces plain-tuple syntax trees; :func:`evaluate` and
    :func:`build_tower` interpret them.
    """

    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    # ------------------------------------------------------------- plumbing

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.toks) - 1)
        return self.toks[i]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "end":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind != "end"

    def at_end(self) -> bool:
        return self.peek().kind == "end"

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind == "end":
            self.error(f"expected {text!r}" + (f", found {t.text!r}" if t.text else " at end of input"))
        return self.next()

    def error(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    # ---------------------------------------------------------- expressions

    def parse_expression(self):
        node = self.parse_term()
        while self.peek().text in ("+", "-") and self.peek().kind == "punct":
            op = self.next().text
            rhs = self.parse_term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek().text in ("*", "/") and self.peek().kind == "punct":
            op = self.next().text
            rhs = self.parse_factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def parse_factor(self):
        if self.at("-"):
            self.next()
            return ("neg", self.parse_factor())
        if self.at("+"):
            self.next()
            return self.parse_factor()
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        while self.at("^"):
            self.next()
            node = ("pow", node, self.parse_exponent())
        return node

    def parse_exponent(self) -> int:
        sign = 1
        while self.peek().text in ("+", "-"):
            if self.next().text == "-":
                sign = -sign
        t = self.peek()
        if t.kind != "int":
            self.error("expected an integer exponent")
        self.next()
        return sign * int(t.text)

    def parse_atom(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return ("int", int(t.text))
        if t.text == "(":
            self.next()
            node = self.parse_expression()
            self.expect(")")
            return node
        if t.text == "[":
            self.next()
            node = self.parse_expression()
            self.expect("]")
            return ("teich", node)
        if t.kind == "name":
            return self.parse_name_atom()
        self.error(f"expected an expression, found {t.text!r}" if t.text
                   else "expected an expression, found end of input")

    def parse_name_atom(self):
        t = self.next()
        name = t.text
        follows_call = self.at("(")
        if name == "Tr_":
            self.expect("{")
            upper = self.parse_tower_ast()
            self.expect("/")
            lower = self.parse_tower_ast()
            self.expect("}")
            self.expect("(")
            arg = self.parse_expression()
            self.expect(")")
            return ("trace", upper, lower, arg)
        m = _VF_RE.match(name)
        if m and follows_call:
            idx = int(m.group(2))
            if idx < 1:
                raise ParseError("operator index must be positive", t.line, t.col)
            self.expect("(")
            arg = self.parse_expression()
            self.expect(")")
            return ("vsch" if m.group(1) == "V" else "frob", idx, arg)
        if name in ("d", "dlog") and follows_call:
            self.expect("(")
            arg = self.parse_expression()
            self.expect(")")
            return (name, arg)
        if name == "wedge" and follows_call:
            self.expect("(")
            parts = [self.parse_expression()]
            while self.accept(","):
                parts.append(self.parse_expression())
            self.expect(")")
            return ("wedge", parts)
        if follows_call:
            raise ParseError(f"unknown function {name!r}", t.line, t.col)
        return ("name", name)

    # --------------------------------------------------------------- towers

    def parse_tower_ast(self):
        t = self.peek()
        if t.kind != "name":
            self.error("expected a field tower (Q, F_p, ...)")
        base = self.next().text
        if base == "Q":
            root = ("Q",)
        else:
            m = _FP_RE.match(base)
            if not m:
                raise ParseError(
                    f"unknown base field {base!r} (use Q or F_p)", t.line, t.col
                )
            root = ("Fp", int(m.group(1)))
        steps = []
        while True:
            if self.at("("):
                self.next()
                names = [self._step_name()]
                while self.accept(","):
                    names.append(self._step_name())
                self.expect(")")
                steps.append(("ff", names))
            elif self.at("["):
                self.next()
                gname = self._step_name()
                self.expect("]")
                self.expect("/")
                self.expect("(")
                poly = self.parse_expression()
                self.expect(")")
                steps.append(("ext", gname, poly))
            else:
                break
        return (root, tuple(steps))

    def _step_name(self) -> str:
        t = self.peek()
        if t.kind != "name":
            self.error("expected a variable name")
        if _name_reserved(t.text):
            raise ParseError(f"name {t.text!r} is reserved", t.line, t.col)
        return self.next().text


def parse_expression(text: str):
    """Parse `text` as a single expression consuming all input."""
    p = Parser(text)
    node = p.parse_expression()
    if not p.at_end():
        p.error(f"unexpected trailing input {p.peek().text!r}")
    return node


# ------------------------------------------------------------ tower building


def build_tower(ast):
    """Construct the Field described by a tower syntax tree."""
    root, steps = ast
    cur = QQ if root[0] == "Q" else PrimeField(root[1])
    for step in steps:
        if step[0] == "ff":
            cur = FunctionField(cur, step[1])
        else:
            _, gname, poly = step
            scratch = FunctionField(cur, [gname])
            v = evaluate(poly, Context(scratch, TruncationSet([1])))
            v = as_element(v, scratch)
            num, den = v.payload
            if not den.is_const():
                raise ValidationError(
                    f"minimal polynomial of {gname!r} must be a polynomial"
                )
            cur = SimpleExtension(cur, num.as_upoly(), gname)
    return cur


def parse_tower(text: str):
    """Parse and build a field tower from `text`, consuming all input."""
    p = Parser(text)
    ast = p.parse_tower_ast()
    if not p.at_end():
        p.error(f"unexpected trailing input {p.peek().text!r}")
    return build_tower(ast)


def tower_name(F) -> str:
    """Canonical one-line spelling of a tower, matching the input grammar."""
    if isinstance(F, FunctionField):
        return tower_name(F.base) + "(" + ",".join(F.names) + ")"
    if isinstance(F, SimpleExtension):
        g = F.name
        bits = []
        for i, c in enumerate(F.minpoly):
            if c.is_zero():
                continue
            mono = g if i == 1 else (f"{g}^{i}" if i else "")
            cs = str(c)
            if mono and cs == "1":
                bits.append(mono)
            elif mono:
                cs = f"({cs})" if ("+" in cs[1:] or "-" in cs[1:] or "/" in cs) else cs
                bits.append(f"{cs}*{mono}")
            else:
                bits.append(cs)
        poly = " + ".join(reversed(bits)).replace("+ -", "- ")
        return f"{tower_name(F.base)}[{g}]/({poly})"
    if isinstance(F, PrimeField):
        return f"F_{F.p}"
    return "Q"


# ------------------------------------------------------------------ contexts


class Context:
    """Ambient field and truncation set for evaluating an expression."""

    __slots__ = ("field", "S")

    def __init__(self, field, S: TruncationSet):
        self.field = field
        self.S = S

    def with_field(self, field) -> "Context":
        return Context(field, self.S)

    def with_S(self, S: TruncationSet) -> "Context":
        return Context(self.field, S)


# ----------------------------------------------------------------- coercions


def _is_number(v) -> bool:
    return isinstance(v, (int, Fraction))


def as_element(v, K) -> FieldElement:
    """Coerce a value into the field K (numbers and lower tower stages)."""
    if isinstance(v, int):
        return K.from_int(v)
    if isinstance(v, Fraction):
        return K.from_fraction(v)
    if isinstance(v, FieldElement):
        if v.field == K:
            return v
        if tower_contains(K, v.field):
            return embed(v, K)
        raise ValidationError(
            f"value over {v.field!r} does not live in {K!r}"
        )
    if isinstance(v, WittVector):
        raise ValidationError("a Witt vector is not a field element")
    raise ValidationError("a differential form is not a field element")


def _diagonal_witt(q: Fraction, S: TruncationSet, ring) -> WittVector:
    if ring.char != 0:
        raise CharacteristicObstruction(
            "non-integer scalars of Witt vectors need characteristic zero"
        )
    c = ring.from_fraction(q)
    return WittVector.unghost({s: c for s in S}, S, ring)


def as_witt(v, ctx: Context) -> WittVector:
    if isinstance(v, WittVector):
        if v.S != ctx.S:
            raise ValidationError(
                f"Witt vector over S={v.S!r} used where S={ctx.S!r} is expected"
            )
        return v
    if isinstance(v, int):
        return WittVector.from_int(v, ctx.S, ctx.field)
    if isinstance(v, Fraction):
        return _diagonal_witt(v, ctx.S, ctx.field)
    if isinstance(v, FieldElement):
        raise ValidationError(
            "a bare field element is not a Witt vector; write [x] for its"
            " multiplicative lift"
        )
    raise ValidationError("a differential form is not a Witt vector")


def as_form(v, K) -> DifferentialForm:
    if isinstance(v, DifferentialForm):
        return v
    return DifferentialForm.function(as_element(v, K))


def _witt_inverse(w: WittVector) -> WittVector:
    if w.ring.char != 0:
        raise CharacteristicObstruction(
            "Witt division is only available in the characteristic-zero model"
        )
    g = w.ghost()
    try:
        inv = {s: g[s].inverse() for s in w.S}
    except DivisionByZero:
        raise DivisionByZero("Witt vector has a vanishing ghost coordinate")
    return WittVector.unghost(inv, w.S, w.ring)


# ---------------------------------------------------------------- evaluation


def _binop(op: str, a, b, ctx: Context):
    if isinstance(a, WittVector) or isinstance(b, WittVector):
        wa, wb = as_witt(a, ctx), as_witt(b, ctx)
        if op == "add":
            return wa + wb
        if op == "sub":
            return wa - wb
        if op == "mul":
            return wa * wb
        return wa * _witt_inverse(wb)
    if isinstance(a, DifferentialForm) or isinstance(b, DifferentialForm):
        K = ctx.field
        if op == "div":
            if isinstance(b, DifferentialForm):
                raise ValidationError("cannot divide by a differential form")
            return as_form(a, K).scale(as_element(b, K).inverse())
        fa, fb = as_form(a, K), as_form(b, K)
        if op == "add":
            return fa + fb
        if op == "sub":
            return fa - fb
        return fa * fb
    if isinstance(a, FieldElement) or isinstance(b, FieldElement):
        K = ctx.field
        ea, eb = as_element(a, K), as_element(b, K)
        if op == "add":
            return ea + eb
        if op == "sub":
            return ea - eb
        if op == "mul":
            return ea * eb
        if eb.is_zero():
            raise DivisionByZero("division by zero")
        return ea / eb
    qa, qb = Fraction(a), Fraction(b)
    if op == "add":
        out = qa + qb
    elif op == "sub":
        out = qa - qb
    elif op == "mul":
        out = qa * qb
    else:
        if qb == 0:
            raise DivisionByZero("division by zero")
        out = qa / qb
    return int(out) if out.denominator == 1 else out


def _power(v, n: int, ctx: Context):
    if _is_number(v):
        out = Fraction(v) ** n
        return int(out) if out.denominator == 1 else out
    if isinstance(v, FieldElement):
        if n < 0 and v.is_zero():
            raise DivisionByZero("zero raised to a negative power")
        return v**n
    if isinstance(v, WittVector):
        if n < 0:
            v = _witt_inverse(v)
            n = -n
        acc = WittVector.one(v.S, v.ring)
        for _ in range(n):
            acc = acc * v
        return acc
    raise ValidationError("differential forms do not support ^")


def _resolve(name: str, K) -> FieldElement:
    try:
        return var_element(K, name)
    except UnknownVariable:
        pass
    return _find_gen(K, name)


def evaluate(node, ctx: Context):
    """Evaluate a syntax tree in the given context."""
    kind = node[0]
    if kind == "int":
        return node[1]
    if kind == "name":
        return _resolve(node[1], ctx.field)
    if kind == "neg":
        v = evaluate(node[1], ctx)
        return -v
    if kind in ("add", "sub", "mul", "div"):
        return _binop(kind, evaluate(node[1], ctx), evaluate(node[2], ctx), ctx)
    if kind == "pow":
        return _power(evaluate(node[1], ctx), node[2], ctx)
    if kind == "teich":
        x = as_element(evaluate(node[1], ctx), ctx.field)
        return WittVector.teichmuller(x, ctx.S, ctx.field)
    if kind == "vsch":
        n = node[1]
        inner_ctx = ctx.with_S(ctx.S.quotient(n))
        w = as_witt(evaluate(node[2], inner_ctx), inner_ctx)
        return w.verschiebung(n, ctx.S)
    if kind == "frob":
        n = node[1]
        Sn = TruncationSet.closure([n * s for s in ctx.S])
        inner_ctx = ctx.with_S(Sn)
        w = as_witt(evaluate(node[2], inner_ctx), inner_ctx)
        return w.frobenius(n)
    if kind == "d":
        return differential(as_element(evaluate(node[1], ctx), ctx.field))
    if kind == "dlog":
        return dlog(as_element(evaluate(node[1], ctx), ctx.field))
    if kind == "wedge":
        parts = [as_form(evaluate(p, ctx), ctx.field) for p in node[1]]
        return wedge(*parts)
    if kind == "trace":
        upper = build_tower(node[1])
        lower = build_tower(node[2])
        if not tower_contains(upper, lower):
            raise ValidationError(
                f"{tower_name(lower)} is not a stage of {tower_name(upper)}"
            )
        inner = evaluate(node[3], ctx.with_field(upper))
        if isinstance(inner, WittVector):
            return witt_trace(inner, lower)
        if isinstance(inner, DifferentialForm):
            return trace_form(inner, lower)
        return field_trace(as_element(inner, upper), lower)
    raise ValidationError(f"unknown syntax node {kind!r}")


def parse_element(text: str, K) -> FieldElement:
    """Parse `text` and evaluate it to an element of K."""
    node = parse_expression(text)
    return as_element(evaluate(node, Context(K, TruncationSet([1]))), K)
