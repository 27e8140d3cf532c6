"""Command-line harness: one-line job specifications, execution, reports.

Job lines have the shape::

    <command> [S={n,...}] [over <tower>] : <payload>

with command one of ``witt``, ``residue``, ``symbol``, ``reciprocity``,
``cathelineau``, ``selftest``.  Examples::

    witt S={1,2,3,6} over Q: V_2([5]) * V_3([7])
    residue over Q(t): d(t)/(t*(t-1)) at all
    symbol S={1,2} over Q(t): [t] , t^2+1 at t
    reciprocity over Q(t): (t-1)*(t-2) , t^2+1
    cathelineau S={1,2} over Q: x = 1/3; q = 2
    selftest

The truncation set is completed to a divisor-closed set with a warning when
needed.  A report is one JSON or text document per run::

    {"version": ..., "seed": ..., "checks": [
        {"id", "anchor", "inputs", "value", "pass", "micros"}, ...]}

and the exit code is 0 exactly when every check passes.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fnmatch import fnmatch
from fractions import Fraction

from . import __version__
from .checks import CheckResult, run_checks
from .errors import ParseError, ValidationError, WittLabError, ZeroArgument
from .expr import (
    Context,
    Parser,
    as_element,
    as_form,
    as_witt,
    build_tower,
    evaluate,
    tower_name,
)
from .fields import QQ, FunctionField, RationalField
from .forms import trace_form
from .ghost import GhostForm
from .milnor import weil_reciprocity_product
from .places import (
    FactoredFunction,
    Place,
    audit_poles,
    merge_places,
    refined_residue,
    witt_local_symbol,
)
from .somekawa import cathelineau_instance, wr_generator_eval
from .witt import TruncationSet

COMMANDS = ("witt", "residue", "symbol", "reciprocity", "cathelineau", "selftest")

_INF_NAMES = ("inf", "infinity")


class JobSpec:
    """A parsed job line: command, truncation set, tower, payload trees."""

    __slots__ = ("command", "text", "S", "S_original", "tower", "payload",
                 "warnings")

    def __init__(self, command, text, S, S_original, tower, payload, warnings):
        self.command = command
        self.text = text
        self.S = S                  # TruncationSet or None (command default)
        self.S_original = S_original  # the set as written, when completed
        self.tower = tower          # Field or None (command default)
        self.payload = payload      # command-specific parse product
        self.warnings = warnings


# ------------------------------------------------------------- job parsing


def _parse_S(p: Parser):
    p.expect("=")
    p.expect("{")
    elems = []
    t = p.peek()
    if t.kind != "int":
        p.error("expected an integer in the truncation set")
    elems.append(int(p.next().text))
    while p.accept(","):
        t = p.peek()
        if t.kind != "int":
            p.error("expected an integer in the truncation set")
        elems.append(int(p.next().text))
    p.expect("}")
    try:
        return TruncationSet(elems), None
    except ValidationError:
        return TruncationSet.closure(elems), "{" + ",".join(map(str, elems)) + "}"


def _parse_place_spec(p: Parser):
    t = p.peek()
    if t.kind == "name" and t.text in _INF_NAMES:
        p.next()
        return "inf"
    return p.parse_expression()


def parse_jobspec(text: str) -> JobSpec:
    """Parse one job line into a validated JobSpec."""
    p = Parser(text)
    t = p.peek()
    if t.kind != "name" or t.text not in COMMANDS:
        p.error(
            "expected a command (" + ", ".join(COMMANDS) + ")"
            + (f", found {t.text!r}" if t.text else "")
        )
    command = p.next().text
    warnings = []
    S = S_original = tower = None
    if p.at("S"):
        p.next()
        S, S_original = _parse_S(p)
        if S_original is not None:
            warnings.append(
                f"truncation set {S_original} completed to {S!r}"
            )
    if p.at("over"):
        p.next()
        tower = build_tower(p.parse_tower_ast())

    payload = None
    if command == "selftest":
        if S is not None or tower is not None:
            raise ValidationError("selftest takes no S or tower clauses")
        if p.accept(":") and not p.at_end():
            p.error("selftest takes no payload")
        if not p.at_end():
            p.error(f"unexpected trailing input {p.peek().text!r}")
        return JobSpec(command, text.strip(), None, None, None, None, warnings)

    p.expect(":")
    if command == "witt":
        payload = p.parse_expression()
    elif command == "residue":
        form = p.parse_expression()
        places = "all"
        if p.accept("at"):
            if p.at("all"):
                p.next()
            else:
                places = [_parse_place_spec(p)]
                while p.accept(","):
                    places.append(_parse_place_spec(p))
        payload = (form, places)
    elif command == "symbol":
        w = p.parse_expression()
        p.expect(",")
        f = p.parse_expression()
        p.expect("at")
        payload = (w, f, _parse_place_spec(p))
    elif command == "reciprocity":
        f = p.parse_expression()
        p.expect(",")
        payload = (f, p.parse_expression())
    elif command == "cathelineau":
        assigns = {}
        while True:
            t = p.peek()
            if t.kind != "name":
                p.error("expected an assignment like x = 1/3")
            key = p.next().text
            if key not in ("x", "q"):
                raise ParseError(
                    f"unknown parameter {key!r} (expected x or q)",
                    t.line, t.col,
                )
            p.expect("=")
            assigns[key] = p.parse_expression()
            if not (p.accept(";") or p.accept(",")):
                break
        if "x" not in assigns:
            p.error("cathelineau needs an assignment x = ...")
        payload = assigns
    if not p.at_end():
        p.error(f"unexpected trailing input {p.peek().text!r}")
    return JobSpec(command, text.strip(), S, S_original, tower, payload, warnings)


# --------------------------------------------------------------- factoring


def _is_form_node(node) -> bool:
    kind = node[0]
    if kind in ("d", "dlog", "wedge"):
        return True
    if kind in ("add", "sub", "mul", "div"):
        return _is_form_node(node[1]) or _is_form_node(node[2])
    if kind == "neg":
        return _is_form_node(node[1])
    if kind == "pow":
        return _is_form_node(node[1])
    if kind == "trace":
        return _is_form_node(node[3])
    return False


def _collect_atoms(node, out):
    """Multiplicative atoms of an expression tree, descending into forms."""
    kind = node[0]
    if kind in ("add", "sub"):
        if _is_form_node(node):
            _collect_atoms(node[1], out)
            _collect_atoms(node[2], out)
        else:
            out.append(node)
    elif kind in ("mul", "div"):
        _collect_atoms(node[1], out)
        _collect_atoms(node[2], out)
    elif kind in ("neg", "pow"):
        _collect_atoms(node[1], out)
    elif kind in ("d", "dlog"):
        _collect_atoms(node[1], out)
    elif kind == "wedge":
        for part in node[1]:
            _collect_atoms(part, out)
    elif kind == "trace":
        pass  # opaque; pole coverage is re-audited downstream
    else:
        out.append(node)


def _has_rational_root(coeffs) -> bool:
    """Rational-root screen over Q; None-safe for large coefficients."""
    fracs = []
    for c in coeffs:
        q = c.payload
        if not isinstance(q, Fraction):
            return False
        fracs.append(q)
    from math import lcm

    den = 1
    for q in fracs:
        den = lcm(den, q.denominator)
    ints = [int(q * den) for q in fracs]
    if ints[0] == 0:
        return True  # root at 0
    a0, an = abs(ints[0]), abs(ints[-1])
    if a0 > 10**6 or an > 10**6:
        return False
    p_divs = [d for d in range(1, a0 + 1) if a0 % d == 0]
    q_divs = [d for d in range(1, an + 1) if an % d == 0]
    for pd in p_divs:
        for qd in q_divs:
            for r in (Fraction(pd, qd), Fraction(-pd, qd)):
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * r + c
                if acc == 0:
                    return True
    return False


def _place_coeffs(v, K):
    """Monic coefficient list of a finite place from a polynomial value."""
    num, den = v.payload
    if not den.is_const():
        raise ValidationError("a place polynomial cannot have a denominator")
    coeffs = num.as_upoly()
    if len(coeffs) < 2:
        raise ValidationError("a constant does not define a place")
    lc = coeffs[-1]
    if not lc.is_one():
        inv = lc.inverse()
        coeffs = [c * inv for c in coeffs]
    if len(coeffs) > 2 and isinstance(K.base, RationalField):
        if _has_rational_root(coeffs):
            raise ValidationError(
                "place polynomial has a rational root; supply its factors"
            )
    return coeffs


def _make_place(spec, K, ctx) -> Place:
    if spec == "inf":
        return Place.infinite(K)
    v = as_element(evaluate(spec, ctx), K)
    return Place.finite(K, _place_coeffs(v, K))


def _candidate_places(ast, K, ctx) -> list:
    atoms = []
    _collect_atoms(ast, atoms)
    places = []
    for node in atoms:
        try:
            v = evaluate(node, ctx)
        except WittLabError:
            continue
        if not hasattr(v, "payload"):
            continue
        if not hasattr(v.field, "names"):
            continue
        num, den = v.payload
        for part in (num, den):
            if part.is_const():
                continue
            coeffs = part.as_upoly()
            lc = coeffs[-1]
            if not lc.is_one():
                inv = lc.inverse()
                coeffs = [c * inv for c in coeffs]
            try:
                P = Place.finite(K, coeffs)
            except WittLabError:
                continue
            if P not in places:
                places.append(P)
    return places


def _factored(node, K) -> FactoredFunction:
    """Read the multiplicative structure of a tree as a factored function."""
    k = K.base
    ctx = Context(K, TruncationSet([1]))
    unit = [k.one()]
    factors = []

    def walk(n, e):
        kind = n[0]
        if kind == "mul":
            walk(n[1], e)
            walk(n[2], e)
        elif kind == "div":
            walk(n[1], e)
            walk(n[2], -e)
        elif kind == "pow":
            walk(n[1], e * n[2])
        elif kind == "neg":
            unit[0] = unit[0] * (-k.one()) ** e
            walk(n[1], e)
        elif kind == "int":
            if n[1] == 0:
                raise ZeroArgument("zero factor in a factored function")
            unit[0] = unit[0] * k.from_int(n[1]) ** e
        else:
            v = as_element(evaluate(n, ctx), K)
            if v.is_zero():
                raise ZeroArgument("zero factor in a factored function")
            num, den = v.payload
            for part, sign in ((num, e), (den, -e)):
                if part.is_const():
                    c = part.as_upoly()[0] if not part.is_zero() else k.zero()
                    unit[0] = unit[0] * c**sign
                    continue
                coeffs = part.as_upoly()
                lc = coeffs[-1]
                if not lc.is_one():
                    inv = lc.inverse()
                    coeffs = [ci * inv for ci in coeffs]
                    unit[0] = unit[0] * lc**sign
                if len(coeffs) > 2 and isinstance(k, RationalField):
                    if _has_rational_root(coeffs):
                        raise ValidationError(
                            "factor of degree >= 2 has a rational root;"
                            " supply its factors"
                        )
                factors.append((coeffs, sign))

    walk(node, 1)
    return FactoredFunction(K, unit[0], factors)


# --------------------------------------------------------------- executors


def _fmt_form(form) -> str:
    if isinstance(form, GhostForm):
        raise AssertionError("ghost families are formatted per coordinate")
    if form.degree == 0:
        return str(form.constant_value())
    return str(form)


def _fmt_family(total):
    if isinstance(total, GhostForm):
        return {str(s): _fmt_form(total.coords[s]) for s in total.S}
    return _fmt_form(total)


def _family_is_zero(total) -> bool:
    if isinstance(total, GhostForm):
        return total.is_zero()
    return total.is_zero()


def _require_line(K) -> FunctionField:
    if not isinstance(K, FunctionField) or len(K.names) != 1:
        raise ValidationError(
            "this command needs a one-variable function field, e.g. over Q(t)"
        )
    return K


def _exec_witt(job: JobSpec):
    K = job.tower if job.tower is not None else QQ
    S = job.S if job.S is not None else TruncationSet([1])
    ctx = Context(K, S)
    w = as_witt(evaluate(job.payload, ctx), ctx)
    value = {
        "S": str(S),
        "ring": tower_name(K),
        "components": {str(s): str(w.comps[s]) for s in S},
    }
    if K.char == 0:
        g = w.ghost()
        value["ghost"] = {str(s): str(g[s]) for s in S}
    return "witt-ring-operator-laws", value, True


def _exec_residue(job: JobSpec):
    K = _require_line(job.tower if job.tower is not None
                      else FunctionField(QQ, ["t"]))
    k = K.base
    S = job.S if job.S is not None else TruncationSet([1])
    ctx = Context(K, S)
    ast, spec = job.payload
    omega = as_form(evaluate(ast, ctx), K)
    if omega.degree < 1:
        raise ValidationError("residues act on forms of degree at least 1")
    if spec == "all":
        places = _candidate_places(ast, K, ctx)
        audit_poles(omega, places)
        all_places = merge_places(places, [Place.infinite(K)])
        rows = []
        total = None
        for P in all_places:
            r = refined_residue(omega, P)
            tr = trace_form(r, k)
            rows.append({"place": str(P), "residue": _fmt_form(r),
                         "trace": _fmt_form(tr)})
            total = tr if total is None else total + tr
        value = {"residues": rows, "sum_of_traces": _fmt_form(total)}
        return "global-residue-vanishing", value, total.is_zero()
    rows = []
    for s in spec:
        P = _make_place(s, K, ctx)
        r = refined_residue(omega, P)
        rows.append({"place": str(P), "residue": _fmt_form(r),
                     "trace": _fmt_form(trace_form(r, k))})
    return "local-residue-laws", {"residues": rows}, True


def _exec_symbol(job: JobSpec):
    K = _require_line(job.tower if job.tower is not None
                      else FunctionField(QQ, ["t"]))
    S = job.S if job.S is not None else TruncationSet([1])
    ctx = Context(K, S)
    w_ast, f_ast, p_spec = job.payload
    w = as_witt(evaluate(w_ast, ctx), ctx)
    f = as_element(evaluate(f_ast, ctx), K)
    P = _make_place(p_spec, K, ctx)
    out = witt_local_symbol(w, f, P)
    value = {
        "S": str(S),
        "place": str(P),
        "residue_degree": P.degree,
        "components": {str(s): str(out.comps[s]) for s in S},
    }
    return "witt-local-symbol", value, True


def _exec_reciprocity(job: JobSpec):
    K = _require_line(job.tower if job.tower is not None
                      else FunctionField(QQ, ["t"]))
    k = K.base
    f_ast, g_ast = job.payload
    f_fact = _factored(f_ast, K)
    g_fact = _factored(g_ast, K)
    prod = weil_reciprocity_product(f_fact, g_fact, k)
    value = {
        "f": str(f_fact.element()),
        "g": str(g_fact.element()),
        "product_of_norms": str(prod),
    }
    return "tame-symbol-reciprocity", value, prod.is_one()


def _exec_cathelineau(job: JobSpec):
    k = job.tower if job.tower is not None else QQ
    ctx = Context(k, TruncationSet([1]))
    x = as_element(evaluate(job.payload["x"], ctx), k)
    q = 2
    if "q" in job.payload:
        qv = evaluate(job.payload["q"], ctx)
        if isinstance(qv, Fraction) and qv.denominator == 1:
            qv = int(qv)
        if not isinstance(qv, int) or qv < 2:
            raise ValidationError("q must be an integer >= 2")
        q = qv
    tail = tuple(k.from_int(c) for c in range(2, q))
    datum = cathelineau_instance(x, job.S, tail=tail)
    total = wr_generator_eval(datum)
    value = {
        "x": str(x),
        "q": q,
        "S": str(datum.S),
        "psi_sum": _fmt_family(total),
    }
    return "cathelineau-relation", value, _family_is_zero(total)


_EXECUTORS = {
    "witt": _exec_witt,
    "residue": _exec_residue,
    "symbol": _exec_symbol,
    "reciprocity": _exec_reciprocity,
    "cathelineau": _exec_cathelineau,
}


def run_job(job: JobSpec, idx: int) -> CheckResult:
    """Execute one non-selftest job; library errors become failing records."""
    inputs = {"job": job.text}
    if job.S is not None:
        inputs["S"] = (f"{job.S!r} (completed from {job.S_original})"
                       if job.S_original else repr(job.S))
    if job.tower is not None:
        inputs["over"] = tower_name(job.tower)
    anchor = {
        "witt": "witt-ring-operator-laws",
        "residue": "global-residue-vanishing",
        "symbol": "witt-local-symbol",
        "reciprocity": "tame-symbol-reciprocity",
        "cathelineau": "cathelineau-relation",
    }[job.command]
    t0 = time.perf_counter()
    try:
        anchor, value, passed = _EXECUTORS[job.command](job)
    except WittLabError as e:
        value = {"error": f"{type(e).__name__}: {e}"}
        passed = False
    micros = int((time.perf_counter() - t0) * 1_000_000)
    return CheckResult(f"{job.command}-{idx}", anchor, inputs, value,
                       passed, micros)


# ----------------------------------------------------------------- reports


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def render_text(report: dict) -> str:
    lines = [f"wittlab report version={report['version']}"
             f" seed={report['seed']}"]
    npass = 0
    for c in report["checks"]:
        npass += bool(c["pass"])
        mark = "PASS" if c["pass"] else "FAIL"
        lines.append(f"[{mark}] {c['id']} ({c['anchor']}) {c['micros']}us")
        lines.append("    inputs: " + json.dumps(c["inputs"], ensure_ascii=False))
        lines.append("    value: " + json.dumps(c["value"], ensure_ascii=False))
    lines.append(f"{npass}/{len(report['checks'])} checks passed")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- main


def _gather_jobs(args) -> list:
    if args.job and args.jobtext:
        raise ValidationError("give job text or --job, not both")
    lines = []
    if args.job:
        with open(args.job, "r", encoding="utf-8") as fh:
            for raw in fh:
                stripped = raw.strip()
                if stripped and not stripped.startswith("#"):
                    lines.append(stripped)
        if not lines:
            raise ValidationError(f"no job lines in {args.job}")
    elif args.jobtext:
        text = args.jobtext.strip()
        head = text.split(None, 1)[0].split(":", 1)[0] if text else ""
        if head != args.command:
            text = f"{args.command} {text}"
        lines.append(text)
    elif args.command == "selftest":
        lines.append("selftest")
    else:
        raise ValidationError(
            f"the {args.command} command needs job text or --job"
        )
    jobs = []
    for i, line in enumerate(lines, start=1):
        job = parse_jobspec(line)
        if job.command != args.command:
            raise ValidationError(
                f"job line {i} is a {job.command} job under the"
                f" {args.command} subcommand"
            )
        jobs.append(job)
    return jobs


def build_report(jobs, seed: int, checks_glob: str = "*") -> tuple:
    """Run all jobs and assemble the report document; returns (report, ok)."""
    records = []
    warnings = []
    idx = 0
    for job in jobs:
        warnings.extend(job.warnings)
        if job.command == "selftest":
            records.extend(run_checks(seed, checks_glob))
        else:
            idx += 1
            records.append(run_job(job, idx))
    records = [r for r in records if fnmatch(r.id, checks_glob)]
    report = {
        "version": __version__,
        "seed": seed,
        "checks": [r.as_dict() for r in records],
    }
    ok = all(r.passed for r in records)
    return report, ok, warnings


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="wittlab",
        description="Exact Witt-vector, residue, and symbol calculator",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "witt": "evaluate a Witt-vector expression",
        "residue": "residues of a differential form at places of the line",
        "symbol": "local symbol of a Witt vector against a function",
        "reciprocity": "product of norms of tame symbols over all places",
        "cathelineau": "evaluate the additive reciprocity instance",
        "selftest": "run the full verification suite",
    }
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, help=helps[cmd])
        sp.add_argument("jobtext", nargs="?", default=None,
                        help="job text (the part after the command word)")
        sp.add_argument("--job", metavar="PATH",
                        help="file of job lines (# comments allowed)")
        sp.add_argument("--seed", type=int, default=0, metavar="U64",
                        help="seed for randomized verification (default 0)")
        sp.add_argument("--out", metavar="PATH",
                        help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="text",
                        help="report format (default text)")
        sp.add_argument("--checks", default="*", metavar="GLOB",
                        help="run only checks whose id matches this glob")
    args = ap.parse_args(argv)

    try:
        jobs = _gather_jobs(args)
        report, ok, warnings = build_report(jobs, args.seed, args.checks)
    except (ParseError, ValidationError) as e:
        print(f"wittlab: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"wittlab: error: {e}", file=sys.stderr)
        return 2
    for w in warnings:
        print(f"wittlab: warning: {w}", file=sys.stderr)
    text = render_json(report) if args.format == "json" else render_text(report)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"wittlab: error: {e}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0 if ok else 1
