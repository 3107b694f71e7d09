"""Text, LaTeX and JSON expression-tree forms of Scalars.

The JSON tree uses the node kinds ``add``, ``mul``, ``div``, ``pow``,
``const`` and ``gen``.  Rationals are strings ``"p/q"`` (or ``"p"``),
radicals are ``pow(const 2, const "i/6")`` and ``pow(const 3, const "1/2")``.
Terms are emitted in packed-monomial order so the output is deterministic
and ``to_json(from_json(t)) == t`` for any tree this module produced.
"""

from __future__ import annotations

from fractions import Fraction

from . import poly as P
from .poly import ONE_Q, Q
from .scalar import GENERATORS, PoleError, Scalar, exp_generator, jet, symbol


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _rat_str(c) -> str:
    return str(_frac(c))


# ---------------------------------------------------------------------------
# plain text

def _radical_text(m: int) -> str:
    i, j = m & P.FMASK, (m >> P.FIELD) & P.FMASK
    parts = []
    if i:
        parts.append({3: "sqrt2", 2: "2^(1/3)", 4: "2^(2/3)"}.get(i, f"2^({i}/6)"))
    if j:
        parts.append("sqrt3")
    return "*".join(parts)


def constant_text(elem: dict) -> str:
    if not elem:
        return "0"
    out = []
    for m in sorted(elem):
        c = elem[m]
        rad = _radical_text(m)
        if not rad:
            out.append(_rat_str(c))
        elif c == 1:
            out.append(rad)
        elif c == -1:
            out.append("-" + rad)
        else:
            out.append(f"{_rat_str(c)}*{rad}")
    s = " + ".join(out).replace("+ -", "- ")
    return s


def _mono_text(g: int) -> str:
    parts = []
    for k, e in enumerate(P.fields_of(g)):
        if e:
            name = GENERATORS.gens[k].name
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def poly_text(a: dict) -> str:
    if not a:
        return "0"
    groups = P.split_by_gens(a)
    out = []
    for g in sorted(groups, key=lambda g: (P.total_degree(g), g)):
        coeff = groups[g]
        mono = _mono_text(g)
        ctext = constant_text(coeff)
        if not mono:
            out.append(ctext if len(coeff) == 1 else f"({ctext})")
        elif ctext == "1":
            out.append(mono)
        elif ctext == "-1":
            out.append("-" + mono)
        elif len(coeff) == 1:
            out.append(f"{ctext}*{mono}")
        else:
            out.append(f"({ctext})*{mono}")
    return " + ".join(out).replace("+ -", "- ")


def to_text(s: Scalar) -> str:
    n = poly_text(s.num)
    if s.den == {0: ONE_Q}:
        return n
    return f"({n})/({poly_text(s.den)})"


# ---------------------------------------------------------------------------
# LaTeX

def _radical_latex(m: int) -> str:
    i, j = m & P.FMASK, (m >> P.FIELD) & P.FMASK
    parts = []
    if i:
        parts.append({3: r"\sqrt{2}"}.get(i, "2^{%s}" % str(Fraction(i, 6))))
    if j:
        parts.append(r"\sqrt{3}")
    return " ".join(parts)


def _rat_latex(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return sign + r"\frac{%d}{%d}" % (abs(c.numerator), c.denominator)


def constant_latex(elem: dict) -> str:
    if not elem:
        return "0"
    out = []
    for m in sorted(elem):
        c = _frac(elem[m])
        rad = _radical_latex(m)
        if not rad:
            out.append(_rat_latex(c))
        elif c == 1:
            out.append(rad)
        elif c == -1:
            out.append("-" + rad)
        else:
            out.append(f"{_rat_latex(c)} {rad}")
    return " + ".join(out).replace("+ -", "- ")


def _gen_latex(k: int, e: int) -> str:
    g = GENERATORS.gens[k]
    if g.name == "E":
        r = Fraction(e, 3)
        n = {1: "", -1: "-"}.get(r.numerator, f"{r.numerator} ")
        return r"e^{%sb x}" % n if r.denominator == 1 else r"e^{\frac{%sb x}{3}}" % n
    base = g.latex
    return base if e == 1 else "%s^{%d}" % (base if len(base) == 1 else "{%s}" % base, e)


def poly_latex(a: dict) -> str:
    if not a:
        return "0"
    groups = P.split_by_gens(a)
    out = []
    for g in sorted(groups, key=lambda g: (P.total_degree(g), g)):
        coeff = groups[g]
        mono = " ".join(_gen_latex(k, e) for k, e in enumerate(P.fields_of(g)) if e)
        ctext = constant_latex(coeff)
        if not mono:
            out.append(ctext if len(coeff) == 1 else rf"\left({ctext}\right)")
        elif ctext == "1":
            out.append(mono)
        elif ctext == "-1":
            out.append("-" + mono)
        elif len(coeff) == 1:
            out.append(f"{ctext} {mono}")
        else:
            out.append(rf"\left({ctext}\right) {mono}")
    return " + ".join(out).replace("+ -", "- ")


def to_latex(s: Scalar) -> str:
    n = poly_latex(s.num)
    if s.den == {0: ONE_Q}:
        return n
    return r"\frac{%s}{%s}" % (n, poly_latex(s.den))


# ---------------------------------------------------------------------------
# JSON expression trees

def _const(value) -> dict:
    return {"op": "const", "value": str(value)}


def _gen_node(k: int) -> dict:
    g = GENERATORS.gens[k]
    node = {"op": "gen", "name": g.name}
    if g.kind == "symbol":
        node["kind"] = "symbol"
    elif g.kind == "jet":
        node["kind"] = "jet"
        node["function"] = g.function
        node["multi"] = list(g.multi)
        node["depends"] = list(g.depends)
    elif g.kind == "exp" and g.name != "E":
        node["kind"] = "exp"
        node["exponent"] = to_json(g.exponent)
    return node


def _term_tree(m: int, c) -> dict:
    args = [_const(_rat_str(c))]
    i, j = m & P.FMASK, (m >> P.FIELD) & P.FMASK
    if i:
        args.append({"op": "pow", "args": [_const(2), _const(Fraction(i, 6))]})
    if j:
        args.append({"op": "pow", "args": [_const(3), _const(Fraction(1, 2))]})
    for k, e in enumerate(P.fields_of(m)):
        if e:
            node = _gen_node(k)
            args.append(node if e == 1 else {"op": "pow", "args": [node, _const(e)]})
    return args[0] if len(args) == 1 else {"op": "mul", "args": args}


def _poly_tree(a: dict) -> dict:
    if not a:
        return _const(0)
    terms = [_term_tree(m, a[m]) for m in sorted(a)]
    return terms[0] if len(terms) == 1 else {"op": "add", "args": terms}


def to_json(s: Scalar) -> dict:
    n = _poly_tree(s.num)
    if s.den == {0: ONE_Q}:
        return n
    return {"op": "div", "args": [n, _poly_tree(s.den)]}


def from_json(tree) -> Scalar:
    """Normalize an expression tree (JSON form or nested dicts) to a Scalar."""
    op = tree["op"]
    if op == "const":
        return Scalar.const(Q(Fraction(tree["value"])))
    if op == "gen":
        name = tree["name"]
        if name not in GENERATORS:
            kind = tree.get("kind", "symbol")
            if kind == "jet":
                return jet(tree["function"], tuple(tree["multi"]), tuple(tree["depends"]))
            if kind == "exp":
                return exp_generator(name, from_json(tree["exponent"]))
            return symbol(name)
        return Scalar.gen(name)
    args = tree["args"]
    if op == "add":
        acc = Scalar.zero()
        for a in args:
            acc = acc + from_json(a)
        return acc
    if op == "mul":
        acc = Scalar.one()
        for a in args:
            acc = acc * from_json(a)
        return acc
    if op == "div":
        den = from_json(args[1])
        if den.is_zero():
            raise PoleError("division by a Scalar equal to zero")
        return from_json(args[0]) / den
    if op == "pow":
        base, ex = args
        e = Fraction(ex["value"]) if ex["op"] == "const" else None
        if e is None:
            raise ValueError("pow exponent must be a constant")
        if e.denominator == 1:
            return from_json(base) ** int(e)
        if base["op"] == "const" and Fraction(base["value"]) in (2, 3):
            from .algebraic import AlgebraicConstant

            b = Fraction(base["value"])
            if b == 2 and (e * 6).denominator == 1:
                return Scalar.const(AlgebraicConstant.radical(int(e * 6), 0))
            if b == 3 and (e * 2).denominator == 1:
                return Scalar.const(AlgebraicConstant.radical(0, int(e * 2)))
        raise ValueError(f"unsupported power {tree}")
    raise ValueError(f"unknown op {op!r}")


normalize = from_json
