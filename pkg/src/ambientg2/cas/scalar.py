"""Canonical rational functions over Q(2^(1/6), sqrt 3) and their derivation.

``Scalar`` values are immutable.  Every generator is registered once in
:data:`GENERATORS`; coordinates differentiate to 1, parameters and symbols
to 0, and exponential or jet generators carry their own derivative rule.
``E`` is the exponential generator with exponent ``b*x/3``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from . import poly as P
from .poly import ALG_MASK, ONE_Q, Q

COORDINATES = ("t", "u", "x", "y", "z", "p", "q")
M_COORDINATES = ("x", "y", "z", "p", "q")
PARAMETERS = ("a0", "a1", "a2", "a3", "a4", "a5", "a6", "b")


class PoleError(ZeroDivisionError):
    """Raised when a denominator vanishes (division by zero or evaluation at a pole)."""


@dataclass
class Generator:
    name: str
    index: int
    kind: str  # coord | param | symbol | exp | jet
    latex: str
    exponent: "Scalar | None" = None  # exp generators: value = e^exponent
    function: str | None = None  # jet generators: underlying function name
    multi: tuple[int, ...] | None = None  # jet generators: derivative multi-index over COORDINATES
    depends: tuple[str, ...] = ()
    _rules: dict = field(default_factory=dict, repr=False)


class Registry:
    def __init__(self) -> None:
        self.gens: list[Generator] = []
        self.by_name: dict[str, Generator] = {}
        self.with_rules: list[int] = []

    def register(self, name: str, kind: str, latex: str | None = None, **kw) -> Generator:
        if name in self.by_name:
            g = self.by_name[name]
            if g.kind != kind:
                raise ValueError(f"generator {name!r} already registered as {g.kind}")
            return g
        g = Generator(name, len(self.gens), kind, latex or name, **kw)
        self.gens.append(g)
        self.by_name[name] = g
        if kind in ("exp", "jet"):
            self.with_rules.append(g.index)
        return g

    def __getitem__(self, name: str) -> Generator:
        return self.by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self.by_name

    def rule(self, g: Generator, coord: str) -> "Scalar":
        """Total derivative of generator ``g`` with respect to a coordinate."""
        hit = g._rules.get(coord)
        if hit is not None:
            return hit
        if g.kind == "exp":
            r = g.exponent.diff(coord) * Scalar.gen(g.name)
        elif g.kind == "jet":
            if coord not in g.depends:
                r = Scalar.zero()
            else:
                k = COORDINATES.index(coord)
                multi = list(g.multi)
                multi[k] += 1
                r = jet(g.function, tuple(multi), g.depends)
        else:
            r = Scalar.zero()
        g._rules[coord] = r
        return r


GENERATORS = Registry()


def _register_base() -> None:
    for c in COORDINATES:
        GENERATORS.register(c, "coord")
    for k in range(7):
        GENERATORS.register(f"a{k}", "param", f"a_{k}")
    GENERATORS.register("b", "param")
    GENERATORS.register("E", "exp", r"e^{\frac{b x}{3}}")


_register_base()


def symbol(name: str, latex: str | None = None) -> "Scalar":
    """A constant symbol (derivative zero with respect to every coordinate)."""
    GENERATORS.register(name, "symbol", latex)
    return Scalar.gen(name)


def exp_generator(name: str, exponent: "Scalar", latex: str | None = None) -> "Scalar":
    """A formal exponential ``e^exponent`` as a new generator."""
    g = GENERATORS.register(name, "exp", latex, exponent=exponent)
    if g.exponent != exponent:
        raise ValueError(f"exp generator {name!r} already bound to a different exponent")
    return Scalar.gen(name)


def jet(function: str, multi: tuple[int, ...], depends: tuple[str, ...] = M_COORDINATES) -> "Scalar":
    """Partial derivative ``d^multi f`` of an arbitrary function ``f(depends)``."""
    multi = tuple(multi)
    if len(multi) != len(COORDINATES):
        raise ValueError("jet multi-index must have one entry per coordinate")
    for c, e in zip(COORDINATES, multi):
        if e and c not in depends:
            return Scalar.zero()
    suffix = "".join(c * e for c, e in zip(COORDINATES, multi))
    name = f"{function}_{suffix}" if suffix else function
    latex = f"{function}_{{{suffix}}}" if suffix else function
    GENERATORS.register(name, "jet", latex, function=function, multi=multi, depends=tuple(depends))
    return Scalar.gen(name)


def function(name: str, depends: tuple[str, ...] = M_COORDINATES) -> "Scalar":
    return jet(name, (0,) * len(COORDINATES), depends)


def _gen_of_index(k: int) -> Generator:
    return GENERATORS.gens[k]


# ---------------------------------------------------------------------------

def _normalize(num: dict, den: dict) -> tuple[dict, dict]:
    if not den:
        raise PoleError("division by zero")
    if not num:
        return {}, {0: ONE_Q}
    if len(den) == 1:
        (m, c), = den.items()
        alg = m & ALG_MASK
        if alg or c != 1:
            mi, ci = P._term_inverse(alg, c)
            num = P.mul_term(num, mi, ci)
            m -= alg
        if m:
            restrict = [(k, e) for k, e in enumerate(P.fields_of(m)) if e]
            g = P.mono_gcd_of(num, restrict)
            if g:
                num = P.shift_down(num, g)
                m -= g
        return num, {m: ONE_Q}
    # general denominator
    mn = P.mono_gcd_of(num)
    md = P.mono_gcd_of(den)
    fn, fd = P.fields_of(mn), P.fields_of(md)
    common = P.pack([min(a, b) for a, b in zip(fn, fd)])
    if common:
        num = P.shift_down(num, common)
        den = P.shift_down(den, common)
    den, inv = P.make_monic(den)
    num = P.mul(num, inv)
    if len(den) > 1 and len(num) > 0:
        g = P.gcd(num, den)
        if not P.is_const(g) or len(g) > 1:
            num = P.divexact(num, g)
            den = P.divexact(den, g)
            den, inv = P.make_monic(den)
            num = P.mul(num, inv)
    if len(den) == 1:
        return _normalize(num, den)
    return num, den


class Scalar:
    """Element of K(generators) in canonical form ``num/den``.

    The denominator is monic (graded-lex leading coefficient 1) and coprime
    to the numerator; monomial denominators such as ``t^2 E^4`` are the
    common case.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: dict | None = None, den: dict | None = None, *, canonical: bool = False):
        num = num or {}
        den = den if den is not None else {0: ONE_Q}
        if not canonical:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    # constructors ---------------------------------------------------------
    @staticmethod
    def zero() -> "Scalar":
        return _ZERO

    @staticmethod
    def one() -> "Scalar":
        return _ONE

    @staticmethod
    def const(c) -> "Scalar":
        from .algebraic import AlgebraicConstant

        if isinstance(c, Scalar):
            return c
        if isinstance(c, AlgebraicConstant):
            return Scalar(dict(c.elem), canonical=True)
        c = Q(c)
        return Scalar({0: c}, canonical=True) if c else _ZERO

    @staticmethod
    def gen(name: str) -> "Scalar":
        g = GENERATORS[name]
        return Scalar({P.gen_unit(g.index): ONE_Q}, canonical=True)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return Scalar.const(x)

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        return P.is_const(self.num) and self.den == {0: ONE_Q}

    def is_polynomial(self) -> bool:
        return self.den == {0: ONE_Q}

    def is_rational(self) -> bool:
        return self.is_constant() and (not self.num or set(self.num) == {0})

    def constant_value(self):
        """The AlgebraicConstant value of a constant Scalar."""
        from .algebraic import AlgebraicConstant

        if not self.is_constant():
            raise ValueError("not a constant")
        return AlgebraicConstant(self.num)

    def nterms(self) -> int:
        return len(self.num) + len(self.den) - 1

    def free_generators(self) -> set[str]:
        idx = set(P.gens_present(self.num)) | set(P.gens_present(self.den))
        return {_gen_of_index(k).name for k in idx}

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        a, b = self, other
        if a.den == b.den:
            if len(a.den) == 1 and 0 in a.den:
                return Scalar(P.add(a.num, b.num), a.den, canonical=True)
            return Scalar(P.add(a.num, b.num), a.den)
        if len(a.den) == 1 and len(b.den) == 1:
            (ma,), (mb,) = a.den.keys(), b.den.keys()
            fa, fb = P.fields_of(ma), P.fields_of(mb)
            n = max(len(fa), len(fb))
            fa += [0] * (n - len(fa))
            fb += [0] * (n - len(fb))
            lcm = P.pack([max(x, y) for x, y in zip(fa, fb)])
            num = P.add(P.mul_term(a.num, lcm - ma, ONE_Q), P.mul_term(b.num, lcm - mb, ONE_Q))
            return Scalar(num, {lcm: ONE_Q})
        num = P.add(P.mul(a.num, b.den), P.mul(b.num, a.den))
        return Scalar(num, P.mul(a.den, b.den))

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(P.neg(self.num), self.den, canonical=True)

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        if not self.num or not other.num:
            return _ZERO
        if len(other.num) == 1 and other.den == {0: ONE_Q} and 0 in other.num:
            c = other.num[0]
            if c == 1:
                return self
            return Scalar(P.scale(self.num, c), self.den, canonical=True)
        if len(self.num) == 1 and self.den == {0: ONE_Q} and 0 in self.num:
            return other.__mul__(self)
        if self.den == {0: ONE_Q} and other.den == {0: ONE_Q}:
            return Scalar(P.mul(self.num, other.num), self.den, canonical=True)
        return Scalar(P.mul(self.num, other.num), P.mul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise PoleError("division by a Scalar equal to zero")
        return Scalar(self.den, self.num)

    def __truediv__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        if not other.num:
            raise PoleError("division by a Scalar equal to zero")
        if other.is_rational():
            return Scalar(P.scale(self.num, ONE_Q / other.num[0]), self.den, canonical=True)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.coerce(other) / self

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            raise TypeError("Scalar powers must be integers")
        if n == 0:
            return _ONE
        if n < 0:
            return self.inverse() ** (-n)
        if len(self.den) == 1 and 0 in self.den:
            return Scalar(P.power(self.num, n), self.den, canonical=True)
        return Scalar(P.power(self.num, n), P.power(self.den, n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    # calculus -------------------------------------------------------------
    def diff(self, coord: str) -> "Scalar":
        """Total derivative with respect to a coordinate of the ambient chart."""
        if coord not in COORDINATES:
            raise ValueError(f"can only differentiate along coordinates, got {coord!r}")
        dn = _dpoly(self.num, coord)
        if self.den == {0: ONE_Q}:
            return dn
        dd = _dpoly(self.den, coord)
        d = Scalar(self.den, canonical=True) if len(self.den) > 1 else Scalar(self.den)
        if not dd:
            return dn / d
        n = Scalar(self.num, canonical=True)
        return (dn * d - n * dd) / (d * d)

    def pdiff(self, name: str) -> "Scalar":
        """Partial derivative treating ``name`` as an independent variable."""
        k = GENERATORS[name].index
        dn = Scalar(P.pdiff(self.num, k))
        if self.den == {0: ONE_Q}:
            return dn
        dd = Scalar(P.pdiff(self.den, k))
        d = Scalar(self.den)
        return (dn * d - Scalar(self.num) * dd) / (d * d)

    # substitution / evaluation -------------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "Scalar":
        """Substitute rationals or Scalars for generators."""
        num, den = self.num, self.den
        sym = {}
        for name, v in mapping.items():
            if name not in GENERATORS:
                continue
            k = GENERATORS[name].index
            if isinstance(v, Scalar) and not v.is_rational():
                sym[k] = v
                continue
            if isinstance(v, Scalar):
                v = v.num.get(0, Q(0))
            num = P.subs_value(num, k, v)
            den = P.subs_value(den, k, v)
        if not sym:
            if not den:
                raise PoleError("substitution hits a pole")
            return Scalar(num, den)
        return _subs_poly(num, sym) / _subs_poly(den, sym)

    def eval(self, point: Mapping[str, object]):
        """Exact value at a point assigning rationals to every free generator.

        Returns a ``Fraction`` when the value is rational, otherwise an
        ``AlgebraicConstant``.
        """
        from .algebraic import AlgebraicConstant

        missing = self.free_generators() - set(point)
        if missing:
            raise KeyError(f"evaluation point misses {sorted(missing)}")
        num, den = self.num, self.den
        for name in self.free_generators():
            k = GENERATORS[name].index
            num = P.subs_value(num, k, point[name])
            den = P.subs_value(den, k, point[name])
        if not den:
            raise PoleError("evaluation at a pole")
        val = AlgebraicConstant(num) / AlgebraicConstant(den)
        return val.as_rational() if val.is_rational() else val

    def eval_constant(self, point: Mapping[str, object]):
        """Like :meth:`eval` but always returns an ``AlgebraicConstant``."""
        from .algebraic import AlgebraicConstant

        v = self.eval(point)
        return v if isinstance(v, AlgebraicConstant) else AlgebraicConstant.rational(v)

    def truncate(self, name: str, order: int) -> "Scalar":
        """Drop terms of degree > ``order`` in ``name`` (denominator must be free of it)."""
        k = GENERATORS[name].index
        if P.has_gen(self.den, k):
            raise ValueError(f"denominator depends on {name}")
        return Scalar(P.truncate(self.num, k, order), self.den, canonical=True)

    def coefficient(self, name: str, power: int) -> "Scalar":
        """Coefficient of ``name**power`` (denominator must be free of ``name``)."""
        k = GENERATORS[name].index
        if P.has_gen(self.den, k):
            raise ValueError(f"denominator depends on {name}")
        parts = P.collect(self.num, k)
        return Scalar(parts.get(power, {}), self.den)

    def degree(self, name: str) -> int:
        return P.degree_in(self.num, GENERATORS[name].index)

    # display --------------------------------------------------------------
    def __repr__(self) -> str:
        from .serialize import to_text

        return f"Scalar({to_text(self)})"

    def __str__(self) -> str:
        from .serialize import to_text

        return to_text(self)


def _dpoly(a: dict, coord: str) -> Scalar:
    if not a:
        return _ZERO
    ci = GENERATORS[coord].index
    res = Scalar(P.pdiff(a, ci), canonical=True)
    present = P.gens_present(a)
    for k in GENERATORS.with_rules:
        if k in present:
            g = _gen_of_index(k)
            r = GENERATORS.rule(g, coord)
            if r:
                res = res + Scalar(P.pdiff(a, k), canonical=True) * r
    return res


def _subs_poly(a: dict, sym: dict[int, Scalar]) -> Scalar:
    """Substitute Scalars for some generators of a polynomial."""
    groups: dict[tuple, dict] = {}
    for m, c in a.items():
        key = tuple(P.exponent(m, k) for k in sym)
        rest = m
        for k, e in zip(sym, key):
            rest -= e << P.field_shift(k)
        groups.setdefault(key, {})[rest] = c
    cache: dict[tuple[int, int], Scalar] = {}

    def pw(k: int, e: int) -> Scalar:
        v = cache.get((k, e))
        if v is None:
            v = sym[k] ** e
            cache[(k, e)] = v
        return v

    total = _ZERO
    for key, rest in groups.items():
        term = Scalar(rest)
        for k, e in zip(sym, key):
            if e:
                term = term * pw(k, e)
        total = total + term
    return total


_ZERO = Scalar({}, {0: ONE_Q}, canonical=True)
_ONE = Scalar({0: ONE_Q}, {0: ONE_Q}, canonical=True)
GENERATORS["E"].exponent = Scalar.gen("b") * Scalar.gen("x") / 3


def gens(*names: str) -> tuple[Scalar, ...]:
    return tuple(Scalar.gen(n) for n in names)


def as_scalars(values: Iterable) -> list[Scalar]:
    return [Scalar.coerce(v) for v in values]


def map_scalars(fn: Callable[[Scalar], Scalar], values: Iterable[Scalar]) -> list[Scalar]:
    return [fn(v) for v in values]
