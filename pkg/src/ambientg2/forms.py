"""Exterior algebra over a chart: forms, coframes, d, interior product, Hodge star."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .cas import COORDINATES, M_COORDINATES, Scalar, from_json, to_json, to_latex
from .cas import linalg


@dataclass(frozen=True)
class Chart:
    name: str
    coords: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("chart coordinates must be unique")

    @property
    def dim(self) -> int:
        return len(self.coords)


M_CHART = Chart("M", M_COORDINATES)
AMBIENT_CHART = Chart("ambient", COORDINATES)
CHARTS = {c.name: c for c in (M_CHART, AMBIENT_CHART)}


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 on repeated entries."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class Coframe:
    """Coframe 1-forms ``theta^i = sum_a M[i][a] dx^a`` on a chart.

    ``offset`` is only used for display labels (1 for theta^1..theta^5,
    0 for xi^0..xi^6).
    """

    def __init__(self, name: str, chart: Chart, matrix: Sequence[Sequence[object]], *, offset: int = 1,
                 symbol: str | None = None):
        n = chart.dim
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise ValueError(f"coframe matrix must be {n}x{n}")
        self.name = name
        self.chart = chart
        self.matrix = [[Scalar.coerce(v) for v in row] for row in matrix]
        self.offset = offset
        self.symbol = symbol or name

    @property
    def dim(self) -> int:
        return self.chart.dim

    @cached_property
    def inverse(self) -> list[list[Scalar]]:
        """``Minv[a][i]``: dual frame vector ``E_i = sum_a Minv[a][i] d/dx^a``."""
        return linalg.inverse(self.matrix)

    def frame_derivative(self, f: Scalar, m: int) -> Scalar:
        """``E_m(f)``."""
        acc = Scalar.zero()
        for a, c in enumerate(self.chart.coords):
            w = self.inverse[a][m]
            if w:
                df = f.diff(c)
                if df:
                    acc = acc + w * df
        return acc

    def gradient(self, f: Scalar) -> list[Scalar]:
        """Frame components of ``df``."""
        partials = [f.diff(c) for c in self.chart.coords]
        out = []
        for m in range(self.dim):
            acc = Scalar.zero()
            for a in range(self.dim):
                if partials[a] and self.inverse[a][m]:
                    acc = acc + self.inverse[a][m] * partials[a]
            out.append(acc)
        return out

    def form(self, i: int) -> "DifferentialForm":
        return DifferentialForm(1, self.chart, {(i,): Scalar.one()}, self)

    def coordinate_form(self, i: int) -> "DifferentialForm":
        return DifferentialForm(1, self.chart, {(a,): c for a, c in enumerate(self.matrix[i]) if c})

    @cached_property
    def structure(self) -> list["DifferentialForm"]:
        """``d theta^i`` expressed in this coframe."""
        out = []
        for i in range(self.dim):
            d = exterior_d(self.coordinate_form(i))
            out.append(change_basis(d, self))
        return out

    def scaled(self, factor: Scalar, name: str | None = None) -> "Coframe":
        return Coframe(name or f"{self.name}*", self.chart, [[factor * v for v in row] for row in self.matrix],
                       offset=self.offset, symbol=self.symbol)

    def label(self, i: int) -> int:
        return i + self.offset

    def __repr__(self) -> str:
        return f"Coframe({self.name!r}, chart={self.chart.name})"


def constant_change(source: Coframe, coeffs: Sequence[Sequence[object]], name: str, *, offset: int = 0,
                    symbol: str | None = None) -> Coframe:
    """Coframe ``phi^i = sum_j coeffs[i][j] theta^j`` built from ``source``."""
    coeffs = [[Scalar.coerce(v) for v in row] for row in coeffs]
    return Coframe(name, source.chart, linalg.matmul(coeffs, source.matrix), offset=offset, symbol=symbol)


class DifferentialForm:
    """A k-form with Scalar coefficients on strictly increasing index tuples.

    ``basis`` is ``None`` for coordinate differentials or a :class:`Coframe`.
    """

    __slots__ = ("degree", "chart", "coeffs", "basis")

    def __init__(self, degree: int, chart: Chart, coeffs: Mapping[tuple[int, ...], object] | None = None,
                 basis: Coframe | None = None):
        if degree < 0 or degree > chart.dim:
            raise ValueError(f"degree {degree} impossible on a {chart.dim}-dimensional chart")
        if basis is not None and basis.chart != chart:
            raise ValueError("basis lives on a different chart")
        self.degree = degree
        self.chart = chart
        self.basis = basis
        clean: dict[tuple[int, ...], Scalar] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            s = perm_sign(idx)
            if not s:
                continue
            key = tuple(sorted(idx))
            c = Scalar.coerce(c)
            if s < 0:
                c = -c
            if key in clean:
                c = clean[key] + c
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self.coeffs = clean

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, degree: int, chart: Chart, basis: Coframe | None = None) -> "DifferentialForm":
        return cls(degree, chart, {}, basis)

    @classmethod
    def function(cls, f: object, chart: Chart, basis: Coframe | None = None) -> "DifferentialForm":
        return cls(0, chart, {(): f}, basis)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "DifferentialForm":
        """``d(name)``."""
        return cls(1, chart, {(chart.coords.index(name),): 1})

    # inspection -----------------------------------------------------------
    def __getitem__(self, idx: Iterable[int]) -> Scalar:
        idx = tuple(idx)
        s = perm_sign(idx)
        if not s:
            return Scalar.zero()
        c = self.coeffs.get(tuple(sorted(idx)), Scalar.zero())
        return c if s > 0 else -c

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "DifferentialForm") -> None:
        if self.chart != other.chart:
            raise ValueError("forms live on different charts")
        if self.basis is not other.basis:
            raise ValueError(f"basis mismatch: {_basis_name(self.basis)} vs {_basis_name(other.basis)}")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return DifferentialForm(self.degree, self.chart, out, self.basis)

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm(self.degree, self.chart, {k: -v for k, v in self.coeffs.items()}, self.basis)

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def __mul__(self, f: object) -> "DifferentialForm":
        if isinstance(f, DifferentialForm):
            return wedge(self, f)
        f = Scalar.coerce(f)
        return DifferentialForm(self.degree, self.chart, {k: v * f for k, v in self.coeffs.items()}, self.basis)

    __rmul__ = __mul__

    def __xor__(self, other: "DifferentialForm") -> "DifferentialForm":
        return wedge(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (self.degree, self.chart, self.basis, self.coeffs) == (other.degree, other.chart, other.basis,
                                                                      other.coeffs)

    def map(self, fn) -> "DifferentialForm":
        return DifferentialForm(self.degree, self.chart, {k: fn(v) for k, v in self.coeffs.items()}, self.basis)

    def subs(self, mapping: Mapping[str, object]) -> "DifferentialForm":
        return self.map(lambda s: s.subs(mapping))

    # output ---------------------------------------------------------------
    def to_json(self) -> dict:
        off = self.basis.offset if self.basis is not None else 0
        return {
            "degree": self.degree,
            "chart": self.chart.name,
            "basis": _basis_name(self.basis),
            "entries": [{"idx": [i + off for i in k], "coeff": to_json(v)} for k, v in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data: dict, bases: Mapping[str, Coframe] | None = None) -> "DifferentialForm":
        chart = CHARTS[data["chart"]]
        basis = None
        if data["basis"] != "coordinates":
            if not bases or data["basis"] not in bases:
                raise KeyError(f"unknown basis {data['basis']!r}")
            basis = bases[data["basis"]]
        off = basis.offset if basis is not None else 0
        coeffs = {tuple(i - off for i in e["idx"]): from_json(e["coeff"]) for e in data["entries"]}
        return cls(data["degree"], chart, coeffs, basis)

    def to_latex(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in sorted(self.coeffs.items()):
            parts.append(_term_latex(v, self._mono_latex(k)))
        return " + ".join(parts).replace("+ -", "- ")

    def _mono_latex(self, idx: tuple[int, ...]) -> str:
        if not idx:
            return ""
        if self.basis is None:
            return r" \wedge ".join(r"\mathrm{d}" + self.chart.coords[i] for i in idx)
        sym = {"xi": r"\xi", "eta": r"\eta", "theta": r"\theta", "thetahat": r"\hat\theta"}.get(
            self.basis.symbol, self.basis.symbol)
        labels = [self.basis.label(i) for i in idx]
        if all(0 <= lab <= 9 for lab in labels):
            return "%s^{%s}" % (sym, "".join(str(lab) for lab in labels))
        return r" \wedge ".join("%s^{%d}" % (sym, lab) for lab in labels)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self.coeffs.items()))
        return f"DifferentialForm(deg={self.degree}, basis={_basis_name(self.basis)}, {{{body}}})"


def _term_latex(coeff: Scalar, mono: str) -> str:
    c = to_latex(coeff)
    if not mono:
        return c
    if c == "1":
        return mono
    if c == "-1":
        return "-" + mono
    if coeff.nterms() > 1:
        c = r"\left(%s\right)" % c
    return f"{c} {mono}"


def _basis_name(basis: Coframe | None) -> str:
    return "coordinates" if basis is None else basis.name


def one_form(chart: Chart, coeffs: Sequence[object], basis: Coframe | None = None) -> DifferentialForm:
    return DifferentialForm(1, chart, {(i,): c for i, c in enumerate(coeffs)}, basis)


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    a._check(b)
    if a.degree + b.degree > a.chart.dim:
        return DifferentialForm.zero(a.chart.dim, a.chart, a.basis)
    out: dict[tuple[int, ...], Scalar] = {}
    for ka, va in a.coeffs.items():
        sa = set(ka)
        for kb, vb in b.coeffs.items():
            if sa.intersection(kb):
                continue
            idx = ka + kb
            s = perm_sign(idx)
            key = tuple(sorted(idx))
            term = va * vb
            if s < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return DifferentialForm(a.degree + b.degree, a.chart, out, a.basis)


def wedge_all(forms: Iterable[DifferentialForm]) -> DifferentialForm:
    forms = list(forms)
    acc = forms[0]
    for f in forms[1:]:
        acc = wedge(acc, f)
    return acc


def exterior_d(a: DifferentialForm) -> DifferentialForm:
    chart = a.chart
    n = chart.dim
    if a.degree == n:
        return DifferentialForm.zero(n, chart, a.basis)
    out: dict[tuple[int, ...], Scalar] = {}

    def acc(idx: tuple[int, ...], val: Scalar) -> None:
        s = perm_sign(idx)
        if not s or not val:
            return
        key = tuple(sorted(idx))
        if s < 0:
            val = -val
        out[key] = out[key] + val if key in out else val

    if a.basis is None:
        for k, v in a.coeffs.items():
            for c in range(n):
                if c in k:
                    continue
                acc((c,) + k, v.diff(chart.coords[c]))
        return DifferentialForm(a.degree + 1, chart, out)
    frame = a.basis
    struct = frame.structure
    for k, v in a.coeffs.items():
        grad = frame.gradient(v)
        for m in range(n):
            if m not in k:
                acc((m,) + k, grad[m])
        # d(theta^{i1} ^ ... ^ theta^{ik}) = sum_r (-1)^r theta^{i1}..d theta^{ir}..theta^{ik}
        for r, i in enumerate(k):
            for pair, c in struct[i].coeffs.items():
                if set(pair).intersection(k[:r] + k[r + 1:]):
                    continue
                idx = k[:r] + pair + k[r + 1:]
                acc(idx, v * c if r % 2 == 0 else -(v * c))
    return DifferentialForm(a.degree + 1, chart, out, frame)


def _transform(a: DifferentialForm, rows: Sequence[Sequence[Scalar]], target: Coframe | None) -> DifferentialForm:
    """Substitute ``e^i = sum_j rows[i][j] f^j`` into ``a``."""
    ones = []
    for i in range(a.chart.dim):
        ones.append(DifferentialForm(1, a.chart, {(j,): c for j, c in enumerate(rows[i]) if c}, target))
    out = DifferentialForm.zero(a.degree, a.chart, target)
    for k, v in a.coeffs.items():
        if not k:
            out = out + DifferentialForm(0, a.chart, {(): v}, target)
            continue
        term = wedge_all(ones[i] for i in k)
        out = out + term * v
    return out


def change_basis(a: DifferentialForm, target: Coframe | None) -> DifferentialForm:
    """Re-express ``a`` in ``target`` (a coframe, or ``None`` for coordinates)."""
    if a.basis is target:
        return a
    if target is not None and target.chart != a.chart:
        raise ValueError("source and target live on different charts")
    if a.basis is not None:
        a = _transform(a, a.basis.matrix, None)
    if target is None:
        return a
    return _transform(a, target.inverse, target)


def interior(X: int | Sequence[object], a: DifferentialForm) -> DifferentialForm:
    """Contraction with a basis vector (index) or with a component vector."""
    if a.degree == 0:
        return DifferentialForm.zero(0, a.chart, a.basis)
    if isinstance(X, int):
        comps = {X: Scalar.one()}
    else:
        comps = {i: Scalar.coerce(c) for i, c in enumerate(X) if Scalar.coerce(c)}
    out: dict[tuple[int, ...], Scalar] = {}
    for k, v in a.coeffs.items():
        for r, i in enumerate(k):
            if i in comps:
                key = k[:r] + k[r + 1:]
                term = v * comps[i]
                if r % 2:
                    term = -term
                out[key] = out[key] + term if key in out else term
    return DifferentialForm(a.degree - 1, a.chart, out, a.basis)


def _sqrt_abs_det(g: Sequence[Sequence[Scalar]]) -> Scalar:
    d = linalg.det(g)
    if not d.is_constant():
        raise ValueError("hodge star needs a constant frame metric")
    v = d.constant_value()
    if not v.is_rational():
        raise ValueError("frame metric determinant must be rational")
    r = abs(v.as_rational())
    num, den = r.numerator, r.denominator
    import math

    sn, sd = math.isqrt(num), math.isqrt(den)
    if sn * sn != num or sd * sd != den:
        raise ValueError("|det g| must be a rational square")
    return Scalar.const(sn) / sd


def hodge(a: DifferentialForm, metric: Sequence[Sequence[object]]) -> DifferentialForm:
    """Hodge star for a constant frame metric, orientation ``e^0 ^ ... ^ e^{n-1} > 0``.

    Defined by ``alpha ^ *beta = <alpha, beta> vol``.
    """
    g = [[Scalar.coerce(v) for v in row] for row in metric]
    if any(not v.is_constant() for row in g for v in row):
        raise ValueError("hodge star needs a constant frame metric")
    n = a.chart.dim
    if a.basis is None:
        raise ValueError("hodge star needs a coframe basis")
    ginv = linalg.inverse(g)
    root = _sqrt_abs_det(g)
    k = a.degree
    # raise all indices: a^I = sum_K det(ginv[I, K]) a_K
    raised: dict[tuple[int, ...], Scalar] = {}
    for K, v in a.coeffs.items():
        for I in itertools.combinations(range(n), k):
            sub = [[ginv[i][j] for j in K] for i in I]
            d = linalg.det(sub) if k else Scalar.one()
            if d:
                raised[I] = raised[I] + d * v if I in raised else d * v
    out: dict[tuple[int, ...], Scalar] = {}
    for I, v in raised.items():
        J = tuple(j for j in range(n) if j not in I)
        s = perm_sign(I + J)
        out[J] = v * root if s > 0 else -(v * root)
    return DifferentialForm(n - k, a.chart, out, a.basis)


def inner(a: DifferentialForm, b: DifferentialForm, metric: Sequence[Sequence[object]]) -> Scalar:
    """Induced inner product of two k-forms for a constant frame metric."""
    a._check(b)
    g = [[Scalar.coerce(v) for v in row] for row in metric]
    ginv = linalg.inverse(g)
    acc = Scalar.zero()
    for I, va in a.coeffs.items():
        for J, vb in b.coeffs.items():
            d = linalg.det([[ginv[i][j] for j in J] for i in I]) if I else Scalar.one()
            if d:
                acc = acc + d * va * vb
    return acc


class SymmetricTensor:
    """Symmetric 2-tensor ``sum T_ij e^i e^j`` (the juxtaposition product), never a wedge."""

    __slots__ = ("chart", "basis", "comps")

    def __init__(self, chart: Chart, comps: Mapping[tuple[int, int], object] | None = None,
                 basis: Coframe | None = None):
        self.chart = chart
        self.basis = basis
        clean: dict[tuple[int, int], Scalar] = {}
        for (i, j), v in (comps or {}).items():
            key = (min(i, j), max(i, j))
            v = Scalar.coerce(v)
            if key in clean:
                v = clean[key] + v
            if v:
                clean[key] = v
            else:
                clean.pop(key, None)
        self.comps = clean

    @classmethod
    def from_matrix(cls, chart: Chart, m: Sequence[Sequence[object]], basis: Coframe | None = None) -> "SymmetricTensor":
        n = len(m)
        comps = {}
        for i in range(n):
            for j in range(i, n):
                a, b = Scalar.coerce(m[i][j]), Scalar.coerce(m[j][i])
                if a != b:
                    raise ValueError("matrix is not symmetric")
                if a:
                    comps[(i, j)] = a
        return cls(chart, comps, basis)

    @classmethod
    def product(cls, a: DifferentialForm, b: DifferentialForm) -> "SymmetricTensor":
        """Symmetrized product ``ab = (a (x) b + b (x) a)/2`` of two 1-forms."""
        a._check(b)
        comps: dict[tuple[int, int], Scalar] = {}
        for (i,), va in a.coeffs.items():
            for (j,), vb in b.coeffs.items():
                key = (min(i, j), max(i, j))
                val = va * vb if i == j else va * vb / 2
                comps[key] = comps[key] + val if key in comps else val
        return cls(a.chart, comps, a.basis)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.comps.get((min(i, j), max(i, j)), Scalar.zero())

    def matrix(self) -> list[list[Scalar]]:
        n = self.chart.dim
        return [[self[i, j] for j in range(n)] for i in range(n)]

    def __add__(self, other: "SymmetricTensor") -> "SymmetricTensor":
        if other.basis is not self.basis:
            raise ValueError("basis mismatch")
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return SymmetricTensor(self.chart, out, self.basis)

    def __neg__(self) -> "SymmetricTensor":
        return self.scale(-1)

    def __sub__(self, other: "SymmetricTensor") -> "SymmetricTensor":
        return self + (-other)

    def scale(self, f: object) -> "SymmetricTensor":
        f = Scalar.coerce(f)
        return SymmetricTensor(self.chart, {k: v * f for k, v in self.comps.items()}, self.basis)

    __mul__ = scale
    __rmul__ = scale

    def map(self, fn) -> "SymmetricTensor":
        return SymmetricTensor(self.chart, {k: fn(v) for k, v in self.comps.items()}, self.basis)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymmetricTensor):
            return NotImplemented
        return self.basis is other.basis and self.comps == other.comps

    def change_basis(self, target: Coframe | None) -> "SymmetricTensor":
        if target is self.basis:
            return self
        m = self.matrix()
        if self.basis is not None:
            # coordinate components: M^T T M
            M = self.basis.matrix
            m = linalg.matmul(linalg.matmul(linalg.transpose(M), m), M)
        if target is not None:
            Minv = target.inverse
            m = linalg.matmul(linalg.matmul(linalg.transpose(Minv), m), Minv)
        return SymmetricTensor.from_matrix(self.chart, m, target)

    def to_json(self) -> dict:
        off = self.basis.offset if self.basis is not None else 0
        return {
            "chart": self.chart.name,
            "basis": _basis_name(self.basis),
            "entries": [{"idx": [i + off, j + off], "coeff": to_json(v)} for (i, j), v in sorted(self.comps.items())],
        }

    def to_latex(self) -> str:
        if not self.comps:
            return "0"
        sym = (r"\mathrm{d}" if self.basis is None else
               {"xi": r"\xi", "eta": r"\eta", "theta": r"\theta", "thetahat": r"\hat\theta"}.get(
                   self.basis.symbol, self.basis.symbol))

        def lab(i: int) -> str:
            if self.basis is None:
                return sym + self.chart.coords[i]
            return "%s^{%d}" % (sym, self.basis.label(i))

        parts = []
        for (i, j), v in sorted(self.comps.items()):
            if i == j:
                mono = (r"(%s)^2" % lab(i)) if self.basis is not None else lab(i) + "^2"
                parts.append(_term_latex(v, mono))
            else:
                parts.append(_term_latex(v * 2, f"{lab(i)} {lab(j)}"))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self.comps.items()))
        return f"SymmetricTensor(basis={_basis_name(self.basis)}, {{{body}}})"
