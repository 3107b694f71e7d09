"""The eight-parameter family ``F = q^2 + sum a_i p^i + b z`` and its metric ``g_F``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .cas import PARAMETERS, AlgebraicConstant, Scalar, exp_generator, gens
from .cas import linalg
from .forms import M_CHART, Coframe, DifferentialForm, SymmetricTensor

SQRT3 = Scalar.const(AlgebraicConstant.radical(0, 1))


def c2(k: int, d: int = 3) -> Scalar:
    """``2^(k/d)`` for ``d`` in {1, 2, 3, 6}."""
    return Scalar.const(AlgebraicConstant.radical(k * 6 // d, 0))


@dataclass(frozen=True)
class ParameterSet:
    """Values of ``a0..a6, b``; ``None`` keeps a parameter symbolic."""

    values: tuple[Fraction | None, ...] = (None,) * 8

    @classmethod
    def symbolic(cls) -> "ParameterSet":
        return cls()

    @classmethod
    def from_mapping(cls, m: Mapping[str, object], default: object = None) -> "ParameterSet":
        unknown = set(m) - set(PARAMETERS)
        if unknown:
            raise ValueError(f"unknown parameters {sorted(unknown)}")
        vals = []
        for name in PARAMETERS:
            v = m.get(name, default)
            vals.append(None if v is None or v == "symbolic" else Fraction(v))
        return cls(tuple(vals))

    @classmethod
    def only(cls, **kw: object) -> "ParameterSet":
        """Given parameters set, all others zero."""
        return cls.from_mapping(kw, default=0)

    @classmethod
    def parse(cls, text: str) -> "ParameterSet":
        """``"symbolic"`` or a list like ``"a3=1,b=1/2"`` (unlisted parameters are 0)."""
        text = text.strip()
        if text in ("", "symbolic"):
            return cls.symbolic()
        m = {}
        for item in text.split(","):
            k, _, v = item.partition("=")
            k, v = k.strip(), v.strip()
            if not _ or not v:
                raise ValueError(f"cannot parse parameter item {item!r}")
            m[k] = v if v == "symbolic" else Fraction(v)
        return cls.from_mapping(m, default=0)

    def scalar(self, name: str) -> Scalar:
        v = self.values[PARAMETERS.index(name)]
        return Scalar.gen(name) if v is None else Scalar.const(v)

    def exp_E(self) -> Scalar:
        """``e^(b x/3)``: the generator ``E`` for symbolic ``b``, 1 for ``b = 0``,
        and a dedicated exponential generator for any other rational ``b``."""
        b = self.values[-1]
        if b is None:
            return Scalar.gen("E")
        if b == 0:
            return Scalar.one()
        x = Scalar.gen("x")
        tag = f"{b.numerator}" if b.denominator == 1 else f"{b.numerator}_{b.denominator}"
        return exp_generator(f"E_b{tag}".replace("-", "m"), Scalar.const(b) * x / 3, r"e^{\frac{%s x}{3}}" % b)

    def substitution(self) -> dict[str, Fraction]:
        return {n: v for n, v in zip(PARAMETERS, self.values) if v is not None}

    def apply(self, s: Scalar) -> Scalar:
        sub = self.substitution()
        return s.subs(sub) if sub else s

    def as_dict(self) -> dict[str, str]:
        return {n: ("symbolic" if v is None else str(v)) for n, v in zip(PARAMETERS, self.values)}

    def is_symbolic(self) -> bool:
        return all(v is None for v in self.values)

    def describe(self) -> str:
        """Short label such as ``"a3=1"`` or ``"symbolic"``; zero parameters are omitted."""
        if self.is_symbolic():
            return "symbolic"
        items = [f"{n}={'symbolic' if v is None else v}" for n, v in zip(PARAMETERS, self.values) if v != 0]
        return ",".join(items) or "flat"


@dataclass
class APolynomials:
    A1: Scalar
    A2: Scalar
    A3: Scalar
    A4: Scalar
    A5: Scalar
    A6: Scalar

    def __getitem__(self, k: int) -> Scalar:
        return getattr(self, f"A{k}")

    def as_list(self) -> list[Scalar]:
        return [self[k] for k in range(1, 7)]


CONVENTIONS = ("resolved", "printed")


def build_apolys(params: ParameterSet | None = None, convention: str = "resolved") -> APolynomials:
    """The polynomials ``A_1..A_6``.

    ``convention="printed"`` uses the normalisation ``1/(45 2^(2/3))`` for ``A_2``
    exactly as transcribed; ``"resolved"`` uses ``1/(45 2^(1/3))``, the only
    reading under which the tabulated connection and curvature of ``g_F`` hold.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    params = params or ParameterSet.symbolic()
    a = [params.scalar(f"a{k}") for k in range(7)]
    b = params.scalar("b")
    p, q = gens("p", "q")
    A1 = (a[1] + 2 * a[2] * p + 3 * a[3] * p**2 + 4 * a[4] * p**3 + 5 * a[5] * p**4 + 6 * a[6] * p**5
          + 2 * b * q) / c2(1)
    A2 = (9 * a[2] + 27 * a[3] * p + 54 * a[4] * p**2 + 90 * a[5] * p**3 + 135 * a[6] * p**4
          + 2 * b**2) / (45 * (c2(2) if convention == "printed" else c2(1)))
    A3 = Scalar.const(Fraction(9, 20)) / c2(2) * (a[3] + 4 * a[4] * p + 10 * a[5] * p**2 + 20 * a[6] * p**3)
    A4 = Scalar.const(Fraction(9, 10)) * (a[4] + 5 * a[5] * p + 15 * a[6] * p**2)
    A5 = Scalar.const(Fraction(27, 4)) / c2(1) * (a[5] + 6 * a[6] * p)
    A6 = Scalar.const(Fraction(243, 2)) / c2(2) * a[6]
    return APolynomials(A1, A2, A3, A4, A5, A6)


def F_function(params: ParameterSet | None = None) -> Scalar:
    params = params or ParameterSet.symbolic()
    p, q, z = gens("p", "q", "z")
    F = q**2 + params.scalar("b") * z
    for i in range(7):
        F = F + params.scalar(f"a{i}") * p**i
    return F


_COFRAMES: dict[tuple[ParameterSet, str], tuple[Coframe, Coframe]] = {}


def build_coframe(params: ParameterSet | None = None, convention: str = "resolved") -> tuple[Coframe, Coframe]:
    """The coframes theta-hat and theta = E^-2 theta-hat on (x, y, z, p, q).

    Results are cached so repeated calls share basis objects.
    """
    params = params or ParameterSet.symbolic()
    key = (params, convention)
    if key not in _COFRAMES:
        _COFRAMES[key] = _build_coframe(params, convention)
    return _COFRAMES[key]


def _build_coframe(params: ParameterSet, convention: str) -> tuple[Coframe, Coframe]:
    A = build_apolys(params, convention)
    F = F_function(params)
    b = params.scalar("b")
    p, q = gens("p", "q")
    one, zero = Scalar.one(), Scalar.zero()
    # columns: dx, dy, dz, dp, dq
    dy_pdx = [-p, one, zero, zero, zero]
    dp_qdx = [-q, zero, zero, one, zero]
    rows = [
        dy_pdx,
        [-F + 2 * q**2, zero, one, -2 * q, zero],
        [v * (-c2(4) / SQRT3) for v in dp_qdx],
        [1 / c2(1), zero, zero, zero, zero],
    ]
    r5 = [3 * A.A2 * v for v in dy_pdx]
    r5 = [x + c2(2) * b / 3 * v for x, v in zip(r5, dp_qdx)]
    r5[4] = r5[4] - c2(2)
    r5[0] = r5[0] + A.A1
    rows.append(r5)
    hat = Coframe("thetahat", M_CHART, rows, offset=1, symbol="thetahat")
    theta = hat.scaled(params.exp_E() ** -2, "theta")
    theta.symbol = "theta"
    return hat, theta


G_F = [
    [0, 0, 0, 0, 1],
    [0, 0, 0, -1, 0],
    [0, 0, 1, 0, 0],
    [0, -1, 0, 0, 0],
    [1, 0, 0, 0, 0],
]


@dataclass
class FamilyMetric:
    params: ParameterSet
    apolys: APolynomials
    thetahat: Coframe
    theta: Coframe
    G: list[list[Scalar]]

    def symmetric(self) -> SymmetricTensor:
        return SymmetricTensor.from_matrix(M_CHART, self.G, self.theta)


def metric_gF(params: ParameterSet | None = None, convention: str = "resolved"):
    """``g_F = 2 theta^1 theta^5 - 2 theta^2 theta^4 + (theta^3)^2`` as a FrameMetric."""
    from .frames import FrameMetric

    params = params or ParameterSet.symbolic()
    hat, theta = build_coframe(params, convention)
    return FrameMetric(theta, G_F, name="g_F", params=params)


def theta_forms(params: ParameterSet | None = None) -> list[DifferentialForm]:
    _, theta = build_coframe(params)
    return [theta.coordinate_form(i) for i in range(5)]


def distribution_check(params: ParameterSet | None = None) -> dict:
    """theta-hat^1..3 span the annihilator of span(d_q, d_x + p d_y + q d_p + F d_z)."""
    params = params or ParameterSet.symbolic()
    hat, _ = build_coframe(params)
    F = F_function(params)
    p, q = gens("p", "q")
    one, zero = Scalar.one(), Scalar.zero()
    # vectors in (x, y, z, p, q) components
    X1 = [zero, zero, zero, zero, one]
    X2 = [one, p, F, q, zero]
    omegas = [
        [-F, zero, one, zero, zero],  # dz - F dx
        [-p, one, zero, zero, zero],  # dy - p dx
        [-q, zero, zero, one, zero],  # dp - q dx
    ]

    def pair(row, v):
        acc = Scalar.zero()
        for a, c in zip(row, v):
            acc = acc + a * c
        return acc

    annihilates = all(pair(w, X).is_zero() for w in omegas for X in (X1, X2))
    ranks = linalg.rank(omegas) == 3 and linalg.rank(omegas + [hat.matrix[i] for i in range(3)]) == 3
    Fqq = F.diff("q").diff("q")
    return {"omegas_annihilate": annihilates, "thetahat_in_span": ranks, "F_qq": str(Fqq),
            "pass": annihilates and ranks and Fqq == 2}


def ladder_constants(params: ParameterSet | None = None) -> dict[str, Scalar]:
    """Computed ratios ``dA_k/dp / A_{k+1}`` for k = 2..5 (symbolic parameters)."""
    A = build_apolys(params)
    out = {}
    for k in range(2, 6):
        num = A[k].diff("p")
        out[f"dA{k}/dp : A{k + 1}"] = num / A[k + 1]
    return out


# ---------------------------------------------------------------------------
# printed reference formulas

def _hat_form(hat: Coframe, coeffs: Mapping[tuple[int, ...], Scalar]) -> DifferentialForm:
    deg = len(next(iter(coeffs))) if coeffs else 1
    return DifferentialForm(deg, M_CHART, {tuple(i - 1 for i in k): v for k, v in coeffs.items()}, hat)


def printed_formulas(params: ParameterSet | None = None, convention: str = "resolved") -> dict[str, object]:
    """The tabulated connection, Schouten, Weyl, Cotton and Bach data of ``g_F``.

    Keys are 1-based (``Gamma_13``, ``W_14``, ``C_3``, ``P``, ``B``).
    """
    params = params or ParameterSet.symbolic()
    A = build_apolys(params, convention)
    hat, theta = build_coframe(params, convention)
    b = params.scalar("b")
    q = Scalar.gen("q")
    E = params.exp_E()
    s3 = SQRT3
    k3 = c2(1) / 3 * b  # 2^(1/3) b / 3
    zero1 = DifferentialForm.zero(1, M_CHART, hat)
    out: dict[str, object] = {}
    for key in ("Gamma_12", "Gamma_23", "Gamma_25"):
        out[key] = zero1
    out["Gamma_34"] = _hat_form(hat, {(3,): -k3, (5,): 1 / s3})
    out["Gamma_35"] = _hat_form(hat, {(4,): -1 / s3})
    out["Gamma_45"] = _hat_form(hat, {(1,): k3, (3,): 1 / (2 * s3)})
    out["Gamma_15"] = _hat_form(hat, {(4,): -k3})
    out["Gamma_24"] = _hat_form(hat, {(4,): -k3})
    out["Gamma_13"] = _hat_form(hat, {(1,): -2 * s3 * A.A3, (4,): -2 * s3 * A.A2})
    out["Gamma_14"] = _hat_form(hat, {(1,): c2(4) * (c2(4) * A.A3 * q - A.A2 * b),
                                      (3,): Scalar.const(3) * s3 / 2 * A.A2, (5,): -k3})
    out["P"] = SymmetricTensor(M_CHART, {(0, 0): -A.A4, (0, 3): -A.A3, (3, 3): -A.A2}, hat)
    w13 = c2(4) / s3 * (3 * c2(1) * A.A4 * q - A.A3 * b)
    w14_14 = (27 * A.A2**2 - 12 * c2(1) * A.A1 * A.A3 - 6 * c2(2) * A.A2 * b**2 + 40 * A.A3 * b * q
              - 24 * c2(1) * A.A4 * q**2) / 3
    out["W_12"] = _hat_form(hat, {(1, 4): -A.A4})
    out["W_13"] = _hat_form(hat, {(1, 3): -2 * A.A4, (1, 4): w13})
    out["W_14"] = _hat_form(hat, {(1, 2): -A.A4, (1, 3): w13, (1, 4): w14_14, (1, 5): A.A3, (2, 4): A.A3})
    out["W_15"] = _hat_form(hat, {(1, 4): A.A3})
    out["W_24"] = _hat_form(hat, {(1, 4): A.A3})
    zero2 = DifferentialForm.zero(2, M_CHART, hat)
    for key in ("W_23", "W_25", "W_34", "W_35", "W_45"):
        out[key] = zero2
    E6 = E**6
    th = lambda coeffs: DifferentialForm(2, M_CHART, {tuple(i - 1 for i in k): v for k, v in coeffs.items()}, theta)
    out["C_2"] = DifferentialForm.zero(2, M_CHART, theta)
    out["C_5"] = DifferentialForm.zero(2, M_CHART, theta)
    out["C_3"] = th({(1, 4): -s3 / 3 * A.A4 * E6})
    out["C_4"] = th({(1, 3): -s3 / 3 * A.A4 * E6, (1, 4): c2(2) / 3 * q * A.A4 * E6})
    out["C_1"] = th({(1, 3): -s3 / 3 * A.A5 * E6, (1, 4): k3 / b * (A.A4 * b + c2(4) * A.A5 * q) * E6}
                    if not b.is_zero() else {(1, 3): -s3 / 3 * A.A5 * E6,
                                             (1, 4): c2(1) / 3 * c2(4) * A.A5 * q * E6})
    E8 = E**8
    # "A6 theta^1 theta^2" taken verbatim as the symmetric product theta^1 theta^2
    out["B"] = SymmetricTensor(M_CHART, {(0, 1): -E8 * A.A6 / 12, (0, 3): -E8 * A.A5 / 6,
                                         (3, 3): -E8 * A.A4 / 6}, theta)
    return out


def resolved_bach(params: ParameterSet | None = None, convention: str = "resolved") -> SymmetricTensor:
    """The tabulated Bach tensor with ``A6 theta^1 theta^2`` read as ``A6 (theta^1)^2``."""
    params = params or ParameterSet.symbolic()
    A = build_apolys(params, convention)
    _, theta = build_coframe(params, convention)
    E8 = params.exp_E() ** 8
    return SymmetricTensor(M_CHART, {(0, 0): -E8 * A.A6 / 6, (0, 3): -E8 * A.A5 / 6,
                                     (3, 3): -E8 * A.A4 / 6}, theta)


def _engine_entry(cp, key: str, hat: Coframe):
    from .forms import change_basis

    if key.startswith("Gamma"):
        i, j = int(key[6]) - 1, int(key[7]) - 1
        return change_basis(cp.connection.form(i, j), hat)
    if key == "P":
        return cp.symmetric(cp.schouten, hat)
    if key.startswith("W"):
        i, j = int(key[2]) - 1, int(key[3]) - 1
        return cp.two_form(cp.weyl, i, j, basis=hat)
    if key.startswith("C"):
        return cp.two_form(cp.cotton, int(key[2]) - 1)
    if key == "B":
        return cp.symmetric(cp.bach)
    raise KeyError(key)


def conformance_report(params: ParameterSet | None = None, convention: str = "resolved", *,
                       with_solver: bool = True) -> list[dict]:
    """Engine against every tabulated formula; mismatches are reported, never corrected.

    Each entry has ``id``, ``status`` (MATCH or MISMATCH), ``engine``,
    ``printed`` and ``difference`` (LaTeX). The B entry also carries the
    reading that does match and, with ``with_solver``, the ``mu_2`` obtained
    independently from Ricci-flatness of the ambient metric.
    """
    from .frames import curvature

    params = params or ParameterSet.symbolic()
    fm = metric_gF(params, convention)
    cp = curvature(fm, with_bach=True)
    hat, _ = build_coframe(params, convention)
    rows = []
    for key, printed in printed_formulas(params, convention).items():
        engine = _engine_entry(cp, key, hat)
        diff = engine - printed
        entry = {"id": key, "status": "MATCH" if diff.is_zero() else "MISMATCH", "engine": engine.to_latex(),
                 "printed": printed.to_latex(), "difference": diff.to_latex(), "convention": convention}
        if key == "B":
            resolved = resolved_bach(params, convention)
            entry["resolution"] = {"reading": "A6 (theta^1)^2 in place of A6 theta^1 theta^2",
                                   "matches_engine": (engine - resolved).is_zero()}
            if with_solver:
                from .ambient import mu2_solver

                sol = mu2_solver(fm, cp.schouten)
                mu2 = sol.tensor(fm.coframe)
                entry["mu2_solver"] = {"mu2": mu2.to_latex(), "equals_minus_engine_B": (mu2 + engine).is_zero(),
                                       "kernel_dim": sol.kernel_dim, "verified": sol.verified}
        rows.append(entry)
    return rows
