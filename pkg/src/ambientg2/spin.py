"""Cl(4,3) in a fixed real 8-dimensional representation, the parallel spinor of the ambient metric and its 3-form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .ambient import XI_METRIC, gF_ambient
from .cas import Scalar
from .forms import DifferentialForm, exterior_d, hodge
from .frames import ConnectionForms, FrameMetric, levi_civita
from .nurowski import SQRT3, ParameterSet, c2
from .verdict import Verdict

Spinor = list[Scalar]
IntMatrix = list[list[int]]


def _block(a: IntMatrix, b: IntMatrix, c: IntMatrix, d: IntMatrix) -> IntMatrix:
    return [ra + rb for ra, rb in zip(a, b)] + [rc + rd for rc, rd in zip(c, d)]


def _imul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


I4 = [[int(i == j) for j in range(4)] for i in range(4)]
Z4 = [[0] * 4 for _ in range(4)]
NEG_I4 = [[-v for v in row] for row in I4]

GAMMA: list[IntMatrix] = [
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    [[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
]


def _off(g: IntMatrix) -> IntMatrix:
    return _block(Z4, g, g, Z4)


SIGMA: list[IntMatrix] = [
    _off(GAMMA[0]),
    _off(GAMMA[2]),
    _off(GAMMA[4]),
    _block(I4, Z4, Z4, NEG_I4),
    _off(GAMMA[1]),
    _off(GAMMA[3]),
    _block(Z4, NEG_I4, I4, Z4),
]

_J2 = [[0, -1], [1, 0]]


def _printed_spin_metric() -> IntMatrix:
    """The displayed 4x4 block matrix of 2x2 blocks ``[[0,0,J,0],[0,0,0,-J],[-J,0,0,0],[0,J,0,0]]``."""
    blocks = [[None, None, 1, None], [None, None, None, -1], [-1, None, None, None], [None, 1, None, None]]
    m = [[0] * 8 for _ in range(8)]
    for bi, row in enumerate(blocks):
        for bj, s in enumerate(row):
            if s is None:
                continue
            for i in range(2):
                for j in range(2):
                    m[2 * bi + i][2 * bj + j] = s * _J2[i][j]
    return m


PRINTED_SPIN_METRIC = _printed_spin_metric()


def spin_metric_matrix() -> IntMatrix:
    """``M`` with ``<phi, psi> = phi^T M psi`` for ``<phi, psi> = -(s4 s5 s6 phi, psi)``."""
    S = _imul(_imul(SIGMA[4], SIGMA[5]), SIGMA[6])
    return [[-S[j][i] for j in range(8)] for i in range(8)]


SPIN_METRIC = spin_metric_matrix()


# ---------------------------------------------------------------------------
# verdicts

def clifford_check() -> Verdict:
    """``s_i s_j + s_j s_i = 2 g_ij I_8`` for all 49 ordered pairs, and ``gamma_i^2 = (-1)^i I_4``."""
    failures = []
    for i in range(7):
        for j in range(7):
            a = _imul(SIGMA[i], SIGMA[j])
            b = _imul(SIGMA[j], SIGMA[i])
            want = 2 * XI_METRIC[i][j]
            if any(a[r][c] + b[r][c] != (want if r == c else 0) for r in range(8) for c in range(8)):
                failures.append([i, j])
    gam = [i for i in range(5) if _imul(GAMMA[i], GAMMA[i]) != [[(-1) ** i * v for v in row] for row in I4]]
    return Verdict.of("clifford", not failures and not gam,
                   {"pairs_checked": 49, "failing_pairs": failures, "failing_gamma": gam})


def spin_metric_check() -> Verdict:
    """The Gram matrix equals the displayed block matrix, is symmetric of split signature, and every ``sigma_i`` is skew."""
    M = SPIN_METRIC
    matches = M == PRINTED_SPIN_METRIC
    symmetric = all(M[i][j] == M[j][i] for i in range(8) for j in range(8))
    skew = []
    for k, s in enumerate(SIGMA):
        # <s phi, psi> = phi^T s^T M psi must equal -<s psi, phi> = -phi^T M^T s psi
        lhs = _imul([list(r) for r in zip(*s)], M)
        rhs = _imul([list(r) for r in zip(*M)], s)
        if any(lhs[i][j] != -rhs[i][j] for i in range(8) for j in range(8)):
            skew.append(k)
    from .frames import _signature

    sig = _signature([[Scalar.const(v) for v in row] for row in M])
    return Verdict.of("spin-metric", matches and symmetric and not skew and sig == (4, 4),
                   {"matches_printed": matches, "symmetric": symmetric, "non_skew_sigma": skew,
                    "signature": list(sig)})


# ---------------------------------------------------------------------------
# spinor algebra

def as_spinor(values: Sequence[object]) -> Spinor:
    if len(values) != 8:
        raise ValueError("spinors have 8 components")
    return [Scalar.coerce(v) for v in values]


def act(M: IntMatrix, psi: Spinor) -> Spinor:
    out = []
    for row in M:
        acc = Scalar.zero()
        for c, v in zip(row, psi):
            if c and v:
                acc = acc + v * c
        out.append(acc)
    return out


def clifford(v: Sequence[object], psi: Spinor) -> Spinor:
    """``V . psi`` for ``V = v^i e_i`` in the xi-frame."""
    out = [Scalar.zero()] * 8
    for i, vi in enumerate(v):
        vi = Scalar.coerce(vi)
        if vi:
            out = [a + vi * b for a, b in zip(out, act(SIGMA[i], psi))]
    return out


def spin_product(phi: Spinor, psi: Spinor) -> Scalar:
    acc = Scalar.zero()
    for i in range(8):
        if not phi[i]:
            continue
        for j in range(8):
            if SPIN_METRIC[i][j] and psi[j]:
                acc = acc + phi[i] * psi[j] * SPIN_METRIC[i][j]
    return acc


def psi_printed(params: ParameterSet | None = None, *, corrected: bool = True) -> Spinor:
    """The non-null parallel spinor of the ambient metric of ``g_F``.

    Verbatim it reads ``(0, -E, E, 0, sqrt(2/3) E (2^(1/3) b E^2 - 3), 0, 0,
    sqrt(2/3) E (2^(1/3) b E^2 + 3))`` with ``E = e^(bx/3)``; that spinor has
    ``<psi, psi> = 4 sqrt6 E^2`` and is not parallel. With ``corrected=True``
    the prefactor of the fifth and eighth entries is ``E^-1``, which gives the
    stated constant norm ``4 sqrt6`` and a parallel spinor.
    """
    params = params or ParameterSet.symbolic()
    E = params.exp_E()
    b = params.scalar("b")
    r = c2(1, 2) * SQRT3 / 3  # sqrt(2/3)
    pre = E**-1 if corrected else E
    z = Scalar.zero()
    return [z, -E, E, z, r * pre * (c2(1) * b * E**2 - 3), z, z, r * pre * (c2(1) * b * E**2 + 3)]


# ---------------------------------------------------------------------------
# connection

@dataclass
class SpinConnection:
    """``Omega[m]``: 8x8 Scalar matrices with ``nabla_{e_m} psi = e_m(psi) + Omega[m] psi``."""

    conn: ConnectionForms
    omega: list[list[list[Scalar]]]

    def nabla(self, psi: Spinor) -> list[Spinor]:
        cf = self.conn.fm.coframe
        n = self.conn.fm.n
        grads = [cf.gradient(v) if v else [Scalar.zero()] * n for v in psi]
        out = []
        for m in range(n):
            row = []
            for a in range(8):
                acc = grads[a][m]
                for b in range(8):
                    w = self.omega[m][a][b]
                    if w and psi[b]:
                        acc = acc + w * psi[b]
                row.append(acc)
            out.append(row)
        return out


def _sigma_pairs() -> list[list[IntMatrix]]:
    return [[_imul(SIGMA[k], SIGMA[l]) for l in range(7)] for k in range(7)]


def spin_connection(conn: ConnectionForms) -> SpinConnection:
    """``1/4 sum_{k,l} Gamma^{kl} s_k s_l`` over all ordered pairs, ``Gamma^{kl} = Gamma^k_j g^{jl}``."""
    n = conn.fm.n
    if n != 7:
        raise ValueError("the spin representation is seven dimensional")
    raised = conn.raised()
    ss = _sigma_pairs()
    omega = []
    for m in range(n):
        M = [[Scalar.zero()] * 8 for _ in range(8)]
        for k in range(7):
            for l in range(7):
                g = raised[k][l][m]
                if not g:
                    continue
                S = ss[k][l]
                for a in range(8):
                    for b in range(8):
                        if S[a][b]:
                            M[a][b] = M[a][b] + g * S[a][b] / 4
        omega.append(M)
    return SpinConnection(conn, omega)


def ambient_xi(params: ParameterSet | None = None, convention: str = "resolved") -> FrameMetric:
    return gF_ambient(params, convention=convention).xi_metric()


def parallel_spinor_check(params: ParameterSet | None = None, psi: Spinor | None = None, *,
                          convention: str = "resolved") -> Verdict:
    """All 7x8 components of ``nabla psi`` on the ambient metric of ``g_F``; ``psi`` defaults to the printed one."""
    params = params or ParameterSet.symbolic()
    fm = ambient_xi(params, convention)
    sc = spin_connection(levi_civita(fm))
    psi = psi if psi is not None else psi_printed(params)
    res = sc.nabla(psi)
    nonzero = [[m, a] for m in range(7) for a in range(8) if not res[m][a].is_zero()]
    norm = spin_product(psi, psi)
    return Verdict.of("parallel-spinor", not nonzero,
                   {"components": 56, "nonzero": nonzero, "norm": str(norm),
                    "norm_is_4sqrt6": (norm - 4 * c2(1, 2) * SQRT3).is_zero(),
                    "residual": [[str(v) for v in row] for row in res]})


# ---------------------------------------------------------------------------
# algebra of a non-null spinor

@dataclass
class Inversion:
    vector: list[Scalar]
    residual: Spinor

    @property
    def exact(self) -> bool:
        return all(v.is_zero() for v in self.residual)


def clifford_invert(psi: Spinor, chi: Spinor) -> Inversion:
    """``V`` with ``g(V, e_i) = -<chi, e_i . psi> / <psi, psi>``; exact when ``chi`` lies in ``{X . psi}``.

    Skewness of Clifford multiplication gives ``<X.psi, Y.psi> = -g(X, Y) <psi, psi>``
    (see ``clifford_pairing_check``), which is what makes this an inverse.
    """
    norm = spin_product(psi, psi)
    if norm.is_zero():
        raise ValueError("psi is null")
    lower = [-spin_product(chi, act(SIGMA[i], psi)) / norm for i in range(7)]
    V = [lower[i] * XI_METRIC[i][i] for i in range(7)]
    image = clifford(V, psi)
    return Inversion(V, [a - b for a, b in zip(chi, image)])


def squaring_3form(psi: Spinor, basis=None) -> DifferentialForm:
    """``omega(X, Y, Z) = g(X, A(Y, Z))`` with ``X Y psi - g(X, Y) psi = A(X, Y) psi``."""
    from .forms import AMBIENT_CHART

    coeffs = {}
    for i, j, k in itertools.combinations(range(7), 3):
        chi = [a - XI_METRIC[j][k] * b for a, b in zip(act(SIGMA[j], act(SIGMA[k], psi)), psi)]
        inv = clifford_invert(psi, chi)
        if not inv.exact:
            raise ArithmeticError("A(Y, Z) is not a Clifford image; input is not a spinor of the expected type")
        v = inv.vector[i] * XI_METRIC[i][i]
        if v:
            coeffs[(i, j, k)] = v
    return DifferentialForm(3, basis.chart if basis is not None else AMBIENT_CHART, coeffs, basis)


def ambient_omega(params: ParameterSet | None = None, *, convention: str = "resolved") -> DifferentialForm:
    """The 3-form of the parallel spinor, expressed in the xi-coframe of the ambient metric of ``g_F``."""
    params = params or ParameterSet.symbolic()
    return squaring_3form(psi_printed(params), ambient_xi(params, convention).coframe)


def omega_antisymmetry_defects(psi: Spinor) -> list[tuple[int, int, int]]:
    """Triples where ``g(e_i, A(e_j, e_k))`` fails to be totally skew."""
    norm = spin_product(psi, psi)
    vals = {}
    for j in range(7):
        for k in range(7):
            chi = [a - XI_METRIC[j][k] * b for a, b in zip(act(SIGMA[j], act(SIGMA[k], psi)), psi)]
            for i in range(7):
                vals[(i, j, k)] = -spin_product(chi, act(SIGMA[i], psi)) / norm
    bad = []
    for (i, j, k), v in vals.items():
        if not (v + vals[(j, i, k)]).is_zero() or not (v + vals[(i, k, j)]).is_zero():
            bad.append((i, j, k))
    return bad


def clifford_pairing_check(psi: Spinor) -> Verdict:
    """``<e_i.psi, e_j.psi> = kappa g_ij <psi, psi>`` and the constant ``kappa`` (it is -1)."""
    norm = spin_product(psi, psi)
    kappas = set()
    bad = []
    for i in range(7):
        for j in range(7):
            lhs = spin_product(act(SIGMA[i], psi), act(SIGMA[j], psi))
            if i != j:
                if not lhs.is_zero():
                    bad.append([i, j])
                continue
            kappas.add(str(lhs / (norm * XI_METRIC[i][i])))
    kappa = kappas.pop() if len(kappas) == 1 else None
    return Verdict.of("clifford-pairing", not bad and kappa is not None,
                   {"kappa": kappa, "off_diagonal_failures": bad})


def two_spinor_vector(psi: Spinor, phi: Spinor) -> list[Scalar]:
    """The vector ``V`` with ``g(V, X) = <X . psi, phi>``."""
    return [spin_product(act(SIGMA[i], psi), phi) * XI_METRIC[i][i] for i in range(7)]


# ---------------------------------------------------------------------------
# the printed 3-form

OMEGA_TERMS = ("012", "146", "014", "126", "025", "456", "045", "256", "016", "124",
               "023", "034", "236", "346", "036", "135", "234", "056", "245")


def printed_omega(params: ParameterSet | None = None, basis=None, *, corrected: bool = False) -> DifferentialForm:
    """The displayed 3-form with ``f(x) = E^2``.

    The coefficient written ``2^{1/3b}/3 f(x)`` is read as ``2^(1/3) b / 3 f(x)``.
    ``corrected=True`` additionally applies the changes needed to agree
    with the square of the parallel spinor: ``18 f(-x)`` becomes
    ``18 2^(1/3) f(-x)``, the pairs ``xi^012 - xi^146`` and ``xi^025 - xi^456``
    become sums, ``xi^016 + xi^124`` becomes a difference, and ``b f`` in the
    numerator of that coefficient becomes ``2 b f``.
    """
    from .forms import AMBIENT_CHART

    params = params or ParameterSet.symbolic()
    E = params.exp_E()
    b = params.scalar("b")
    f, fm = E**2, E**-2
    k = 1 / (6 * c2(5, 6) * SQRT3)
    r3 = 3 * c2(1)
    big = 18 * (c2(1) if corrected else 1) * fm
    flip = 1 if corrected else -1
    C: dict[str, Scalar] = {}
    v = k * (big - r3 * f + 4 * b**2 * f)
    C["012"], C["146"] = v, flip * v
    v = k * (big + r3 * f - 4 * b**2 * f)
    C["014"], C["126"] = v, v
    v = k * (big + r3 * f + 4 * b**2 * f)
    C["025"], C["456"] = -v, -flip * v
    v = k * (-big + r3 * f + 4 * b**2 * f)
    C["045"], C["256"] = v, v
    v = -c2(1, 6) * b * (3 * c2(2) - (2 if corrected else 1) * b * f) / (SQRT3 * (-3 + c2(1) * b * f))
    C["016"], C["124"] = v, -flip * v
    v = c2(1) * b / 3 * f
    C["023"], C["034"], C["236"], C["346"] = -v, -v, v, v
    for key in ("036", "135", "234"):
        C[key] = Scalar.one()
    v = c2(5, 6) * b / SQRT3
    C["056"], C["245"] = v, -v
    coeffs = {tuple(int(ch) for ch in key): val for key, val in C.items() if val}
    return DifferentialForm(3, basis.chart if basis is not None else AMBIENT_CHART, coeffs, basis)


def omega_closure(omega: DifferentialForm) -> dict[str, bool]:
    d = exterior_d(omega)
    star = hodge(omega, XI_METRIC)
    dstar = exterior_d(star)
    return {"d_omega_zero": d.is_zero(), "d_star_omega_zero": dstar.is_zero()}


def omega_comparison(engine: DifferentialForm, printed: DifferentialForm) -> list[dict]:
    """Per-monomial comparison of two 3-forms in the same basis."""
    rows = []
    for idx in sorted(set(engine.coeffs) | set(printed.coeffs)):
        e, p = engine[idx], printed[idx]
        rows.append({"monomial": "xi^" + "".join(map(str, idx)), "match": (e - p).is_zero(),
                     "engine": str(e), "printed": str(p)})
    return rows
