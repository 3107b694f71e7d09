"""Truncated ambient metrics ``-2 dt du + t^2 g - 2 t u P + u^2 mu2`` on the chart (t, u, x, y, z, p, q).

Two independent routes to the curvature are provided:

* a coframe ``(dt, du, eta^1..eta^5)`` (or its orthonormal rotation ``xi``) in
  which the frame metric is constant, fed to the ordinary frame pipeline;
* the Koszul formula on the coframe ``(dt, du, theta^1..theta^5)`` with the
  non-constant block metric ``diag(-2 dt du, t^2 G + h)``, optionally as a
  power series in ``u``.  This route needs no square root of the metric and is
  what the ``mu2`` solver uses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .cas import Scalar, linalg, symbol
from .forms import AMBIENT_CHART, M_CHART, Coframe, SymmetricTensor
from .frames import FrameMetric, Tensor, curvature, levi_civita, ricci_scalar, riemann
from .nurowski import ParameterSet, build_apolys, c2, metric_gF
from .sampling import random_point

Matrix = list[list[Scalar]]

T, U = Scalar.gen("t"), Scalar.gen("u")
SQRT2 = c2(1, 2)
ETA_METRIC = [
    [0, -1, 0, 0, 0, 0, 0],
    [-1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, -1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
]
XI_METRIC = [[(1 if i < 4 else -1) if i == j else 0 for j in range(7)] for i in range(7)]


def _zeros(n: int, m: int | None = None) -> Matrix:
    return [[Scalar.zero() for _ in range(m if m is not None else n)] for _ in range(n)]


def _tensor_matrix(X: Tensor | SymmetricTensor | Sequence[Sequence[object]], n: int) -> Matrix:
    if isinstance(X, (Tensor, SymmetricTensor)):
        return X.matrix()
    return [[Scalar.coerce(v) for v in row] for row in X]


def lift(coframe: Coframe, name: str | None = None) -> Coframe:
    """``(dt, du, theta^1..theta^n)`` on the ambient chart."""
    n = coframe.dim
    rows = [[Scalar.one()] + [Scalar.zero()] * (n + 1), [Scalar.zero(), Scalar.one()] + [Scalar.zero()] * n]
    for row in coframe.matrix:
        rows.append([Scalar.zero(), Scalar.zero()] + list(row))
    return Coframe(name or f"{coframe.name}+tu", AMBIENT_CHART, rows, offset=0)


@dataclass
class AmbientMetric:
    """The truncated ambient metric of ``(g, P, mu2)``; ``P``, ``mu2`` are frame components of ``g``'s coframe."""

    g: FrameMetric
    P: Matrix
    mu2: Matrix
    gauge: str = "symmetric"
    _eta: Coframe | None = field(default=None, repr=False)
    _xi: Coframe | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.g.n

    def h(self) -> Matrix:
        """Frame components of ``-2 t u P + u^2 mu2``."""
        n = self.n
        return [[-2 * T * U * self.P[i][j] + U**2 * self.mu2[i][j] for j in range(n)] for i in range(n)]

    def block(self) -> Matrix:
        """Frame components ``t^2 G + h`` of the transverse block."""
        h = self.h()
        return [[T**2 * self.g.G[i][j] + h[i][j] for j in range(self.n)] for i in range(self.n)]

    def frame_matrix(self) -> Matrix:
        """The 7x7 metric in the lifted coframe ``(dt, du, theta)``."""
        n = self.n
        m = _zeros(n + 2)
        m[0][1] = m[1][0] = Scalar.const(-1)
        B = self.block()
        for i in range(n):
            for j in range(n):
                m[i + 2][j + 2] = B[i][j]
        return m

    def lifted(self) -> Coframe:
        return lift(self.g.coframe)

    def coordinate_metric(self) -> Matrix:
        M = self.lifted().matrix
        return linalg.matmul(linalg.matmul(linalg.transpose(M), self.frame_matrix()), M)

    # eta / xi coframes ------------------------------------------------------
    def eta_matrix(self) -> Matrix:
        """``eta = S theta`` with ``S^T G S = t^2 G + h`` (rows of S)."""
        n, Ginv = self.n, self.g.Ginv
        h = self.h()
        N = linalg.matmul(Ginv, h)
        N2 = linalg.matmul(N, N)
        if all(v.is_zero() for row in N2 for v in row):
            S = [[(T if i == j else Scalar.zero()) + N[i][j] / (2 * T) for j in range(n)] for i in range(n)]
            if self.gauge == "fixed":
                S = _fixed_gauge(S, h)
            return S
        c = N[0][0]
        if all((N[i][j] - (c if i == j else 0)).is_zero() for i in range(n) for j in range(n)):
            # t^2 + c must be (t + k u)^2
            k = c.coefficient("u", 1) / (2 * T)
            if (T**2 + c - (T + k * U) ** 2).is_zero() and not k.free_generators() & {"t", "u"}:
                return [[T + k * U if i == j else Scalar.zero() for j in range(n)] for i in range(n)]
        raise NotImplementedError("no polynomial square root of the ambient block")

    def eta(self) -> Coframe:
        if self._eta is None:
            S = self.eta_matrix()
            n = self.n
            theta = self.g.coframe.matrix
            rows = [[Scalar.one()] + [Scalar.zero()] * (n + 1), [Scalar.zero(), Scalar.one()] + [Scalar.zero()] * n]
            for a in range(n):
                coord = [linalg.matmul([S[a]], theta)[0][c] for c in range(n)]
                rows.append([Scalar.zero(), Scalar.zero()] + coord)
            self._eta = Coframe("eta", AMBIENT_CHART, rows, offset=0, symbol="eta")
        return self._eta

    def eta_metric(self) -> FrameMetric:
        G = _zeros(self.n + 2)
        G[0][1] = G[1][0] = Scalar.const(-1)
        for i in range(self.n):
            for j in range(self.n):
                G[i + 2][j + 2] = self.g.G[i][j]
        return FrameMetric(self.eta(), G, name="g~(eta)")

    def xi(self) -> Coframe:
        """The orthonormal coframe (requires ``g`` to be in the ``g_F`` normal form)."""
        if self._xi is None:
            eta = self.eta().matrix
            dt, du, e1, e2, e3, e4, e5 = eta
            r = 1 / SQRT2

            def comb(a, b, s):
                return [(x + s * y) * r for x, y in zip(a, b)]

            rows = [comb(dt, du, -1), comb(e1, e5, 1), comb(e2, e4, -1), list(e3),
                    comb(e2, e4, 1), comb(e1, e5, -1), comb(dt, du, 1)]
            self._xi = Coframe("xi", AMBIENT_CHART, rows, offset=0, symbol="xi")
        return self._xi

    def xi_metric(self) -> FrameMetric:
        return FrameMetric(self.xi(), XI_METRIC, name="g~(xi)")

    # checks ------------------------------------------------------------------
    def restriction(self) -> Matrix:
        """Coordinate components of the tangential block at ``t = 1, u = 0``."""
        full = self.coordinate_metric()
        return [[full[i][j].subs({"t": 1, "u": 0}) for j in range(2, self.n + 2)] for i in range(2, self.n + 2)]

    def homogeneity_defects(self) -> list[str]:
        """Every coordinate coefficient must scale by ``lambda^2`` under ``(t, u) -> lambda (t, u)``."""
        lam = symbol("lambda_h")
        full = self.coordinate_metric()
        out = []
        for i, row in enumerate(full):
            for j, v in enumerate(row):
                w = v.subs({"t": lam * T, "u": lam * U})
                if i < 2 and j < 2:
                    target = v
                elif i < 2 or j < 2:
                    target = v * lam
                else:
                    target = v * lam**2
                if not (w - target).is_zero():
                    out.append(f"({i},{j})")
        return out


def _fixed_gauge(S: Matrix, h: Matrix) -> Matrix:
    """Rotate eta within the null planes so that ``eta^5 - t theta^5`` is proportional to ``theta^1 + 2^(1/3) p theta^4``."""
    p = Scalar.gen("p")
    S = [list(r) for r in S]
    alpha = h[0][0] / (2 * T)
    gamma = c2(1) * p * alpha
    S[4][0], S[4][3] = alpha, gamma
    S[1][0], S[1][3] = gamma - h[0][3] / T, -h[3][3] / (2 * T)
    return S


def truncated_ambient(g: FrameMetric, P, mu2, *, gauge: str = "symmetric") -> AmbientMetric:
    n = g.n
    return AmbientMetric(g, _tensor_matrix(P, n), _tensor_matrix(mu2, n), gauge)


# ---------------------------------------------------------------------------
# Koszul route (non-constant frame metric)

@dataclass
class KoszulConnection:
    """``omega[d][a][b]``: ``nabla_{e_a} e_b = omega^d_ab e_d`` for the lifted coframe."""

    coframe: Coframe
    metric: Matrix
    inverse: Matrix
    omega: list[list[list[Scalar]]]
    c: list[list[list[Scalar]]]
    order: int | None


def _trunc(s: Scalar, order: int | None) -> Scalar:
    return s if order is None or not s else s.truncate("u", order)


def series_inverse(block: Matrix, G: Matrix, order: int) -> Matrix:
    """``(t^2 G + h)^-1`` as a polynomial in ``u`` up to ``u^order``; ``h`` must be ``O(u)``."""
    n = len(G)
    Ginv = linalg.inverse(G)
    h = [[block[i][j] - T**2 * G[i][j] for j in range(n)] for i in range(n)]
    X = [[-v / T**2 for v in row] for row in linalg.matmul(Ginv, h)]
    acc = [[v / T**2 for v in row] for row in Ginv]
    total = [list(r) for r in acc]
    for _ in range(order):
        acc = [[_trunc(v, order) for v in row] for row in linalg.matmul(X, acc)]
        total = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(total, acc)]
    return total


def koszul_connection(am: AmbientMetric, *, order: int | None = None) -> KoszulConnection:
    """Levi-Civita connection of ``am`` in ``(dt, du, theta)``; with ``order`` all series are cut at ``u^order``."""
    cf = am.lifted()
    g = am.frame_matrix()
    n = len(g)
    if order is None:
        ginv = linalg.inverse(g)
    else:
        binv = series_inverse(am.block(), am.g.G, order)
        ginv = _zeros(n)
        ginv[0][1] = ginv[1][0] = Scalar.const(-1)
        for i in range(am.n):
            for j in range(am.n):
                ginv[i + 2][j + 2] = binv[i][j]
    from .frames import structure_functions

    c = structure_functions(cf)
    grad = [[cf.gradient(g[i][j]) if g[i][j] and not g[i][j].is_constant() else None for j in range(n)]
            for i in range(n)]

    def E(a: int, i: int, j: int) -> Scalar:
        gr = grad[i][j]
        return gr[a] if gr is not None else Scalar.zero()

    # [e_a, e_b] = -c^m_ab e_m
    def cg(m_lo: int, a: int, b: int) -> Scalar:
        acc = Scalar.zero()
        for m in range(n):
            if c[m][a][b] and g[m][m_lo]:
                acc = acc + c[m][a][b] * g[m][m_lo]
        return acc

    K = [[[Scalar.zero()] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for cc in range(n):
                v = E(a, b, cc) + E(b, a, cc) - E(cc, a, b) - cg(cc, a, b) + cg(b, a, cc) + cg(a, b, cc)
                K[a][b][cc] = v / 2
    omega = [[[_trunc(sum((ginv[d][cc] * K[a][b][cc] for cc in range(n) if ginv[d][cc] and K[a][b][cc]),
                          Scalar.zero()), order)
               for b in range(n)] for a in range(n)] for d in range(n)]
    return KoszulConnection(cf, g, ginv, omega, c, order)


def koszul_ricci(kc: KoszulConnection) -> Matrix:
    """``Ric_bc = R^a_{c a b}`` with ``R^f_{c ab} = e_a w^f_bc - e_b w^f_ac + w^d_bc w^f_ad - w^d_ac w^f_bd + c^m_ab w^f_mc``."""
    cf, w, c, order = kc.coframe, kc.omega, kc.c, kc.order
    n = cf.dim
    grads: dict[tuple[int, int, int], list[Scalar]] = {}

    def Ew(a: int, f: int, b: int, cc: int) -> Scalar:
        key = (f, b, cc)
        if key not in grads:
            v = w[f][b][cc]
            grads[key] = cf.gradient(v) if v else [Scalar.zero()] * n
        return grads[key][a]

    ric = _zeros(n)
    for b in range(n):
        for cc in range(b, n):
            acc = Scalar.zero()
            for a in range(n):
                # R^a_{c a b}
                acc = acc + Ew(a, a, b, cc) - Ew(b, a, a, cc)
                for d in range(n):
                    if w[d][b][cc] and w[a][a][d]:
                        acc = acc + w[d][b][cc] * w[a][a][d]
                    if w[d][a][cc] and w[a][b][d]:
                        acc = acc - w[d][a][cc] * w[a][b][d]
                for m in range(n):
                    if c[m][a][b] and w[a][m][cc]:
                        acc = acc + c[m][a][b] * w[a][m][cc]
            acc = _trunc(acc, order)
            ric[b][cc] = ric[cc][b] = acc
    return ric


# ---------------------------------------------------------------------------
# the mu2 solver

@dataclass
class Mu2Solution:
    mu2: Matrix
    equations: int
    kernel_dim: int
    verified: bool
    residual_orders: tuple[int, ...] = (0, 1)

    def tensor(self, basis: Coframe) -> SymmetricTensor:
        return SymmetricTensor.from_matrix(basis.chart, self.mu2, basis)


def _low_order_ricci(g: FrameMetric, P: Matrix, mu2: Matrix) -> list[Scalar]:
    """The Ricci coefficients that involve at most ``mu2`` (series route, cut at ``u^3``).

    Tangential components through ``u^1``; components with a ``t`` or ``u`` slot
    only at ``u^0``, since their ``u^1`` part already sees ``mu3``.
    """
    ric = koszul_ricci(koszul_connection(truncated_ambient(g, P, mu2), order=3))
    n = len(ric)
    return [ric[a][b].coefficient("u", k) for a in range(n) for b in range(a, n)
            for k in ((0, 1) if a >= 2 else (0,))]


def mu2_solver(g: FrameMetric, P) -> Mu2Solution:
    """The ``mu2`` solving the order-``u^2`` ambient Ricci equations.

    ``mu2`` enters with ``u^2``, so these orders are affine in its components;
    the affine map is sampled on the unit basis, solved exactly, and the
    solution is re-substituted as a check.
    """
    n = g.n
    if n % 2 == 0:
        raise ValueError("the ambient expansion is only unobstructed in odd dimension")
    Pm = _tensor_matrix(P, n)
    base = _low_order_ricci(g, Pm, _zeros(n))
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    cols = []
    for i, j in slots:
        e = _zeros(n)
        e[i][j] = e[j][i] = Scalar.one()
        cols.append([v - w for v, w in zip(_low_order_ricci(g, Pm, e), base)])
    rows, rhs = [], []
    for r in range(len(base)):
        row = [col[r] for col in cols]
        if base[r] or any(row):
            rows.append(row)
            rhs.append(-base[r])
    sol = linalg.solve_affine(rows, rhs)
    if sol is None:
        raise ArithmeticError("ambient Ricci system is inconsistent")
    part, kernel = sol
    out = _zeros(n)
    for (i, j), v in zip(slots, part):
        out[i][j] = out[j][i] = v
    verified = all(v.is_zero() for v in _low_order_ricci(g, Pm, out))
    return Mu2Solution(out, len(rows), len(kernel), verified)


# ---------------------------------------------------------------------------
# the family g_F

def gF_ambient(params: ParameterSet | None = None, *, mu2: Matrix | None = None,
               convention: str = "resolved") -> AmbientMetric:
    """The truncated ambient metric of ``g_F`` with ``mu2 = -B`` in its closed form, in the fixed gauge."""
    params = params or ParameterSet.symbolic()
    fm = metric_gF(params, convention)
    Pm = gF_schouten_closed(params, convention)
    if mu2 is None:
        mu2 = gF_mu2_closed(params, convention)
    return AmbientMetric(fm, Pm, mu2, gauge="fixed")


def gF_schouten_closed(params: ParameterSet, convention: str = "resolved") -> Matrix:
    """``P = -E^4 (A4 (th1)^2 + 2 A3 th1 th4 + A2 (th4)^2)`` in the theta frame."""
    A = build_apolys(params, convention)
    E4 = params.exp_E() ** 4
    m = _zeros(5)
    m[0][0] = -E4 * A.A4
    m[0][3] = m[3][0] = -E4 * A.A3
    m[3][3] = -E4 * A.A2
    return m


def gF_mu2_closed(params: ParameterSet, convention: str = "resolved") -> Matrix:
    """``mu2 = (1/6) E^8 (A6 (th1)^2 + 2 A5 th1 th4 + A4 (th4)^2)`` in the theta frame."""
    A = build_apolys(params, convention)
    E8 = params.exp_E() ** 8
    m = _zeros(5)
    m[0][0] = E8 * A.A6 / 6
    m[0][3] = m[3][0] = E8 * A.A5 / 6
    m[3][3] = E8 * A.A4 / 6
    return m


def printed_eta(params: ParameterSet | None = None, convention: str = "resolved", *,
                corrected: bool = True) -> Matrix:
    """The displayed eta coframe as a 5x5 matrix over theta.

    With ``corrected=False`` it is transcribed literally; ``corrected=True``
    restores the factor ``u`` in the ``theta^4`` coefficient of ``eta^2`` and
    the factor ``t`` next to ``12 A_4`` in ``eta^5``.
    """
    params = params or ParameterSet.symbolic()
    A = build_apolys(params, convention)
    E4 = params.exp_E() ** 4
    p = Scalar.gen("p")
    S = [[T if i == j else Scalar.zero() for j in range(5)] for i in range(5)]
    uo = U / T
    k = E4 * uo / 12
    S[1][3] = -k * (12 * A.A2 * T + A.A4 * E4 * (U if corrected else 1))
    S[1][0] = k * (-24 * A.A3 * T + 12 * c2(1) * A.A4 * p * T - 2 * A.A5 * E4 * U + c2(1) * A.A6 * E4 * p * U)
    a5 = k * (12 * A.A4 * (T if corrected else 1) + A.A6 * E4 * U)
    S[4][0] = a5
    S[4][3] = a5 * c2(1) * p
    return S


def eta_xi_coframes(params: ParameterSet | None = None, convention: str = "resolved") -> dict:
    """Build eta and xi for ``g~_F`` and check them against the displayed coframe and metric."""
    params = params or ParameterSet.symbolic()
    am = gF_ambient(params, convention=convention)
    S = am.eta_matrix()
    report = {}
    for corrected in (False, True):
        pe = printed_eta(params, convention, corrected=corrected)
        diffs = [f"eta^{i + 1}" for i in range(5) if any((S[i][j] - pe[i][j]) for j in range(5))]
        report["printed" if not corrected else "corrected"] = diffs
    eta_fm = am.eta_metric()
    recon = eta_fm.coordinate_metric()
    target = am.coordinate_metric()
    report["reconstruction"] = all((recon[i][j] - target[i][j]).is_zero() for i in range(7) for j in range(7))
    xi_fm = am.xi_metric()
    xrec = xi_fm.coordinate_metric()
    report["xi_reconstruction"] = all((xrec[i][j] - target[i][j]).is_zero() for i in range(7) for j in range(7))
    report["xi_signature"] = xi_fm.signature
    return {"ambient": am, "eta": am.eta(), "xi": am.xi(), "report": report}


# ---------------------------------------------------------------------------
# verification

@dataclass
class RicciVerdict:
    mode: str
    passed: bool
    nonzero: list[str]
    points: int = 0
    seed: int | None = None

    def to_json(self) -> dict:
        return {"mode": self.mode, "passed": self.passed, "nonzero_components": self.nonzero,
                "points": self.points, "seed": self.seed}


def ambient_ricci(am: AmbientMetric, frame: str = "xi") -> Tensor:
    fm = am.xi_metric() if frame == "xi" else am.eta_metric()
    conn = levi_civita(fm)
    R = riemann(fm, conn)
    ric, _ = ricci_scalar(R, fm)
    return ric


def verify_ricci_flat(am: AmbientMetric, mode: str = "symbolic", *, n: int = 50, seed: int = 7,
                      frame: str = "xi") -> RicciVerdict:
    """Ricci of the ambient metric: symbolically, or at ``n`` seeded exact rational points."""
    if mode == "symbolic":
        ric = ambient_ricci(am, frame)
        bad = [f"Ric_{i}{j}" for (i, j), v in sorted(ric.comps.items()) if i <= j and not v.is_zero()]
        return RicciVerdict("symbolic", not bad, bad)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    ric = ambient_ricci(am, frame)
    names = set().union(*(v.free_generators() for v in ric.comps.values())) if ric.comps else set()
    bad = []
    for k in range(n):
        pt = random_point(rng, names)
        for (i, j), v in sorted(ric.comps.items()):
            if i <= j and v.eval(pt) != 0:
                bad.append(f"point {k}: Ric_{i}{j}")
    return RicciVerdict("sampled", not bad, bad, n, seed)


def verify_ricci_koszul(am: AmbientMetric) -> list[str]:
    """Exact Ricci through the Koszul route; returns the nonzero components."""
    ric = koszul_ricci(koszul_connection(am))
    return [f"Ric_{i}{j}" for i in range(len(ric)) for j in range(i, len(ric)) if not ric[i][j].is_zero()]


# ---------------------------------------------------------------------------
# the connection along u = 0

def nabamb_check(am: AmbientMetric) -> dict[str, bool]:
    """The three identities for the ambient connection along ``u = 0``.

    Frame indices: 0 = d/dt, 1 = d/du, 2.. = the frame of ``g``.
    """
    kc = koszul_connection(am)
    w = kc.omega
    g = am.g
    n = g.n
    conn = levi_civita(g)
    Pm = am.P
    Pup = linalg.matmul(g.Ginv, Pm)  # P^d_a
    at0 = lambda s: s.subs({"u": 0})
    ok_u = ok_t = ok_xy = True
    for a in range(n):
        for d in range(n + 2):
            # nabla_X d/du = -(1/t) P(X)^sharp
            want = -Pup[d - 2][a] / T if d >= 2 else Scalar.zero()
            if not (at0(w[d][a + 2][1]) - want).is_zero():
                ok_u = False
            # nabla_X d/dt = X / t
            want = (1 / T) if d == a + 2 else Scalar.zero()
            if not (at0(w[d][a + 2][0]) - want).is_zero():
                ok_t = False
        for b in range(n):
            for d in range(n):
                if not (at0(w[d + 2][a + 2][b + 2]) - conn.up[d][b][a]).is_zero():
                    ok_xy = False
            if not (at0(w[1][a + 2][b + 2]) - T * g.G[a][b]).is_zero():
                ok_xy = False
            if not (at0(w[0][a + 2][b + 2]) + T * Pm[a][b]).is_zero():
                ok_xy = False
    return {"nabla_X d_u": ok_u, "nabla_X Y": ok_xy, "nabla_X d_t": ok_t}


# ---------------------------------------------------------------------------
# toy metrics

def flat_metric(chart_coords: Sequence[str] = ("x", "y", "z", "p", "q")) -> FrameMetric:
    """The flat metric ``dx^2 + dy^2 + dz^2 - dp^2 - dq^2`` on the M-chart."""
    rows = [[Scalar.one() if i == j else Scalar.zero() for j in range(5)] for i in range(5)]
    cf = Coframe("dxyzpq", M_CHART, rows, offset=1)
    G = [[(1 if i < 3 else -1) if i == j else 0 for j in range(5)] for i in range(5)]
    return FrameMetric(cf, G, name="flat")


def hyperbolic_metric() -> FrameMetric:
    """``(dx^2 + dy^2 + dz^2 + dp^2 + dq^2)/q^2``: Einstein with ``P = -g/2``."""
    q = Scalar.gen("q")
    rows = [[1 / q if i == j else Scalar.zero() for j in range(5)] for i in range(5)]
    cf = Coframe("hyp", M_CHART, rows, offset=1)
    return FrameMetric(cf, [[1 if i == j else 0 for j in range(5)] for i in range(5)], name="hyperbolic")


def brinkmann_check(g: FrameMetric | None = None) -> dict:
    """``-2 du dt + t^2 g`` over a Ricci-flat ``g`` is Ricci flat, with ``d/du`` parallel and null."""
    g = g or flat_metric()
    zero = _zeros(g.n)
    am = truncated_ambient(g, zero, zero)
    bad = verify_ricci_koszul(am)
    kc = koszul_connection(am)
    parallel = all(not kc.omega[d][a][1] for d in range(g.n + 2) for a in range(g.n + 2))
    null = am.frame_matrix()[1][1].is_zero()
    return {"ricci_flat": not bad, "nonzero": bad, "d_u_parallel": parallel, "d_u_null": null}


def einstein_toy(g: FrameMetric | None = None) -> dict:
    """Einstein toy: solve for mu2, compare with ``Lambda^2 g``, and realise the cone form."""
    g = g or hyperbolic_metric()
    cp = curvature(g, with_cotton=False)
    Pm = cp.schouten.matrix()
    lam = Pm[0][0] / g.G[0][0]
    einstein = all((Pm[i][j] - lam * g.G[i][j]).is_zero() for i in range(g.n) for j in range(g.n))
    sol = mu2_solver(g, Pm)
    mu2_ok = all((sol.mu2[i][j] - lam**2 * g.G[i][j]).is_zero() for i in range(g.n) for j in range(g.n))
    am = truncated_ambient(g, Pm, sol.mu2)
    ricci = verify_ricci_koszul(am)
    cone = cone_factorization(am, lam)
    return {"Lambda": lam, "einstein": einstein, "mu2_is_Lambda2_g": mu2_ok, "kernel_dim": sol.kernel_dim,
            "ricci_flat": not ricci, **cone}


def cone_factorization(am: AmbientMetric, lam: Scalar) -> dict:
    """Find ``c`` with ``r = t - c u``, ``s = t + Lambda u`` turning the ambient metric into the cone form.

    The block must be ``(t - Lambda u)^2 g``; the ``(t, u)`` part
    ``(1/2Lambda)(dr^2 - ds^2)`` equals ``-2 dt du`` exactly when ``c = Lambda``.
    """
    c = symbol("c_cone")
    # (1/2L)((dt - c du)^2 - (dt + L du)^2) = (1/2L)(-2(c + L) dt du + (c^2 - L^2) du^2)
    dtdu = -(c + lam) / lam  # coefficient of dt du (symmetric product counted twice)
    dudu = (c**2 - lam**2) / (2 * lam)
    slope, const = dtdu.pdiff("c_cone"), dtdu.subs({"c_cone": 0})
    cval = (-2 - const) / slope
    ok_tu = (dtdu.subs({"c_cone": cval}) + 2).is_zero() and dudu.subs({"c_cone": cval}).is_zero()
    r = T - cval * U
    block_ok = all((am.block()[i][j] - r**2 * am.g.G[i][j]).is_zero() for i in range(am.n) for j in range(am.n))
    return {"c": cval, "cone_dt_du": ok_tu, "cone_block": block_ok}


__all__ = [
    "AmbientMetric", "KoszulConnection", "Mu2Solution", "RicciVerdict", "ETA_METRIC", "XI_METRIC",
    "brinkmann_check", "cone_factorization", "einstein_toy", "eta_xi_coframes", "flat_metric",
    "gF_ambient", "gF_mu2_closed", "gF_schouten_closed", "hyperbolic_metric", "koszul_connection",
    "koszul_ricci", "lift", "mu2_solver", "nabamb_check", "printed_eta", "series_inverse",
    "truncated_ambient", "verify_ricci_flat", "verify_ricci_koszul",
]
