"""Cartan structure equations and the curvature pipeline for constant frame metrics.

Conventions (all indices are frame indices, lowered with the constant
frame metric ``G``):

* ``d theta^i = 1/2 c^i_jk theta^j ^ theta^k``;
* ``d theta^i + Gamma^i_j ^ theta^j = 0`` with ``Gamma^i_j = Gamma^i_jk theta^k``;
* ``Omega^i_j = d Gamma^i_j + Gamma^i_k ^ Gamma^k_j = 1/2 R^i_jkl theta^k ^ theta^l``;
* ``Ric_jl = R^i_jil``, ``P = (Ric - s g / (2(n-1))) / (n-2)``;
* ``W = R - P (Kulkarni-Nomizu) g``;
* covariant derivatives append the differentiating index last:
  ``(nabla T)_{a..b m} = E_m(T_{a..b}) - Gamma^n_{am} T_{n..b} - ...``.

The Cotton and Bach sign choices are recorded in :data:`CALIBRATION`.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .cas import Scalar, to_json
from .cas import linalg
from .forms import Chart, Coframe, DifferentialForm, SymmetricTensor, change_basis

# Sign conventions.  The Cotton sign reproduces the tabulated Cotton forms of
# g_F; the two Bach signs make B = P o P - mu2 where mu2 is the independent
# ambient solution, checked on a non-Einstein metric with P^kl W_kijl != 0.
CALIBRATION = {
    "connection": "d theta^i + Gamma^i_j ^ theta^j = 0, Gamma_ij = -Gamma_ji",
    "riemann": "Omega^i_j = d Gamma^i_j + Gamma^i_k ^ Gamma^k_j = 1/2 R^i_jkl theta^k ^ theta^l",
    "ricci": "Ric_jl = R^i_jil",
    "schouten": "P = (Ric - s g/(2(n-1)))/(n-2)",
    "weyl": "W_ijkl = R_ijkl - (g_ik P_jl - g_il P_jk + g_jl P_ik - g_jk P_il)",
    "cotton": "C_ijk = nabla_j P_ki - nabla_k P_ji",
    "cotton_sign": 1,
    "bach": "B_ij = -(nabla^k C_ijk + P^kl W_kijl)",
    "bach_weyl_sign": 1,
    "bach_sign": -1,
    "weyl_contraction": "C(T)_jkl = C_jkl + T^i W_ijkl",
}


def calibration_fingerprint() -> str:
    blob = json.dumps(CALIBRATION, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class Tensor:
    """Sparse covariant tensor of fixed rank over ``n`` frame indices."""

    __slots__ = ("rank", "n", "comps")

    def __init__(self, rank: int, n: int, comps: Mapping[tuple[int, ...], Scalar] | None = None):
        self.rank = rank
        self.n = n
        self.comps = {k: v for k, v in (comps or {}).items() if v}

    def __getitem__(self, idx: Iterable[int]) -> Scalar:
        return self.comps.get(tuple(idx), Scalar.zero())

    def is_zero(self) -> bool:
        return not self.comps

    def map(self, fn: Callable[[Scalar], Scalar]) -> "Tensor":
        return Tensor(self.rank, self.n, {k: fn(v) for k, v in self.comps.items()})

    def eval(self, point: Mapping[str, object]) -> "Tensor":
        return self.map(lambda s: Scalar.const(s.eval_constant(point)))

    def __sub__(self, other: "Tensor") -> "Tensor":
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] - v if k in out else -v
        return Tensor(self.rank, self.n, out)

    def __add__(self, other: "Tensor") -> "Tensor":
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return Tensor(self.rank, self.n, out)

    def matrix(self) -> list[list[Scalar]]:
        if self.rank != 2:
            raise ValueError("matrix() needs a rank-2 tensor")
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    def to_json(self, offset: int = 0) -> list[dict]:
        return [{"idx": [i + offset for i in k], "coeff": to_json(v)} for k, v in sorted(self.comps.items())]


class FrameMetric:
    """Metric ``G_ij theta^i theta^j`` with constant ``G`` in a coframe."""

    def __init__(self, coframe: Coframe, G: Sequence[Sequence[object]], *, name: str = "g", params=None,
                 signature: tuple[int, int] | None = None):
        self.coframe = coframe
        self.G = [[Scalar.coerce(v) for v in row] for row in G]
        if any(not v.is_constant() for row in self.G for v in row):
            raise ValueError("frame metric components must be constant")
        for i in range(len(self.G)):
            for j in range(len(self.G)):
                if self.G[i][j] != self.G[j][i]:
                    raise ValueError("frame metric must be symmetric")
        self.Ginv = linalg.inverse(self.G)
        self.name = name
        self.params = params
        self.signature = signature or _signature(self.G)

    @property
    def n(self) -> int:
        return self.coframe.dim

    @property
    def chart(self) -> Chart:
        return self.coframe.chart

    def coordinate_metric(self) -> list[list[Scalar]]:
        M = self.coframe.matrix
        return linalg.matmul(linalg.matmul(linalg.transpose(M), self.G), M)

    def symmetric(self) -> SymmetricTensor:
        return SymmetricTensor.from_matrix(self.chart, self.G, self.coframe)

    def raise_index(self, v: Sequence[Scalar]) -> list[Scalar]:
        return [_dot(self.Ginv[i], v) for i in range(self.n)]

    def lower_index(self, v: Sequence[Scalar]) -> list[Scalar]:
        return [_dot(self.G[i], v) for i in range(self.n)]

    def __repr__(self) -> str:
        return f"FrameMetric({self.name!r}, {self.coframe!r})"


def _signature(G: list[list[Scalar]]) -> tuple[int, int]:
    """(positive, negative) counts via an exact congruence diagonalisation."""
    n = len(G)
    m = [[Scalar.coerce(v).constant_value() for v in row] for row in G]
    pos = neg = 0
    m = [list(r) for r in m]
    for k in range(n):
        if m[k][k].is_zero():
            j = next((j for j in range(k + 1, n) if not m[k][j].is_zero()), None)
            if j is None:
                continue
            # replace e_k by e_k + e_j (or e_k - e_j) to create a nonzero diagonal entry
            for sgn in (1, -1):
                d = m[k][k] + m[j][j] + m[k][j] * (2 * sgn)
                if not d.is_zero():
                    break
            for r in range(n):
                m[r][k] = m[r][k] + m[r][j] * sgn
            for c in range(n):
                m[k][c] = m[k][c] + m[j][c] * sgn
        piv = m[k][k]
        if piv.is_zero():
            continue
        if piv.sign() > 0:
            pos += 1
        else:
            neg += 1
        inv = piv.inverse()
        for r in range(k + 1, n):
            f = m[r][k] * inv
            if f.is_zero():
                continue
            for c in range(n):
                m[r][c] = m[r][c] - f * m[k][c]
            for c in range(n):
                m[c][r] = m[c][r] - f * m[c][k]
    return pos, neg


def _dot(a: Sequence[Scalar], b: Sequence[Scalar]) -> Scalar:
    acc = Scalar.zero()
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


@dataclass
class ConnectionForms:
    """``Gamma^i_jk`` (up) and ``Gamma_ijk`` (down) with the structure functions ``c^i_jk``."""

    fm: FrameMetric
    up: list[list[list[Scalar]]]
    down: list[list[list[Scalar]]]
    c: list[list[list[Scalar]]]

    def form(self, i: int, j: int) -> DifferentialForm:
        """The 1-form ``Gamma_ij`` in the coframe basis."""
        return DifferentialForm(1, self.fm.chart, {(k,): v for k, v in enumerate(self.down[i][j]) if v},
                                self.fm.coframe)

    def form_up(self, i: int, j: int) -> DifferentialForm:
        return DifferentialForm(1, self.fm.chart, {(k,): v for k, v in enumerate(self.up[i][j]) if v},
                                self.fm.coframe)

    def raised(self) -> list[list[list[Scalar]]]:
        """``Gamma^{ij}_k = Gamma^i_{mk} g^{mj}``."""
        n = self.fm.n
        Ginv = self.fm.Ginv
        return [[[_dot([self.up[i][m][k] for m in range(n)], [Ginv[m][j] for m in range(n)])
                  for k in range(n)] for j in range(n)] for i in range(n)]


def structure_functions(coframe: Coframe) -> list[list[list[Scalar]]]:
    n = coframe.dim
    c = [[[Scalar.zero()] * n for _ in range(n)] for _ in range(n)]
    for i, form in enumerate(coframe.structure):
        for (j, k), v in form.coeffs.items():
            c[i][j][k] = v
            c[i][k][j] = -v
    return c


def levi_civita(fm: FrameMetric, *, validate: bool = True) -> ConnectionForms:
    n = fm.n
    c_up = structure_functions(fm.coframe)
    G = fm.G
    # lower the first index of the structure functions
    c_dn = [[[_dot([G[i][a] for a in range(n)], [c_up[a][j][k] for a in range(n)]) for k in range(n)]
             for j in range(n)] for i in range(n)]
    down = [[[(c_dn[i][j][k] + c_dn[j][k][i] - c_dn[k][i][j]) / 2 for k in range(n)] for j in range(n)]
            for i in range(n)]
    Ginv = fm.Ginv
    up = [[[_dot([Ginv[i][a] for a in range(n)], [down[a][j][k] for a in range(n)]) for k in range(n)]
           for j in range(n)] for i in range(n)]
    conn = ConnectionForms(fm, up, down, c_up)
    if validate:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if not (down[i][j][k] + down[j][i][k]).is_zero():
                        raise AssertionError("connection is not metric")
                    if not (up[i][j][k] - up[i][k][j] - c_up[i][j][k]).is_zero():
                        raise AssertionError("connection has torsion")
    return conn


def riemann(fm: FrameMetric, conn: ConnectionForms) -> Tensor:
    """Lowered ``R_ijkl``; only i<j, k<l pairs are computed, the rest by symmetry."""
    n = fm.n
    cf = fm.coframe
    D, U, C = conn.down, conn.up, conn.c
    deriv_cache: dict[tuple[int, int, int, int], Scalar] = {}

    def E(m: int, i: int, j: int, l: int) -> Scalar:
        key = (m, i, j, l)
        v = deriv_cache.get(key)
        if v is None:
            v = cf.frame_derivative(D[i][j][l], m) if D[i][j][l] else Scalar.zero()
            deriv_cache[key] = v
        return v

    comps: dict[tuple[int, int, int, int], Scalar] = {}
    pairs = list(itertools.combinations(range(n), 2))
    for (i, j) in pairs:
        for (k, l) in pairs:
            acc = E(k, i, j, l) - E(l, i, j, k)
            for m in range(n):
                if D[i][j][m] and C[m][k][l]:
                    acc = acc + D[i][j][m] * C[m][k][l]
                if D[i][m][k] and U[m][j][l]:
                    acc = acc + D[i][m][k] * U[m][j][l]
                if D[i][m][l] and U[m][j][k]:
                    acc = acc - D[i][m][l] * U[m][j][k]
            if acc:
                comps[(i, j, k, l)] = acc
                comps[(j, i, k, l)] = -acc
                comps[(i, j, l, k)] = -acc
                comps[(j, i, l, k)] = acc
    return Tensor(4, n, comps)


def ricci_scalar(R: Tensor, fm: FrameMetric) -> tuple[Tensor, Scalar]:
    n = fm.n
    Ginv = fm.Ginv
    ric: dict[tuple[int, int], Scalar] = {}
    for j in range(n):
        for l in range(j, n):
            acc = Scalar.zero()
            for i in range(n):
                for k in range(n):
                    if Ginv[i][k]:
                        r = R[i, j, k, l]
                        if r:
                            acc = acc + Ginv[i][k] * r
            if acc:
                ric[(j, l)] = acc
                ric[(l, j)] = acc
    s = Scalar.zero()
    for j in range(n):
        for l in range(n):
            if Ginv[j][l] and (j, l) in ric:
                s = s + Ginv[j][l] * ric[(j, l)]
    return Tensor(2, n, ric), s


def schouten(ric: Tensor, s: Scalar, fm: FrameMetric) -> Tensor:
    n = fm.n
    if n < 3:
        raise ValueError("Schouten tensor needs n >= 3")
    out = {}
    for i in range(n):
        for j in range(n):
            v = ric[i, j] - s * fm.G[i][j] / (2 * (n - 1)) if fm.G[i][j] else ric[i, j]
            v = v / (n - 2)
            if v:
                out[(i, j)] = v
    return Tensor(2, n, out)


def kulkarni_nomizu_Pg(P: Tensor, fm: FrameMetric) -> Tensor:
    n = fm.n
    G = fm.G
    out = {}
    for i, j, k, l in itertools.product(range(n), repeat=4):
        v = Scalar.zero()
        if G[i][k]:
            v = v + G[i][k] * P[j, l]
        if G[i][l]:
            v = v - G[i][l] * P[j, k]
        if G[j][l]:
            v = v + G[j][l] * P[i, k]
        if G[j][k]:
            v = v - G[j][k] * P[i, l]
        if v:
            out[(i, j, k, l)] = v
    return Tensor(4, n, out)


def weyl(R: Tensor, P: Tensor, fm: FrameMetric) -> Tensor:
    if fm.n < 4:
        raise ValueError("Weyl tensor needs n >= 4")
    return R - kulkarni_nomizu_Pg(P, fm)


def cov_deriv(T: Tensor, conn: ConnectionForms) -> Tensor:
    """Frame covariant derivative; the new index is appended last."""
    fm = conn.fm
    n = fm.n
    U = conn.up
    cf = fm.coframe
    out: dict[tuple[int, ...], Scalar] = {}
    # derivative part
    for idx, v in T.comps.items():
        grad = cf.gradient(v)
        for m in range(n):
            if grad[m]:
                key = idx + (m,)
                out[key] = out[key] + grad[m] if key in out else grad[m]
    # connection part: - sum_s Gamma^p_{a_s m} T_{..p..}
    for idx, v in T.comps.items():
        for s, p in enumerate(idx):
            for a in range(n):
                for m in range(n):
                    g = U[p][a][m]
                    if g:
                        key = idx[:s] + (a,) + idx[s + 1:] + (m,)
                        term = g * v
                        out[key] = out[key] - term if key in out else -term
    return Tensor(T.rank + 1, n, out)


def metric_tensor(fm: FrameMetric) -> Tensor:
    n = fm.n
    return Tensor(2, n, {(i, j): fm.G[i][j] for i in range(n) for j in range(n) if fm.G[i][j]})


def cotton(P: Tensor, conn: ConnectionForms, fm: FrameMetric, dP: Tensor | None = None) -> Tensor:
    n = fm.n
    dP = dP if dP is not None else cov_deriv(P, conn)
    sign = CALIBRATION["cotton_sign"]
    out = {}
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                v = dP[k, i, j] - dP[j, i, k]
                if v:
                    if sign < 0:
                        v = -v
                    out[(i, j, k)] = v
                    out[(i, k, j)] = -v
    return Tensor(3, n, out)


def bach(P: Tensor, W: Tensor, C: Tensor, conn: ConnectionForms, fm: FrameMetric) -> Tensor:
    """``B_ij = nabla^k C_ijk + eps P^kl W_kijl`` with calibrated signs."""
    n = fm.n
    Ginv = fm.Ginv
    dC = cov_deriv(C, conn)
    Pup = linalg.matmul(linalg.matmul(Ginv, P.matrix()), Ginv)
    eps = CALIBRATION["bach_weyl_sign"]
    overall = CALIBRATION["bach_sign"]
    out = {}
    for i in range(n):
        for j in range(i, n):
            acc = Scalar.zero()
            for k in range(n):
                for m in range(n):
                    if Ginv[k][m]:
                        v = dC[i, j, k, m]
                        if v:
                            acc = acc + Ginv[k][m] * v
            for k in range(n):
                for l in range(n):
                    if Pup[k][l]:
                        w = W[k, i, j, l]
                        if w:
                            acc = acc + Pup[k][l] * w * eps
            if overall < 0:
                acc = -acc
            if acc:
                out[(i, j)] = acc
                out[(j, i)] = acc
    return Tensor(2, n, out)


def compose_PP(P: Tensor, fm: FrameMetric) -> Tensor:
    """``P_ik g^kl P_lj``."""
    m = linalg.matmul(linalg.matmul(P.matrix(), fm.Ginv), P.matrix())
    n = fm.n
    return Tensor(2, n, {(i, j): m[i][j] for i in range(n) for j in range(n) if m[i][j]})


@dataclass
class CurvaturePack:
    fm: FrameMetric
    connection: ConnectionForms
    riemann: Tensor
    ricci: Tensor
    scalar: Scalar
    schouten: Tensor
    weyl: Tensor | None = None
    cotton: Tensor | None = None
    bach: Tensor | None = None
    extras: dict = field(default_factory=dict)

    def two_form(self, T: Tensor, *lead: int, basis: Coframe | None | str = "frame") -> DifferentialForm:
        """``1/2 T_{lead,k,l} theta^k ^ theta^l`` (e.g. W_ij or C_i)."""
        fm = self.fm
        coeffs = {}
        for k in range(fm.n):
            for l in range(k + 1, fm.n):
                v = T[tuple(lead) + (k, l)]
                if v:
                    coeffs[(k, l)] = v
        f = DifferentialForm(2, fm.chart, coeffs, fm.coframe)
        if basis == "frame":
            return f
        return change_basis(f, basis)

    def symmetric(self, T: Tensor, basis: Coframe | None | str = "frame") -> SymmetricTensor:
        st = SymmetricTensor.from_matrix(self.fm.chart, T.matrix(), self.fm.coframe)
        if basis == "frame":
            return st
        return st.change_basis(basis)

    def to_json(self) -> dict:
        fm = self.fm
        off = fm.coframe.offset
        out = {
            "schema": "ambientg2.curvature-report/1",
            "metric": fm.name,
            "coframe": fm.coframe.name,
            "index_base": off,
            "calibration": dict(CALIBRATION, fingerprint=calibration_fingerprint()),
            "connection": [
                {"idx": [i + off, j + off], "form": self.connection.form(i, j).to_json()}
                for i in range(fm.n) for j in range(i + 1, fm.n) if not self.connection.form(i, j).is_zero()
            ],
            "riemann": _pair_sorted(self.riemann, off),
            "ricci": _sym_sorted(self.ricci, off),
            "scalar": to_json(self.scalar),
            "schouten": _sym_sorted(self.schouten, off),
        }
        if self.weyl is not None:
            out["weyl"] = _pair_sorted(self.weyl, off)
        if self.cotton is not None:
            out["cotton"] = [{"idx": [i + off for i in k], "coeff": to_json(v)}
                             for k, v in sorted(self.cotton.comps.items()) if k[1] < k[2]]
        if self.bach is not None:
            out["bach"] = _sym_sorted(self.bach, off)
        return out

    def to_latex(self) -> str:
        fm = self.fm
        lines = []
        for i in range(fm.n):
            for j in range(i + 1, fm.n):
                f = self.connection.form(i, j)
                if not f.is_zero():
                    lines.append(r"\Gamma_{%d%d} &=& %s" % (i + fm.coframe.offset, j + fm.coframe.offset,
                                                             f.to_latex()))
        lines.append(r"\mathsf{P} &=& %s" % self.symmetric(self.schouten).to_latex())
        if self.weyl is not None:
            for i in range(fm.n):
                for j in range(i + 1, fm.n):
                    f = self.two_form(self.weyl, i, j)
                    if not f.is_zero():
                        lines.append(r"W_{%d%d} &=& %s" % (i + fm.coframe.offset, j + fm.coframe.offset,
                                                            f.to_latex()))
        if self.cotton is not None:
            for i in range(fm.n):
                f = self.two_form(self.cotton, i)
                if not f.is_zero():
                    lines.append(r"C_{%d} &=& %s" % (i + fm.coframe.offset, f.to_latex()))
        if self.bach is not None:
            lines.append(r"B &=& %s" % self.symmetric(self.bach).to_latex())
        return "\\begin{eqnarray*}\n" + " \\\\\n".join(lines) + "\n\\end{eqnarray*}"


def _pair_sorted(T: Tensor, off: int) -> list[dict]:
    return [{"idx": [a + off for a in k], "coeff": to_json(v)} for k, v in sorted(T.comps.items())
            if k[0] < k[1] and k[2] < k[3] and (k[0], k[1]) <= (k[2], k[3])]


def _sym_sorted(T: Tensor, off: int) -> list[dict]:
    return [{"idx": [a + off for a in k], "coeff": to_json(v)} for k, v in sorted(T.comps.items()) if k[0] <= k[1]]


def curvature(fm: FrameMetric, *, with_cotton: bool = True, with_bach: bool = False,
              validate: bool = True) -> CurvaturePack:
    conn = levi_civita(fm, validate=validate)
    R = riemann(fm, conn)
    ric, s = ricci_scalar(R, fm)
    P = schouten(ric, s, fm)
    W = weyl(R, P, fm) if fm.n >= 4 else None
    C = cotton(P, conn, fm) if with_cotton else None
    B = bach(P, W, C, conn, fm) if with_bach and C is not None and W is not None else None
    return CurvaturePack(fm, conn, R, ric, s, P, W, C, B)


# ---------------------------------------------------------------------------
# symmetry checks

def riemann_symmetry_defects(R: Tensor, n: int) -> list[str]:
    bad = []
    for i, j, k, l in itertools.product(range(n), repeat=4):
        r = R[i, j, k, l]
        if not (r + R[j, i, k, l]).is_zero() or not (r + R[i, j, l, k]).is_zero():
            bad.append(f"antisymmetry {i}{j}{k}{l}")
        if not (r - R[k, l, i, j]).is_zero():
            bad.append(f"pair symmetry {i}{j}{k}{l}")
        if i < j and k < l and not (r + R[i, k, l, j] + R[i, l, j, k]).is_zero():
            bad.append(f"first Bianchi {i}{j}{k}{l}")
    return bad


def second_bianchi_defects(R: Tensor, conn: ConnectionForms) -> list[str]:
    """``nabla_m R_ijkl + nabla_k R_ijlm + nabla_l R_ijmk = 0``."""
    n = conn.fm.n
    dR = cov_deriv(R, conn)
    bad = []
    for i, j in itertools.combinations(range(n), 2):
        for k, l, m in itertools.combinations(range(n), 3):
            v = dR[i, j, k, l, m] + dR[i, j, l, m, k] + dR[i, j, m, k, l]
            if not v.is_zero():
                bad.append(f"{i}{j}{k}{l}{m}")
    return bad


def weyl_trace_defects(W: Tensor, fm: FrameMetric) -> list[str]:
    n = fm.n
    bad = []
    for j, l in itertools.product(range(n), repeat=2):
        acc = Scalar.zero()
        for i in range(n):
            for k in range(n):
                if fm.Ginv[i][k]:
                    w = W[i, j, k, l]
                    if w:
                        acc = acc + fm.Ginv[i][k] * w
        if not acc.is_zero():
            bad.append(f"{j}{l}")
    return bad


# ---------------------------------------------------------------------------
# independent coordinate oracle

def coordinate_curvature(g: Sequence[Sequence[Scalar]], coords: Sequence[str]):
    """Christoffel symbols, Riemann ``R^a_bcd`` and Ricci ``R_bd = R^a_bad`` in coordinates."""
    n = len(coords)
    ginv = linalg.inverse(g)
    dg = [[[g[a][b].diff(c) for c in coords] for b in range(n)] for a in range(n)]
    # Gamma^a_bc
    low = [[[(dg[d][c][b] + dg[d][b][c] - dg[b][c][d]) / 2 for c in range(n)] for b in range(n)]
           for d in range(n)]
    chris = [[[_dot([ginv[a][d] for d in range(n)], [low[d][b][c] for d in range(n)]) for c in range(n)]
              for b in range(n)] for a in range(n)]
    dchris = [[[[chris[a][b][c].diff(coords[e]) for e in range(n)] for c in range(n)] for b in range(n)]
              for a in range(n)]
    ric = [[Scalar.zero()] * n for _ in range(n)]
    for b in range(n):
        for d in range(b, n):
            acc = Scalar.zero()
            for a in range(n):
                # R^a_bad = d_a Gamma^a_db - d_d Gamma^a_ab + Gamma^a_ae Gamma^e_db - Gamma^a_de Gamma^e_ab
                acc = acc + dchris[a][d][b][a] - dchris[a][a][b][d]
                for e in range(n):
                    if chris[a][a][e] and chris[e][d][b]:
                        acc = acc + chris[a][a][e] * chris[e][d][b]
                    if chris[a][d][e] and chris[e][a][b]:
                        acc = acc - chris[a][d][e] * chris[e][a][b]
            ric[b][d] = acc
            ric[d][b] = acc
    return chris, ric


def frame_to_coordinates(T: Tensor, coframe: Coframe) -> list[list[Scalar]]:
    M = coframe.matrix
    return linalg.matmul(linalg.matmul(linalg.transpose(M), T.matrix()), M)


