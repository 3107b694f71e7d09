"""Pointwise holonomy evidence for the ambient metric of ``g_F``.

Everything here happens at an exact rational point in the xi-frame. The
exponential generator ``E`` is sampled as an independent coordinate: since
``e^(bx/3)`` is transcendental, its graph is Zariski dense in the ``(x, E)``
plane, so generic ranks on the graph and on the plane agree.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .ambient import XI_METRIC
from .cas import Scalar, linalg
from .frames import ConnectionForms, FrameMetric, Tensor, cov_deriv, levi_civita, riemann
from .nurowski import ParameterSet
from .sampling import random_point
from .spin import ambient_omega, ambient_xi
from .verdict import Verdict

N = 7
PAIRS = list(itertools.combinations(range(N), 2))
TRIPLES = list(itertools.combinations(range(N), 3))
EvalPoint = Mapping[str, Fraction]
SoMatrix = list[list[Scalar]]


@dataclass
class AmbientData:
    """Symbolic ambient curvature for one parameter choice, shared across points."""

    params: ParameterSet
    fm: FrameMetric
    conn: ConnectionForms
    R: Tensor
    convention: str = "resolved"
    _dR: Tensor | None = field(default=None, repr=False)
    _omega: object = field(default=None, repr=False)

    @property
    def dR(self) -> Tensor:
        if self._dR is None:
            self._dR = cov_deriv(self.R, self.conn)
        return self._dR

    @property
    def omega(self):
        if self._omega is None:
            self._omega = ambient_omega(self.params, convention=self.convention)
        return self._omega

    def names(self) -> list[str]:
        out: set[str] = set()
        for row in self.fm.coframe.matrix:
            for v in row:
                out |= v.free_generators()
        return sorted(out | set(self.fm.coframe.chart.coords))


@lru_cache(maxsize=16)
def ambient_data(params: ParameterSet, convention: str = "resolved") -> AmbientData:
    fm = ambient_xi(params, convention)
    conn = levi_civita(fm)
    return AmbientData(params, fm, conn, riemann(fm, conn), convention)


def _data(params: ParameterSet | AmbientData) -> AmbientData:
    return params if isinstance(params, AmbientData) else ambient_data(params)


def _at(v: Scalar, pt: EvalPoint) -> Scalar:
    if not v:
        return v
    try:
        return Scalar.const(v.eval_constant(pt))
    except ZeroDivisionError as exc:
        raise ZeroDivisionError(f"pole at {dict(pt)}") from exc


def sample_points(data: AmbientData, n: int, seed: int) -> list[dict[str, Fraction]]:
    rng = random.Random(seed)
    return [random_point(rng, data.names()) for _ in range(n)]


# ---------------------------------------------------------------------------
# so(4,3)

def so_defect(A: Sequence[Sequence[Scalar]]) -> bool:
    """True when ``A^T eta + eta A != 0``."""
    return any(not (A[j][i] * XI_METRIC[j][j] + XI_METRIC[i][i] * A[i][j]).is_zero()
               for i in range(N) for j in range(N))


def so_basis() -> list[SoMatrix]:
    """``L_ij = E_ij eta_jj - E_ji eta_ii`` for ``i < j``."""
    out = []
    for i, j in PAIRS:
        A = [[Scalar.zero()] * N for _ in range(N)]
        A[i][j] = Scalar.const(XI_METRIC[j][j])
        A[j][i] = Scalar.const(-XI_METRIC[i][i])
        out.append(A)
    return out


def _endomorphism(values: Mapping[tuple[int, int], Scalar]) -> SoMatrix:
    """``A^i_j = g^ii T_ij`` from a skew covariant pair."""
    A = [[Scalar.zero()] * N for _ in range(N)]
    for (i, j), v in values.items():
        A[i][j] = v * XI_METRIC[i][i]
    return A


def _flat(A: SoMatrix) -> list[Scalar]:
    return [A[i][j] for i in range(N) for j in range(N)]


# ---------------------------------------------------------------------------
# curvature ranks and generators

def riemann_rank(params: ParameterSet | AmbientData, pt: EvalPoint) -> int:
    """Rank of the 21x21 matrix ``R_(ij),(kl)`` at ``pt``."""
    data = _data(params)
    rows = [[_at(data.R[i, j, k, l], pt) for (k, l) in PAIRS] for (i, j) in PAIRS]
    return linalg.rank(rows)


@dataclass
class Generator:
    order: int
    tag: tuple[int, ...]  # (k, l) then derivative directions
    matrix: SoMatrix


@dataclass
class HolonomySpan:
    """Curvature generators at a point.

    ``rank_by_order`` is the dimension of the linear span of the generators up
    to each order; ``lie_rank_by_order`` is the dimension of the Lie algebra
    they generate. Both are lower bounds for the holonomy algebra.
    """

    point: dict[str, Fraction]
    generators: list[Generator]
    rank_by_order: dict[int, int]
    lie_rank_by_order: dict[int, int] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return max(self.rank_by_order.values(), default=0)

    @property
    def lie_rank(self) -> int:
        return max(self.lie_rank_by_order.values(), default=0)

    def minimal_order(self, target: int = 14, *, lie: bool = True) -> int | None:
        ranks = self.lie_rank_by_order if lie else self.rank_by_order
        for order in sorted(ranks):
            if ranks[order] >= target:
                return order
        return None


def _commutator(A: SoMatrix, B: SoMatrix) -> SoMatrix:
    AB = linalg.matmul(A, B)
    BA = linalg.matmul(B, A)
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(AB, BA)]


def lie_closure(mats: Sequence[SoMatrix], limit: int = 21) -> list[SoMatrix]:
    """A basis of the Lie algebra generated by ``mats``."""
    span = linalg.IncrementalSpan(N * N)
    basis: list[SoMatrix] = []
    for A in mats:
        if span.add(_flat(A)):
            basis.append(A)
    i = 0
    while i < len(basis) and len(basis) < limit:
        for j in range(i):
            C = _commutator(basis[i], basis[j])
            if span.add(_flat(C)):
                basis.append(C)
                if len(basis) >= limit:
                    break
        i += 1
    return basis


def _order0(data: AmbientData, pt: EvalPoint):
    for k, l in PAIRS:
        vals = {(i, j): _at(data.R[i, j, k, l], pt) for i in range(N) for j in range(N)}
        yield (k, l), {key: v for key, v in vals.items() if v}


def _order1(data: AmbientData, pt: EvalPoint):
    dR = data.dR
    for (k, l), m in itertools.product(PAIRS, range(N)):
        vals = {(i, j): _at(dR[i, j, k, l, m], pt) for i in range(N) for j in range(N)}
        yield (k, l, m), {key: v for key, v in vals.items() if v}


def second_derivative_at(data: AmbientData, pt: EvalPoint) -> dict[tuple[int, ...], Scalar]:
    """``(nabla^2 R)_{ijklmn}`` at ``pt`` for ``i<j``, ``k<l``, derivative indices last."""
    dR = data.dR
    cf = data.fm.coframe
    U = data.conn.up
    Upt = [[[_at(U[p][a][m], pt) for m in range(N)] for a in range(N)] for p in range(N)]
    dRpt: dict[tuple[int, ...], Scalar] = {}

    def dval(idx: tuple[int, ...]) -> Scalar:
        v = dRpt.get(idx)
        if v is None:
            v = _at(dR[idx], pt)
            dRpt[idx] = v
        return v

    out: dict[tuple[int, ...], Scalar] = {}
    for (i, j), (k, l), m in itertools.product(PAIRS, PAIRS, range(N)):
        base = (i, j, k, l, m)
        comp = dR[base]
        grad = [_at(g, pt) for g in cf.gradient(comp)] if comp else [Scalar.zero()] * N
        for n in range(N):
            acc = grad[n]
            for s, a in enumerate(base):
                for q in range(N):
                    g = Upt[q][a][n]
                    if not g:
                        continue
                    src = base[:s] + (q,) + base[s + 1:]
                    v = dval(src)
                    if v:
                        acc = acc - g * v
            if acc:
                out[base + (n,)] = acc
    return out


def _order2(data: AmbientData, pt: EvalPoint):
    d2 = second_derivative_at(data, pt)
    for (k, l), m, n in itertools.product(PAIRS, range(N), range(N)):
        vals = {}
        for i, j in PAIRS:
            v = d2.get((i, j, k, l, m, n))
            if v:
                vals[(i, j)] = v
                vals[(j, i)] = -v
        yield (k, l, m, n), vals


def ambrose_singer_span(params: ParameterSet | AmbientData, pt: EvalPoint, max_order: int = 2, *,
                        target: int | None = 14) -> HolonomySpan:
    """Span of ``R(e_k, e_l)``, ``(nabla_m R)(e_k, e_l)``, ``(nabla^2_{m,n} R)(e_k, e_l)`` at ``pt``.

    Records both the linear rank and the rank of the generated Lie algebra per
    order; stops after the first order at which the Lie rank reaches ``target``
    (``None`` runs all orders).
    """
    if not 0 <= max_order <= 2:
        raise ValueError("max_order must be 0, 1 or 2")
    data = _data(params)
    span = linalg.IncrementalSpan(N * N)
    gens: list[Generator] = []
    ranks: dict[int, int] = {}
    lie: dict[int, int] = {}
    sources = (_order0, _order1, _order2)
    for order in range(max_order + 1):
        for tag, vals in sources[order](data, pt):
            if not vals:
                continue
            A = _endomorphism(vals)
            if so_defect(A):
                raise ArithmeticError(f"generator {tag} is not in so(4,3)")
            if span.add(_flat(A)):
                gens.append(Generator(order, tag, A))
        ranks[order] = len(span)
        lie[order] = len(lie_closure([g.matrix for g in gens]))
        if target is not None and lie[order] >= target:
            break
    return HolonomySpan(dict(pt), gens, ranks, lie)


# ---------------------------------------------------------------------------
# the 3-form

def omega_at(data: AmbientData, pt: EvalPoint) -> dict[tuple[int, int, int], Scalar]:
    return {idx: _at(v, pt) for idx, v in data.omega.coeffs.items()}


def _omega_full(omega: Mapping[tuple[int, int, int], Scalar]):
    from .forms import perm_sign

    def w(i: int, j: int, k: int) -> Scalar:
        s = perm_sign((i, j, k))
        if not s:
            return Scalar.zero()
        v = omega.get(tuple(sorted((i, j, k))))
        if v is None:
            return Scalar.zero()
        return v if s > 0 else -v

    return w


def derivation_action(A: SoMatrix, omega: Mapping[tuple[int, int, int], Scalar]) -> list[Scalar]:
    """``omega(A., ., .) + omega(., A., .) + omega(., ., A.)`` on the 35 sorted triples."""
    w = _omega_full(omega)
    out = []
    for i, j, k in TRIPLES:
        acc = Scalar.zero()
        for a in range(N):
            if A[a][i]:
                acc = acc + A[a][i] * w(a, j, k)
            if A[a][j]:
                acc = acc + A[a][j] * w(i, a, k)
            if A[a][k]:
                acc = acc + A[a][k] * w(i, j, a)
        out.append(acc)
    return out


def stabilizer_check(span: HolonomySpan, omega: Mapping[tuple[int, int, int], Scalar]) -> Verdict:
    bad = [list(g.tag) for g in span.generators if any(not v.is_zero() for v in derivation_action(g.matrix, omega))]
    return Verdict.of("stabilizer", not bad, {"generators": len(span.generators), "moving_omega": bad})


def stabilizer_dimension(omega: Mapping[tuple[int, int, int], Scalar]) -> int:
    """Kernel dimension of the 35x21 matrix of the so(4,3) action on ``omega``."""
    cols = [derivation_action(L, omega) for L in so_basis()]
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(len(TRIPLES))]
    return len(cols) - linalg.rank(rows)


# ---------------------------------------------------------------------------
# non-symmetry

def non_symmetric_check(params: ParameterSet | AmbientData, pt: EvalPoint,
                        index: tuple[int, int, int, int, int] = (1, 2, 1, 2, 1)) -> Verdict:
    """``nabla_1 R_1212`` at ``pt`` (xi-frame indices, derivative slot given last)."""
    data = _data(params)
    if data.R.is_zero():
        return Verdict("non-symmetric", "NOT-APPLICABLE", {"reason": "flat ambient metric", "value": "0"})
    v = _at(data.dR[index], pt)
    return Verdict.of("non-symmetric", not v.is_zero(), {"component": list(index), "value": str(v)})


# ---------------------------------------------------------------------------
# aggregate

def _point_report(params: ParameterSet, convention: str, pt: EvalPoint, max_order: int) -> dict:
    data = ambient_data(params, convention)
    span = ambrose_singer_span(data, pt, max_order)
    om = omega_at(data, pt)
    stab = stabilizer_check(span, om)
    return {
        "point": {k: f"{v.numerator}/{v.denominator}" for k, v in sorted(pt.items())},
        "rank_by_order": {str(k): v for k, v in span.rank_by_order.items()},
        "lie_rank_by_order": {str(k): v for k, v in span.lie_rank_by_order.items()},
        "minimal_order": span.minimal_order(),
        "stabilizer_pass": stab.passed,
        "stabilizer_dim": stabilizer_dimension(om),
    }


def holonomy_report(params: ParameterSet, *, points: int = 3, seed: int = 11, max_order: int = 2,
                    convention: str = "resolved", workers: int = 1) -> dict:
    """Span ranks, stabilizer checks and a verdict at ``points`` seeded points.

    With ``workers > 1`` the points are handled in separate processes; the
    output does not depend on the worker count.
    """
    pts = sample_points(ambient_data(params, convention), points, seed)
    if workers > 1 and len(pts) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(pts))) as pool:
            per_point = list(pool.map(_point_report, [params] * len(pts), [convention] * len(pts), pts,
                                      [max_order] * len(pts)))
    else:
        per_point = [_point_report(params, convention, pt, max_order) for pt in pts]
    ranks = [max(p["lie_rank_by_order"].values()) for p in per_point]
    full = all(r == 14 for r in ranks) and all(p["stabilizer_pass"] for p in per_point) \
        and all(p["stabilizer_dim"] == 14 for p in per_point)
    if full:
        verdict = "PASS"
    elif all(r == 0 for r in ranks):
        verdict = "NOT-APPLICABLE"
    elif any(r > 14 for r in ranks) or not all(p["stabilizer_pass"] for p in per_point):
        verdict = "FAIL"
    else:
        verdict = "INCONCLUSIVE"
    return {"params": params.describe(),
            "points": per_point, "rank_by_order": [p["rank_by_order"] for p in per_point],
            "stabilizer_pass": all(p["stabilizer_pass"] for p in per_point),
            "max_rank": max(ranks, default=0), "verdict": verdict}
