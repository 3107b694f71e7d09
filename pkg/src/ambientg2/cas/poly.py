"""Sparse multivariate polynomials over Q(2^(1/6), sqrt 3).

A polynomial is a plain ``dict`` mapping a packed monomial (a Python int)
to a nonzero rational coefficient.  Each exponent occupies a 16-bit field;
field 0 holds the exponent of ``r = 2^(1/6)`` (kept in ``0..5``), field 1
the exponent of ``s = sqrt(3)`` (kept in ``0..1``), and field ``2 + k`` the
exponent of the k-th registered generator.  Monomial multiplication is then
integer addition followed by the two reduction rules ``r^6 = 2``, ``s^2 = 3``.

The algebraic part of a monomial is ``m & ALG_MASK``; the generator part is
``m >> ALG_BITS``.  Polynomials whose keys all satisfy ``m >> ALG_BITS == 0``
are elements of the constant field K.
"""

from __future__ import annotations

from functools import reduce
from operator import or_

try:  # gmpy2 rationals are several times faster than fractions.Fraction
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

FIELD = 16
FMASK = (1 << FIELD) - 1
ALG_BITS = 2 * FIELD
ALG_MASK = (1 << ALG_BITS) - 1
S_UNIT = 1 << FIELD
S_TWO = 2 << FIELD

ZERO = Q(0)
ONE_Q = Q(1)

Poly = dict  # packed monomial -> rational


def field_shift(gen_index: int) -> int:
    return FIELD * (gen_index + 2)


def gen_unit(gen_index: int) -> int:
    return 1 << field_shift(gen_index)


# ---------------------------------------------------------------------------
# ring operations

def const(c) -> Poly:
    c = Q(c)
    return {0: c} if c else {}


def monomial(m: int, c=1) -> Poly:
    c = Q(c)
    return {m: c} if c else {}


def add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    res = dict(a)
    for m, c in b.items():
        v = res.get(m)
        if v is None:
            res[m] = c
        else:
            v = v + c
            if v:
                res[m] = v
            else:
                del res[m]
    return res


def sub(a: Poly, b: Poly) -> Poly:
    res = dict(a)
    for m, c in b.items():
        v = res.get(m)
        if v is None:
            res[m] = -c
        else:
            v = v - c
            if v:
                res[m] = v
            else:
                del res[m]
    return res


def neg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def scale(a: Poly, c) -> Poly:
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def mul_term(a: Poly, mt: int, ct) -> Poly:
    """Multiply by the single term ``ct * mt`` (``mt`` may carry an algebraic part)."""
    res = {}
    for m, c in a.items():
        m = m + mt
        c = c * ct
        if (m & FMASK) >= 6:
            m -= 6
            c = c * 2
        if (m & 0xFFFF0000) >= S_TWO:
            m -= S_TWO
            c = c * 3
        v = res.get(m)
        res[m] = c if v is None else v + c
    return {m: c for m, c in res.items() if c}


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        (mt, ct), = b.items()
        return mul_term(a, mt, ct)
    res: dict = {}
    get = res.get
    for mb, cb in b.items():
        for ma, ca in a.items():
            m = ma + mb
            c = ca * cb
            if (m & FMASK) >= 6:
                m -= 6
                c = c * 2
            if (m & 0xFFFF0000) >= S_TWO:
                m -= S_TWO
                c = c * 3
            v = get(m)
            res[m] = c if v is None else v + c
    return {m: c for m, c in res.items() if c}


def power(a: Poly, n: int) -> Poly:
    if n < 0:
        raise ValueError("negative power of a polynomial")
    result = {0: ONE_Q}
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def is_const(a: Poly) -> bool:
    return all((m >> ALG_BITS) == 0 for m in a)


def support_mask(a: Poly) -> int:
    return reduce(or_, a.keys(), 0)


def has_gen(a: Poly, gen_index: int) -> bool:
    return bool((support_mask(a) >> field_shift(gen_index)) & FMASK)


def gens_present(a: Poly) -> list[int]:
    mask = support_mask(a) >> ALG_BITS
    out = []
    k = 0
    while mask:
        if mask & FMASK:
            out.append(k)
        mask >>= FIELD
        k += 1
    return out


def exponent(m: int, gen_index: int) -> int:
    return (m >> field_shift(gen_index)) & FMASK


def degree_in(a: Poly, gen_index: int) -> int:
    sh = field_shift(gen_index)
    return max(((m >> sh) & FMASK for m in a), default=0)


def total_degree(m: int) -> int:
    m >>= ALG_BITS
    d = 0
    while m:
        d += m & FMASK
        m >>= FIELD
    return d


# ---------------------------------------------------------------------------
# monomial gcd / divisibility (generator part only)

def fields_of(m: int) -> list[int]:
    m >>= ALG_BITS
    out = []
    while m:
        out.append(m & FMASK)
        m >>= FIELD
    return out


def pack(fields: list[int]) -> int:
    m = 0
    for k in reversed(range(len(fields))):
        m = (m << FIELD) | fields[k]
    return m << ALG_BITS


def mono_divides(small: int, big: int) -> bool:
    """True iff the generator part of ``small`` divides that of ``big``."""
    small >>= ALG_BITS
    big >>= ALG_BITS
    while small:
        if (small & FMASK) > (big & FMASK):
            return False
        small >>= FIELD
        big >>= FIELD
    return True


def mono_gcd_of(a: Poly, restrict: list[tuple[int, int]] | None = None) -> int:
    """Generator-part gcd of all monomials of ``a``.

    ``restrict`` optionally lists ``(gen_index, cap)`` pairs; only those
    generators are considered and exponents are capped at ``cap``.
    """
    if not a:
        return 0
    if restrict is None:
        keys = iter(a)
        mins = fields_of(next(keys))
        for m in keys:
            f = fields_of(m)
            if len(f) < len(mins):
                mins = mins[: len(f)]
            for k in range(len(mins)):
                if f[k] < mins[k]:
                    mins[k] = f[k]
            if not any(mins):
                return 0
        return pack(mins)
    out = 0
    for g, cap in restrict:
        sh = field_shift(g)
        e = cap
        for m in a:
            v = (m >> sh) & FMASK
            if v < e:
                e = v
                if not e:
                    break
        if e:
            out |= e << sh
    return out


def shift_down(a: Poly, mono: int) -> Poly:
    """Divide every monomial by ``mono`` (assumed to divide all of them)."""
    if not mono:
        return a
    return {m - mono: c for m, c in a.items()}


# ---------------------------------------------------------------------------
# constant-field arithmetic (K = Q(2^(1/6), sqrt 3), dimension 12)

ALG_KEYS = [i | (j << FIELD) for j in (0, 1) for i in range(6)]
_ALG_INDEX = {k: n for n, k in enumerate(ALG_KEYS)}


def k_coords(a: Poly) -> list:
    out = [ZERO] * 12
    for m, c in a.items():
        out[_ALG_INDEX[m]] = c
    return out


def k_from_coords(coords) -> Poly:
    return {ALG_KEYS[n]: Q(c) for n, c in enumerate(coords) if c}


def _term_inverse(m: int, c) -> tuple[int, object]:
    # (c r^i s^j)^-1 = r^(6-i) s^j / (2 c 3^j)  for i>0
    i = m & FMASK
    j = (m >> FIELD) & FMASK
    inv_c = ONE_Q / c
    mi = 0
    if i:
        mi = 6 - i
        inv_c = inv_c / 2
    if j:
        mi |= S_UNIT
        inv_c = inv_c / 3
    return mi, inv_c


_K_INV_CACHE: dict = {}


def k_inverse(a: Poly) -> Poly:
    """Inverse of a nonzero element of K."""
    if not a:
        raise ZeroDivisionError("inverse of zero in the constant field")
    if len(a) == 1:
        (m, c), = a.items()
        mi, ci = _term_inverse(m, c)
        return {mi: ci}
    key = frozenset(a.items())
    hit = _K_INV_CACHE.get(key)
    if hit is not None:
        return hit
    # columns: a * basis_k expressed in the basis; solve M x = e_0
    cols = [k_coords(mul(a, {bk: ONE_Q})) for bk in ALG_KEYS]
    mat = [[cols[col][row] for col in range(12)] + [ONE_Q if row == 0 else ZERO] for row in range(12)]
    for col in range(12):
        piv = next(r for r in range(col, 12) if mat[r][col])
        mat[col], mat[piv] = mat[piv], mat[col]
        pv = mat[col][col]
        rowc = [v / pv for v in mat[col]]
        mat[col] = rowc
        for r in range(12):
            if r != col and mat[r][col]:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], rowc)]
    res = k_from_coords([mat[r][12] for r in range(12)])
    if len(_K_INV_CACHE) < 4096:
        _K_INV_CACHE[key] = res
    return res


# ---------------------------------------------------------------------------
# coefficient extraction by generator part

def split_by_gens(a: Poly) -> dict[int, Poly]:
    """Group terms by generator part; values are K-elements."""
    out: dict[int, Poly] = {}
    for m, c in a.items():
        g = m & ~ALG_MASK
        out.setdefault(g, {})[m & ALG_MASK] = c
    return out


def leading(a: Poly, graded: bool = False) -> tuple[int, Poly]:
    """Leading generator monomial and its K coefficient.

    The default order compares packed generator parts as integers, i.e. lex
    with the most recently registered generator most significant.
    """
    parts = split_by_gens(a)
    if graded:
        lm = max(parts, key=lambda g: (total_degree(g), g))
    else:
        lm = max(parts)
    return lm, parts[lm]


def make_monic(a: Poly, graded: bool = True) -> tuple[Poly, Poly]:
    """Return ``(a / lc, 1/lc)`` with ``lc`` the leading K coefficient."""
    _, lc = leading(a, graded)
    inv = k_inverse(lc)
    return mul(a, inv), inv


def divexact(a: Poly, b: Poly) -> Poly | None:
    """``a / b`` if ``b`` divides ``a`` exactly in K[gens], else ``None``."""
    if not b:
        raise ZeroDivisionError
    if not a:
        return {}
    lm_b, lc_b = leading(b)
    inv_lc = k_inverse(lc_b)
    rem = dict(a)
    quot: Poly = {}
    while rem:
        lm_r, lc_r = leading(rem)
        if not mono_divides(lm_b, lm_r):
            return None
        qk = mul(lc_r, inv_lc)
        shift = lm_r - lm_b
        qt = {k + shift: c for k, c in qk.items()}
        quot = add(quot, qt)
        rem = sub(rem, mul(qt, b))
    return quot


# ---------------------------------------------------------------------------
# multivariate gcd (recursive primitive PRS over K)

def _univariate(a: Poly, g: int) -> dict[int, Poly]:
    sh = field_shift(g)
    out: dict[int, Poly] = {}
    for m, c in a.items():
        e = (m >> sh) & FMASK
        out.setdefault(e, {})[m - (e << sh)] = c
    return out


def _from_univariate(u: dict[int, Poly], g: int) -> Poly:
    sh = field_shift(g)
    res: Poly = {}
    for e, cpoly in u.items():
        for m, c in cpoly.items():
            res[m + (e << sh)] = c
    return res


def _content(a: Poly, g: int) -> Poly:
    coeffs = sorted(_univariate(a, g).values(), key=len)
    c = coeffs[0]
    for other in coeffs[1:]:
        if is_const(c):
            return {0: ONE_Q}
        c = gcd(c, other)
    return c


def _prem(a: dict[int, Poly], b: dict[int, Poly]) -> dict[int, Poly]:
    da, db = max(a), max(b)
    lcb = b[db]
    r = dict(a)
    dr = da
    while r and dr >= db:
        lcr = r[dr]
        shift = dr - db
        new: dict[int, Poly] = {}
        for e, c in r.items():
            if e == dr:
                continue
            new[e] = mul(c, lcb)
        for e, c in b.items():
            if e == db:
                continue
            k = e + shift
            new[k] = sub(new.get(k, {}), mul(c, lcr))
        r = {e: c for e, c in new.items() if c}
        dr = max(r) if r else -1
    return r


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic (graded-lex) gcd of two polynomials over K; a unit is ``{0: 1}``."""
    if not a:
        return make_monic(b)[0] if b else {}
    if not b:
        return make_monic(a)[0]
    if is_const(a) or is_const(b):
        return {0: ONE_Q}
    ma, mb = mono_gcd_of(a), mono_gcd_of(b)
    mfa, mfb = fields_of(ma), fields_of(mb)
    n = min(len(mfa), len(mfb))
    mono = pack([min(mfa[k], mfb[k]) for k in range(n)])
    a = shift_down(a, ma)
    b = shift_down(b, mb)
    core = _gcd_core(a, b)
    return make_monic(mul_term(core, mono, ONE_Q))[0]


def _gcd_core(a: Poly, b: Poly) -> Poly:
    if is_const(a) or is_const(b):
        return {0: ONE_Q}
    if len(a) == 1 or len(b) == 1:
        # monomial factors were removed by the caller
        return {0: ONE_Q}
    q = divexact(a, b)
    if q is not None:
        return b
    q = divexact(b, a)
    if q is not None:
        return a
    ga, gb = set(gens_present(a)), set(gens_present(b))
    only_a = ga - gb
    if only_a:
        return _gcd_core(_content(a, min(only_a)), b)
    only_b = gb - ga
    if only_b:
        return _gcd_core(a, _content(b, min(only_b)))
    g = min(ga, key=lambda k: max(degree_in(a, k), degree_in(b, k)))
    ca, cb = _content(a, g), _content(b, g)
    cont = gcd(ca, cb)
    pa = divexact(a, ca)
    pb = divexact(b, cb)
    ua, ub = _univariate(pa, g), _univariate(pb, g)
    if max(ua) < max(ub):
        ua, ub = ub, ua
    while True:
        r = _prem(ua, ub)
        if not r:
            break
        if max(r) == 0:
            ub = {0: {0: ONE_Q}}
            break
        rp = _from_univariate(r, g)
        rp = divexact(rp, _content(rp, g))
        ua, ub = ub, _univariate(rp, g)
    pg = _from_univariate(ub, g)
    pg = divexact(pg, _content(pg, g)) if max(ub) > 0 else {0: ONE_Q}
    return mul(cont, pg)


# ---------------------------------------------------------------------------
# differentiation and substitution on raw generators

def pdiff(a: Poly, gen_index: int) -> Poly:
    sh = field_shift(gen_index)
    unit = 1 << sh
    res: Poly = {}
    for m, c in a.items():
        e = (m >> sh) & FMASK
        if e:
            res[m - unit] = c * e
    return res


def subs_value(a: Poly, gen_index: int, value) -> Poly:
    """Substitute a rational ``value`` for one generator."""
    sh = field_shift(gen_index)
    value = Q(value)
    pows = {0: ONE_Q}
    res: Poly = {}
    for m, c in a.items():
        e = (m >> sh) & FMASK
        if e:
            pv = pows.get(e)
            if pv is None:
                pv = value ** e
                pows[e] = pv
            if not pv:
                continue
            c = c * pv
            m -= e << sh
        v = res.get(m)
        res[m] = c if v is None else v + c
    return {m: c for m, c in res.items() if c}


def collect(a: Poly, gen_index: int) -> dict[int, Poly]:
    """Coefficients of powers of one generator."""
    return _univariate(a, gen_index)


def truncate(a: Poly, gen_index: int, max_exp: int) -> Poly:
    sh = field_shift(gen_index)
    return {m: c for m, c in a.items() if ((m >> sh) & FMASK) <= max_exp}
