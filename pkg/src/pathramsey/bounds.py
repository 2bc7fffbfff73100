"""Exact evaluation of the closed-form quantities and bounds.

All combinatorial quantities (level sizes, widths, middle-level counts) are
computed exactly; the real-valued bound expressions use floats and every
assertion carries an explicit 1e-9 tolerance so nothing silently rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .posets import ChainSpec, q_hierarchy, DEFAULT_BUDGET

TOL = 1e-9
TOW_CAP = 1e30


class BoundsError(ValueError):
    pass


def tow(h: int, x: float, cap: float = TOW_CAP) -> float:
    """Tower function: tow_0(x) = x, tow_h(x) = 2**tow_{h-1}(x); saturates to inf."""
    if h < 0:
        raise BoundsError("tower height must be >= 0")
    val = float(x)
    for _ in range(h):
        if val > math.log2(cap):
            return math.inf
        val = 2.0 ** val
    return val


# -- middle levels ---------------------------------------------------------------


def _q1_member_key(vec, lengths):
    """Ground-poset index list covered by a height vector (orders level 2)."""
    key = []
    offset = 0
    for coord, length in zip(vec, lengths):
        key.extend(range(offset, offset + coord))
        offset += length
    return tuple(sorted(key))


def middle_level_vectors(m_values) -> list[tuple[int, ...]]:
    """Vectors with coordinate i in 0..m_i-1 and coordinate sum floor(sum(m_i-1)/2),
    in down-set-lattice element-index order."""
    m_values = tuple(m_values)
    lengths = tuple(mi - 1 for mi in m_values)
    target = sum(lengths) // 2
    vecs = [
        v
        for v in _iter_box(m_values)
        if sum(v) == target
    ]
    vecs.sort(key=lambda v: _q1_member_key(v, lengths))
    return vecs


def _iter_box(m_values):
    if not m_values:
        yield ()
        return
    for head in range(m_values[0]):
        for rest in _iter_box(m_values[1:]):
            yield (head,) + rest


def midlevel_size(m_values) -> tuple[int, float, float]:
    """(exact middle-level count, 2/3 * m^(t-1)/sqrt(t), m^(t-1)/t).

    The exact count comes from convolving the per-coordinate indicator
    polynomials.  Both closed-form lower bounds are checked in the diagonal
    case.
    """
    m_values = tuple(m_values)
    t = len(m_values)
    coeffs = [1]
    for mi in m_values:
        block = [1] * mi
        out = [0] * (len(coeffs) + mi - 1)
        for i, a in enumerate(coeffs):
            for j, b in enumerate(block):
                out[i + j] += a * b
        coeffs = out
    exact = coeffs[sum(mi - 1 for mi in m_values) // 2]
    diagonal = len(set(m_values)) == 1
    if diagonal:
        m = m_values[0]
        lb_23 = (2.0 / 3.0) * m ** (t - 1) / math.sqrt(t)
        lb_t = m ** (t - 1) / t
        if exact + TOL < lb_23 or exact + TOL <= lb_t - 1:
            raise BoundsError(f"middle level {exact} violates its lower bounds")
        if not exact > lb_t - TOL:
            raise BoundsError(f"middle level {exact} not above m^(t-1)/t")
    else:
        m = max(m_values)
        lb_23 = float("nan")
        lb_t = float("nan")
    return exact, lb_23, lb_t


# -- tower sandwich -----------------------------------------------------------------


def q_tower_sandwich(k: int, m: int, t: int, budget: int = DEFAULT_BUDGET):
    """(lower, upper, exact |Q_k| or None) for the diagonal hierarchy.

    At k = 2 the level size is exactly m**t, so both bounds collapse to the
    identity; from k = 3 on the tower expressions apply.
    """
    if k < 2:
        raise BoundsError("sandwich defined for k >= 2")
    if k == 2:
        exact = m ** t
        return float(exact), float(exact), exact
    lower = tow(k - 2, m ** (t - 1) / (2.0 * math.sqrt(t)))
    upper = tow(k - 2, 2.0 * m ** (t - 1))
    try:
        hier = q_hierarchy(ChainSpec.diagonal(m, t), k, budget=budget)
        exact = hier[k - 1].size
    except Exception:
        return lower, upper, None
    if not (lower - TOL <= exact <= upper + TOL):
        raise BoundsError(f"|Q_{k}| = {exact} escapes [{lower}, {upper}]")
    return lower, upper, exact


# -- aggregated reports ----------------------------------------------------------------


@dataclass
class BoundReport:
    k: int
    ell: int
    t: int
    m: tuple[int, ...]
    h: int
    s: int
    q_sizes: tuple[int, ...]
    widths: tuple[int, ...]
    b_size: int
    bounds: dict = field(default_factory=dict)
    exact: int | None = None

    def check_sandwich(self) -> None:
        if self.exact is None:
            return
        lo = self.bounds.get("lower")
        hi = self.bounds.get("upper")
        if lo is not None and self.exact < lo - TOL:
            raise BoundsError(f"exact {self.exact} below lower bound {lo}")
        if hi is not None and self.exact > hi + TOL:
            raise BoundsError(f"exact {self.exact} above upper bound {hi}")

    def row(self) -> dict:
        out = {
            "k": self.k,
            "l": self.ell,
            "t": self.t,
            "m": "/".join(map(str, self.m)),
            "h": self.h,
            "s": self.s,
            "q": "/".join(map(str, self.q_sizes)),
            "a": "/".join(map(str, self.widths)),
            "B": self.b_size,
        }
        out.update(self.bounds)
        if self.exact is not None:
            out["exact"] = self.exact
        return out


def online_bounds(k: int, ell: int, m_values, t: int,
                  budget: int = DEFAULT_BUDGET) -> BoundReport:
    """Every closed-form bound on the game length for one parameter tuple."""
    m_values = tuple(m_values)
    if len(m_values) != t:
        raise BoundsError("need one forbidden length per color")
    spec = ChainSpec.from_m(m_values)
    h = -(-k // ell)
    s = k - (h - 1) * ell
    hier = q_hierarchy(spec, h, budget=budget)
    q_sizes = tuple(p.size for p in hier)
    widths = tuple(p.width() for p in hier)
    b_size, _, _ = midlevel_size(m_values)
    bounds: dict = {}
    q_h = q_sizes[h - 1]
    if h == 1:
        bounds["lower"] = q_h / (k * math.log2(q_h))
        bounds["upper"] = q_h + 1
    else:
        prod_a = math.prod(widths[: h - 1])
        bounds["lower"] = q_h / (k * math.log2(q_h))
        bounds["upper"] = q_h * q_sizes[h - 2] * prod_a
        bounds["sharper_upper"] = 1 + ((q_h - h + 1) * (q_sizes[h - 2] - h) + 1) * prod_a
    if k == 2 and ell == 1:
        prod_m = math.prod(m_values)
        sum_m = sum(m_values)
        diagonal = len(set(m_values)) == 1
        if diagonal:
            m = m_values[0]
            bounds["k2_lower"] = m ** (t - 1) / (3.0 * math.sqrt(t))
            bounds["k2_upper"] = t * m ** (t + 1)
        else:
            bounds["k2_lower"] = prod_m / (2.0 * sum_m)
            bounds["k2_upper"] = sum_m * prod_m
        bounds["k2_move_bound"] = prod_m * (sum(mi - 1 for mi in m_values) - 1) + 1
    return BoundReport(
        k=k, ell=ell, t=t, m=m_values, h=h, s=s,
        q_sizes=q_sizes, widths=widths, b_size=b_size, bounds=bounds,
    )


def loose_value(k: int, ell: int, m_values, t: int,
                budget: int = DEFAULT_BUDGET) -> tuple[int, int, int]:
    """(h, s, exact off-line vertex count ell*|Q_h| + s)."""
    if not 1 <= ell <= k:
        raise BoundsError("shift must satisfy 1 <= ell <= k")
    m_values = (m_values,) * t if isinstance(m_values, int) else tuple(m_values)
    spec = ChainSpec.from_m(m_values)
    h = -(-k // ell)
    s = k - (h - 1) * ell
    hier = q_hierarchy(spec, h, budget=budget)
    return h, s, ell * hier[h - 1].size + s
