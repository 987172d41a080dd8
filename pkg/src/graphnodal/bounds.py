"""Closed-form tail-bound constants and the exceptional-vertex bound k.

Everything here evaluates printed formulas, with q = max{p, 1-p} throughout:

    C  = p^2 (1-p)^2 / (128 q^4)
    t  = 2q sqrt(2 ((2+delta)/(1+delta)) ln 9)
    a1 = (18q/4) sqrt(2 ((2+delta)/(1+delta)) ln 9)
    a2 = 3 ((2+delta)/(1+delta)) ln 9
    alpha = (1-theta) (2/3) sqrt(p(1-p) C / 3) - gamma a1
    beta  = min(a2, (4C/9) [1 + (1-theta)^2 (2 ln(1-theta) - 1)]
                    - ln(3/gamma) / (1+delta))
    D = 2 sqrt(p(1-p)) (1 + sqrt(1/2+eps)) + xi1 + xi2 sqrt(1/2+eps)
    r = alpha sqrt(1/2+eps) / (2D)

A parameter point is feasible when alpha > 0, beta > 0, and the union-bound
condition H(1/2+eps) < min(beta (1/2+eps), xi1^2/32, xi2^2 (1/2+eps)/8)
holds, H being base-2 binary entropy.  The bound k for a feasible point is
the largest integer with (1-p)^k < 1/2-eps and

    sqrt((1-p)^k) >= r (1/2 - eps - (1-p)^k),

and the grid search returns the point maximizing k (ties by lexicographic
parameter order).  The result is self-certifying: the inequality holds at k
and fails at k+1.

Note on the default grid: with these formulas beta can never exceed
4C/9 <= 1/288, so the union-bound condition forces the binary entropy of
1/2+eps below ~3.5e-3, i.e. eps within about 3e-4 of 1/2, and forces
1+delta into the thousands.  The default grid therefore parameterizes eps
by its gap u = 1/2 - eps and gamma as a fraction of the largest gamma
keeping alpha positive; wide, loosely spaced ranges are enough because k
depends on the parameters only through r and u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BoundParams",
    "ConstantsResult",
    "GridSpec",
    "alpha_beta",
    "binary_entropy",
    "c_constant",
    "exceptional_bound_k",
    "feasibility",
    "kp_formula",
    "reference_k",
    "tail_constants",
]

_K_SEARCH_CAP = 1_000_000

# published reference values for the bound k; the grid search reports
# whether it reproduces them (the parameter grid behind them is unknown)
REFERENCE_K_TABLE: tuple[tuple[float, int], ...] = (
    (0.78, 29),
    (0.74, 30),
    (0.70, 32),
    (0.66, 34),
    (0.62, 37),
    (0.58, 39),
    (0.54, 43),
    (0.50, 46),
    (0.46, 54),
    (0.42, 63),
    (0.38, 75),
    (0.34, 90),
    (0.30, 109),
    (0.26, 137),
    (0.22, 181),
    (0.18, 277),
)


def reference_k(p: float) -> int | None:
    """Published k for this p, or None if p is not a tabulated value."""
    for pv, kv in REFERENCE_K_TABLE:
        if math.isclose(p, pv, rel_tol=0.0, abs_tol=1e-9):
            return kv
    return None


@dataclass(frozen=True)
class BoundParams:
    """One evaluation point: p and the six analysis knobs.

    delta is the aspect slack (rectangular matrices are m x k with
    m = (1+delta) k); theta and gamma steer the net argument; epsilon sets
    the subset-size threshold (1/2+epsilon) n; xi1, xi2 are the tail slacks.
    """

    p: float
    delta: float
    theta: float
    gamma: float
    epsilon: float
    xi1: float
    xi2: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0,1), got {self.p}")
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (0,1), got {self.theta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0,1], got {self.gamma}")
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0,1/2), got {self.epsilon}")
        if not (self.xi1 > 0.0 and self.xi2 > 0.0):
            raise ValueError(f"xi1, xi2 must be positive, got {self.xi1}, {self.xi2}")


@dataclass(frozen=True)
class ConstantsResult:
    """All derived constants at one parameter point, plus the bound k.

    k is the largest integer satisfying the defining inequality (0 when no
    integer does); feasible reports alpha > 0, beta > 0 and the union-bound
    condition.  d is the norm bound D entering r."""

    q: float
    t: float
    a1: float
    a2: float
    c: float
    alpha: float
    beta: float
    d: float
    r: float
    k: int
    feasible: bool
    params: BoundParams


def c_constant(p: float) -> float:
    """C = p^2 (1-p)^2 / (128 q^4)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0,1), got {p}")
    q = max(p, 1.0 - p)
    return (p * p * (1.0 - p) * (1.0 - p)) / (128.0 * q**4)


def tail_constants(p: float, delta: float) -> tuple[float, float, float]:
    """(t, a1, a2) for aspect slack delta; a1 = (18q/4) sqrt(...) as printed."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0,1), got {p}")
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    q = max(p, 1.0 - p)
    ratio = (2.0 + delta) / (1.0 + delta)
    root = math.sqrt(2.0 * ratio * math.log(9.0))
    t = 2.0 * q * root
    a1 = (18.0 * q / 4.0) * root
    a2 = 3.0 * ratio * math.log(9.0)
    return t, a1, a2


def alpha_beta(p: float, delta: float, theta: float, gamma: float) -> tuple[float, float]:
    """(alpha, beta) at this point; either may be nonpositive (infeasible)."""
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0,1), got {theta}")
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0,1], got {gamma}")
    _, a1, a2 = tail_constants(p, delta)
    c = c_constant(p)
    alpha = (1.0 - theta) * (2.0 / 3.0) * math.sqrt(p * (1.0 - p) * c / 3.0) - gamma * a1
    bracket = 1.0 + (1.0 - theta) ** 2 * (2.0 * math.log(1.0 - theta) - 1.0)
    beta = min(a2, (4.0 * c / 9.0) * bracket - math.log(3.0 / gamma) / (1.0 + delta))
    return alpha, beta


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2 (1-x), with H(0) = H(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy argument must lie in [0,1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _largest_k(p: float, epsilon: float, r: float) -> int:
    """Largest k with (1-p)^k < 1/2-eps and sqrt((1-p)^k) >= r (1/2-eps-(1-p)^k).

    Returns 0 when no positive integer qualifies.  On the domain the left
    side strictly decreases and the right side strictly increases with k,
    so the qualifying set is a single integer interval.
    """
    u = 0.5 - epsilon
    base = 1.0 - p
    if r <= 0.0 or u <= 0.0:
        return 0

    def holds(k: int) -> bool:
        wk = base**k
        return wk < u and math.sqrt(wk) >= r * (u - wk)

    # smallest k inside the domain (1-p)^k < u
    k_min = 1
    wk = base
    while wk >= u:
        wk *= base
        k_min += 1
        if k_min > _K_SEARCH_CAP:
            raise RuntimeError("k search exceeded iteration cap")
    # when any k qualifies, the largest one is at least 2 ln(1/(r u)) / ln(1/(1-p))
    if r * u < 1.0:
        estimate = int(2.0 * math.log(1.0 / (r * u)) / math.log(1.0 / base))
    else:
        estimate = 1
    k = max(estimate, k_min)
    if not holds(k):
        while k >= k_min and not holds(k):
            k -= 1
        return k if k >= k_min else 0
    while holds(k + 1):
        k += 1
        if k > _K_SEARCH_CAP:
            raise RuntimeError("k search exceeded iteration cap")
    return k


def feasibility(params: BoundParams) -> ConstantsResult:
    """Evaluate every constant at this point and test feasibility.

    Feasible means alpha > 0, beta > 0, and H(1/2+eps) strictly below
    min(beta (1/2+eps), xi1^2/32, xi2^2 (1/2+eps)/8).  The k reported is the
    largest integer satisfying the defining inequality at this point.
    """
    p = params.p
    q = max(p, 1.0 - p)
    t, a1, a2 = tail_constants(p, params.delta)
    c = c_constant(p)
    alpha, beta = alpha_beta(p, params.delta, params.theta, params.gamma)
    half = 0.5 + params.epsilon
    d = (
        2.0 * math.sqrt(p * (1.0 - p)) * (1.0 + math.sqrt(half))
        + params.xi1
        + params.xi2 * math.sqrt(half)
    )
    r = alpha * math.sqrt(half) / (2.0 * d)
    entropy_ok = binary_entropy(half) < min(
        beta * half, params.xi1**2 / 32.0, params.xi2**2 * half / 8.0
    )
    feasible = alpha > 0.0 and beta > 0.0 and entropy_ok
    k = _largest_k(p, params.epsilon, r) if alpha > 0.0 else 0
    return ConstantsResult(
        q=q, t=t, a1=a1, a2=a2, c=c, alpha=alpha, beta=beta, d=d, r=r,
        k=k, feasible=feasible, params=params,
    )


@dataclass(frozen=True)
class GridSpec:
    """Finite parameter ranges for the k search.

    gamma_fractions give gamma as a fraction of the largest value keeping
    alpha positive at the point's (p, delta, theta), which keeps alpha a
    fixed multiple of its ceiling instead of chasing a moving cancellation.
    epsilon_gaps give epsilon through u = 1/2 - epsilon; the union-bound
    condition needs u below ~3e-4, far outside an evenly spaced grid.
    """

    deltas: tuple[float, ...] = (999.0, 9_999.0, 99_999.0, 999_999.0)
    thetas: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    gamma_fractions: tuple[float, ...] = (0.05, 0.1, 0.25, 0.5)
    epsilon_gaps: tuple[float, ...] = (1e-3, 1e-4, 1e-5, 3e-6)
    xi1s: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0)
    xi2s: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0)

    def __post_init__(self) -> None:
        for name in ("deltas", "thetas", "gamma_fractions", "epsilon_gaps", "xi1s", "xi2s"):
            values = getattr(self, name)
            if not values:
                raise ValueError(f"grid range {name} is empty")
            if any(not v > 0.0 for v in values):
                raise ValueError(f"grid range {name} must be positive, got {values}")


def exceptional_bound_k(p: float, grid: GridSpec | None = None) -> ConstantsResult:
    """Largest k over all feasible grid points, ties by lexicographic order
    of (delta, theta, gamma, epsilon, xi1, xi2).

    Raises ValueError when p is out of range and RuntimeError when no grid
    point is feasible with a positive k.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0,1), got {p}")
    if grid is None:
        grid = GridSpec()
    best: ConstantsResult | None = None
    best_key: tuple | None = None
    for delta in grid.deltas:
        _, a1, _ = tail_constants(p, delta)
        c = c_constant(p)
        alpha_ceiling = (2.0 / 3.0) * math.sqrt(p * (1.0 - p) * c / 3.0)
        for theta in grid.thetas:
            gamma_max = alpha_ceiling * (1.0 - theta) / a1
            for frac in grid.gamma_fractions:
                gamma = frac * gamma_max
                for gap in grid.epsilon_gaps:
                    epsilon = 0.5 - gap
                    for xi1 in grid.xi1s:
                        for xi2 in grid.xi2s:
                            params = BoundParams(
                                p=p, delta=delta, theta=theta, gamma=gamma,
                                epsilon=epsilon, xi1=xi1, xi2=xi2,
                            )
                            res = feasibility(params)
                            if not res.feasible or res.k < 1:
                                continue
                            key = (-res.k, delta, theta, gamma, epsilon, xi1, xi2)
                            if best_key is None or key < best_key:
                                best, best_key = res, key
    if best is None:
        raise RuntimeError(f"no feasible grid point with a positive k at p={p}")
    return best


def kp_formula(p: float) -> int:
    """floor(1 / log2(1/(1-p))): the exceptional-vertex count bound."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0,1), got {p}")
    return math.floor(1.0 / math.log2(1.0 / (1.0 - p)))
