"""One-dimensional bracketing and minimization helpers shared by the solvers."""

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

INV_PHI = 2.0 / (1.0 + math.sqrt(5.0))


@dataclass(frozen=True)
class GoldenSectionResult:
    x: float
    fx: float
    evaluations: int
    converged: bool


def golden_section(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rtol: float = 1e-10,
    max_iter: int = 200,
) -> GoldenSectionResult:
    """Minimize a unimodal function on [lo, hi] by golden-section search.

    Stops when the bracket width falls below rtol times the larger endpoint
    magnitude. The returned point is the better of the two interior points.
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    evaluations = 2
    converged = False
    for _ in range(max_iter):
        if hi - lo <= rtol * max(abs(lo), abs(hi), np.finfo(float).tiny):
            converged = True
            break
        if f2 > f1:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        evaluations += 1
    if f1 <= f2:
        return GoldenSectionResult(x1, f1, evaluations, converged)
    return GoldenSectionResult(x2, f2, evaluations, converged)


def local_minima(values: Sequence[float]) -> List[int]:
    """Indices of interior grid points that are no larger than both neighbours.

    Endpoints count when they are below their single neighbour.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    if n == 0:
        return []
    if n == 1:
        return [0]
    minima = []
    if v[0] < v[1]:
        minima.append(0)
    for i in range(1, n - 1):
        if v[i] <= v[i - 1] and v[i] <= v[i + 1] and (v[i] < v[i - 1] or v[i] < v[i + 1]):
            minima.append(i)
    if v[-1] < v[-2]:
        minima.append(n - 1)
    return minima


def bracket_around(grid: Sequence[float], index: int) -> Tuple[float, float]:
    """Neighbouring grid values around a scan minimum."""
    g = np.asarray(grid, dtype=float)
    return float(g[max(index - 1, 0)]), float(g[min(index + 1, g.size - 1)])


def first_sign_change(values: np.ndarray) -> int:
    """Index i of the first pair (i, i+1) with a sign change or zero, -1 if none."""
    v = np.asarray(values, dtype=float)
    crossing = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) <= 0)[0]
    return int(crossing[0]) if crossing.size else -1
