import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Tuple, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def loglog_fit(x, y) -> Tuple[float, float]:
    """Least-squares fit of ``log y = intercept + slope * log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or np.unique(x).size < 2:
        raise ValueError("log-log regression needs at least two distinct abscissae")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log regression needs strictly positive data")
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope), float(intercept)


def richardson(coarse: float, fine: float, order: float, ratio: float = 2.0) -> float:
    """Two-level extrapolation for an error expansion ``C * h**order``."""
    return fine + (fine - coarse) / (ratio**order - 1.0)


def richardson_three_level(
    values: Tuple[float, float, float],
    ratio: float = 2.0,
    order_bounds: Tuple[float, float] = (0.25, 4.0),
) -> Tuple[float, float]:
    """
    Extrapolate from three successively refined values with the order
    estimated from their differences. Returns ``(value, order)``; order is
    NaN when the differences do not contract monotonically.
    """
    coarse, middle, fine = values
    d1, d2 = coarse - middle, middle - fine
    if d2 == 0.0 or d1 == 0.0 or d1 * d2 < 0.0 or abs(d2) >= abs(d1):
        return fine, math.nan
    order = math.log(abs(d1 / d2)) / math.log(ratio)
    order = min(max(order, order_bounds[0]), order_bounds[1])
    return richardson(middle, fine, order, ratio), order


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Map ``func`` over ``items`` on a thread pool; results keep item order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
