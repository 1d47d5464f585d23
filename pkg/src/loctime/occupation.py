"""
Occupation-formula residual.

For a test function f the time integral sum_i dt * f(phi(t_i)) over the
samples before t must match the space integral dx^d * sum_bins f(centre) *
L(bin, t) of the local-time field. Test functions are created by name
through get_test_function so that configurations can list them.
"""

import logging
from typing import Callable, Dict, Union

import numpy as np

from ..core.errors import ValidationError
from .field import LocalTimeField, PathLike, path_arrays


logger = logging.getLogger(__name__)


# f maps points of shape (m, d) to values of shape (m,)
TestFunction = Callable[[np.ndarray], np.ndarray]


def _one() -> TestFunction:
    return lambda x: np.ones(len(x))


def _coordinate(k: int = 0) -> TestFunction:
    def f(x: np.ndarray) -> np.ndarray:
        if k >= x.shape[1]:
            raise ValidationError(f"coordinate index {k} out of range for d={x.shape[1]}")
        return x[:, k]
    return f


def _indicator(a: float = 0.0, b: float = 1.0) -> TestFunction:
    if not a < b:
        raise ValidationError(f"indicator needs a < b, got a={a}, b={b}")
    # indicator of the box [a, b)^d
    return lambda x: np.all((x >= a) & (x < b), axis=1).astype(float)


def _gaussian_bump(center: float = 0.0, width: float = 0.1) -> TestFunction:
    if width <= 0:
        raise ValidationError(f"gaussian_bump width must be positive, got {width}")
    return lambda x: np.exp(-np.sum((x - center) ** 2, axis=1) / (2.0 * width ** 2))


TEST_FUNCTIONS: Dict[str, Callable[..., TestFunction]] = {
    "one": _one,
    "coordinate": _coordinate,
    "indicator": _indicator,
    "gaussian_bump": _gaussian_bump,
}


def get_test_function(name: str, **params) -> TestFunction:
    """
    Factory function to get a built-in test function by name.

    Args:
        name: "one", "coordinate" (k), "indicator" (a, b) or "gaussian_bump" (center, width)
        **params: Parameters of the test function

    Returns:
        Vectorized test function

    Raises:
        ValidationError: If name is not recognized or the parameters are invalid
    """
    if name not in TEST_FUNCTIONS:
        raise ValidationError(
            f"Unknown test function: {name}. "
            f"Available test functions: {', '.join(TEST_FUNCTIONS.keys())}"
        )
    try:
        return TEST_FUNCTIONS[name](**params)
    except TypeError as e:
        raise ValidationError(f"Invalid parameters for test function '{name}': {e}")


def occupation_residual(path: PathLike, field: LocalTimeField,
                        test_fn: Union[str, TestFunction], t: float) -> float:
    """Absolute difference of the two sides of the occupation formula at time t.

    Args:
        path: Path the field was built from.
        field: Its local-time field.
        test_fn: Built-in name or a vectorized callable.
        t: Time cut point of the field.

    Returns:
        |sum_{i<k} dt f(phi(t_i)) - dx^d sum_bins f(centre) L(bin, t)|.

    Raises:
        ValidationError: If t is not on the field's t_grid.
    """
    f = get_test_function(test_fn) if isinstance(test_fn, str) else test_fn
    k = field.time_index(t)
    _, values = path_arrays(path)
    time_side = field.dt * float(np.sum(f(values[:k]))) if k > 0 else 0.0
    space_side = field.cell_volume * float(np.dot(f(field.cell_centers()), field.column(t)))
    residual = abs(time_side - space_side)
    logger.debug(f"occupation residual at t={t}: {residual:.3e}")
    return residual
