"""Kernel-weighted local polynomial regression fitted on one side of a cutoff.

The boundary fit is the estimation primitive everywhere: order 1 for the
level estimates entering the ratio estimator, and whatever order callers
need for diagnostics.  Side convention: "plus" takes observations with
x >= c (ties at the cutoff go to the plus side), "minus" takes x < c.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptySide, SingularDesign
from .kernels import KernelSpec, eval_kernel

# relative singular-value floor below which the weighted design is declared rank-deficient
_SV_RTOL = 1e-10


@dataclass(frozen=True)
class Sample:
    """Observations (x_i, y_i, d_i) around a cutoff c.

    Arrays are stored read-only; every d_i must be 0 or 1 and both sides
    of the cutoff must be populated.
    """

    x: np.ndarray
    y: np.ndarray
    d: np.ndarray
    c: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        d = np.asarray(self.d, dtype=float)
        if not (x.ndim == y.ndim == d.ndim == 1):
            raise ValueError("x, y, d must be one-dimensional")
        n = x.size
        if y.size != n or d.size != n:
            raise ValueError("x, y, d must share one length")
        if n < 2:
            raise ValueError("need at least two observations")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.all(np.isfinite(d))):
            raise ValueError("all values must be finite")
        if not np.all((d == 0.0) | (d == 1.0)):
            raise ValueError("treatment indicator must be 0 or 1")
        if not np.any(x >= self.c) or not np.any(x < self.c):
            raise ValueError("need observations on both sides of the cutoff")
        for arr, name in ((x, "x"), (y, "y"), (d, "d")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.x.size

    def side_mask(self, side: str) -> np.ndarray:
        if side == "plus":
            return self.x >= self.c
        if side == "minus":
            return self.x < self.c
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")

    def response(self, which: str) -> np.ndarray:
        if which == "Y":
            return self.y
        if which == "D":
            return self.d
        raise ValueError(f"response must be 'Y' or 'D', got {which!r}")


@dataclass(frozen=True)
class BoundaryFit:
    """Result of a one-sided weighted polynomial fit.

    coefficients[k] estimates m^(k)(c) / k!; coefficients[0] is the fitted
    value at the cutoff.
    """

    coefficients: np.ndarray
    side: str
    h: float
    effective_n: int

    @property
    def value(self) -> float:
        return float(self.coefficients[0])


def fit_boundary(
    sample: Sample,
    response: str,
    side: str,
    h: float,
    order: int = 1,
    kernel: KernelSpec = KernelSpec(),
) -> BoundaryFit:
    """Weighted least squares of the response on powers of (x - c), one side only.

    Weights are K((x_i - c)/h); only observations with strictly positive
    weight enter the solve, so points outside the bandwidth have no
    influence at all.

    Raises
    ------
    EmptySide
        If the requested side holds no observations.
    SingularDesign
        If fewer than order+1 distinct x values carry positive weight, or
        the weighted design is numerically rank-deficient.
    """
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    if order < 1:
        raise ValueError("order must be at least 1")

    mask = sample.side_mask(side)
    if not np.any(mask):
        raise EmptySide(f"no observations on the {side} side of c={sample.c}")

    xs = sample.x[mask] - sample.c
    ys = sample.response(response)[mask]
    w = eval_kernel(kernel, xs / h)
    keep = w > 0.0
    xs, ys, w = xs[keep], ys[keep], w[keep]

    if np.unique(xs).size < order + 1:
        raise SingularDesign(
            f"{np.unique(xs).size} distinct x values with positive weight; "
            f"order {order} needs {order + 1}"
        )

    design = np.vander(xs, order + 1, increasing=True)
    sw = np.sqrt(w)
    coef, _, rank, sv = np.linalg.lstsq(design * sw[:, None], ys * sw, rcond=_SV_RTOL)
    if rank < order + 1 or sv[-1] < _SV_RTOL * sv[0]:
        raise SingularDesign(
            f"weighted design is rank-deficient (singular values {sv[0]:.3e}..{sv[-1]:.3e})"
        )
    return BoundaryFit(coefficients=coef, side=side, h=float(h), effective_n=int(xs.size))


def estimate_level(
    sample: Sample,
    response: str,
    side: str,
    h: float,
    kernel: KernelSpec = KernelSpec(),
) -> float:
    """Local linear level estimate at the cutoff: coefficient 0 of an order-1 fit."""
    return fit_boundary(sample, response, side, h, order=1, kernel=kernel).value
