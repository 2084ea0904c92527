"""Point estimation of the jump ratio at the cutoff.

Four order-1 boundary fits (outcome and treatment, each side) produce
the numerator and denominator jumps; the estimate is their ratio.  The
sharp variant keeps the numerator and fixes the denominator at 1.
"""

from dataclasses import dataclass

from .errors import DenominatorNearZero
from .kernels import KernelSpec
from .local_poly import Sample, fit_boundary

# below this |tauD| the ratio is reported as invalid, not as a huge number
_MIN_TAU_D = 1e-6


@dataclass(frozen=True)
class FrdEstimate:
    """Jump-ratio estimate and the pieces it is built from."""

    tau: float
    tauY: float
    tauD: float
    h_plus: float
    h_minus: float
    n_plus: int
    n_minus: int


def frd_estimate(
    sample: Sample,
    h_plus: float,
    h_minus: float,
    kernel: KernelSpec = KernelSpec(),
) -> FrdEstimate:
    """Ratio of the outcome jump to the treatment jump at the cutoff.

    Each side uses its own bandwidth for both responses.

    Raises
    ------
    DenominatorNearZero
        If |tauD| < 1e-6; the ratio would be numerically meaningless.
    """
    fits = {
        (resp, side): fit_boundary(
            sample, resp, side, h_plus if side == "plus" else h_minus, order=1, kernel=kernel
        )
        for resp in ("Y", "D")
        for side in ("plus", "minus")
    }
    tau_y = fits["Y", "plus"].value - fits["Y", "minus"].value
    tau_d = fits["D", "plus"].value - fits["D", "minus"].value
    if abs(tau_d) < _MIN_TAU_D:
        raise DenominatorNearZero(f"|tauD| = {abs(tau_d):.2e} < {_MIN_TAU_D:.0e}")
    return FrdEstimate(
        tau=tau_y / tau_d,
        tauY=tau_y,
        tauD=tau_d,
        h_plus=h_plus,
        h_minus=h_minus,
        n_plus=fits["Y", "plus"].effective_n,
        n_minus=fits["Y", "minus"].effective_n,
    )


def sharp_estimate(
    sample: Sample,
    h_plus: float,
    h_minus: float,
    kernel: KernelSpec = KernelSpec(),
) -> float:
    """Outcome jump alone, treating the design as sharp (denominator 1)."""
    plus = fit_boundary(sample, "Y", "plus", h_plus, order=1, kernel=kernel)
    minus = fit_boundary(sample, "Y", "minus", h_minus, order=1, kernel=kernel)
    return float(plus.value - minus.value)
