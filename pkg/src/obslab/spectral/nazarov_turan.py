"""
Turan-type bound for exponential polynomials p(x) = sum c_k e^{mu_k x}:

    sup_I|p| <= e^{|I| max|Re mu_k|} (C |I| / |E|)^{n-1} sup_E|p|.
"""

import math
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from obslab.errors import ParamError
from obslab.fitting import ConstantFit, fit_constant
from obslab.fractal import IntervalUnion
from obslab.parallel import parallel_map, trial_rng

logger = structlog.get_logger(__name__)

GRID_POINTS: Final = 4096


@dataclass(frozen=True, eq=False)
class ExponentialPolynomial:
    """
    Attributes:
        coeffs: complex c_k
        exponents: complex mu_k
    """

    coeffs: NDArray[np.complex128]
    exponents: NDArray[np.complex128]

    @property
    def order(self) -> int:
        return int(self.exponents.size)

    def __call__(self, x: ArrayLike) -> NDArray[np.complex128]:
        x_arr = np.asarray(x, dtype=float)
        return np.exp(x_arr[..., None] * self.exponents) @ self.coeffs


@dataclass(frozen=True)
class TuranCheck:
    """
    Attributes:
        n: order
        ln_ratio: ln(sup_I|p| / sup_E|p|)
        ln_growth: |I| max|Re mu|
        required_C: smallest C passing this instance
    """

    n: int
    ln_ratio: float
    ln_growth: float
    required_C: float


def _grid(lo: float, hi: float, step: float) -> NDArray[np.float64]:
    return np.linspace(lo, hi, max(2, math.ceil((hi - lo) / step) + 1))


def nazarov_turan_check(
    p: ExponentialPolynomial, interval: tuple[float, float], e_set: IntervalUnion
) -> TuranCheck:
    a, b = interval
    length = b - a
    measure = e_set.total_mass
    if measure <= 0:
        msg = "E must have positive length"
        raise ParamError(msg)
    step = length / (GRID_POINTS - 1)
    sup_i = float(np.abs(p(_grid(a, b, step))).max())
    e_grid = np.concatenate(
        [_grid(lo, hi, step) for lo, hi in zip(e_set.lefts, e_set.rights, strict=True)]
    )
    sup_e = float(np.abs(p(e_grid)).max())
    ln_ratio = math.log(sup_i) - math.log(sup_e)
    ln_growth = length * float(np.abs(p.exponents.real).max())
    n = p.order
    if n == 1:
        required = 0.0 if ln_ratio <= ln_growth + 1e-9 else math.inf
    else:
        required = math.exp((ln_ratio - ln_growth) / (n - 1)) * measure / length
    return TuranCheck(n, ln_ratio, ln_growth, required)


def random_exponential_polynomial(
    n: int, re_max: float, im_max: float, rng: np.random.Generator
) -> ExponentialPolynomial:
    exponents = rng.uniform(-re_max, re_max, n) + 1j * rng.uniform(-im_max, im_max, n)
    coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return ExponentialPolynomial(coeffs, exponents)


def nazarov_turan_experiment(
    n: int,
    trials: int,
    seed: int,
    e_set: IntervalUnion,
    interval: tuple[float, float] = (0.0, 1.0),
    re_max: float = 10.0,
    im_max: float = 20.0,
) -> tuple[list[dict[str, Any]], ConstantFit]:
    def run(trial: int) -> dict[str, Any]:
        p = random_exponential_polynomial(n, re_max, im_max, trial_rng(seed, trial))
        check = nazarov_turan_check(p, interval, e_set)
        return {
            "trial": trial,
            "n": n,
            "ln_ratio": check.ln_ratio,
            "ln_growth": check.ln_growth,
            "required_C": check.required_C,
        }

    rows = parallel_map(run, range(trials))
    fit = fit_constant([r["required_C"] for r in rows])
    logger.info("nazarov_turan_fit", n=n, **fit.to_dict())
    return rows, fit
