"""
Bernstein inequality in the amalgam norm and good/bad cell classification.

A cell I_k is good when ||u^{(m)}||_{L^inf(I_k)} <= (AN)^m ||u||_{L^inf(I_k)}
for every 1 <= m <= m_cap. On a bad cell some m fails, which gives

    sum_bad ||u||^2_{L^inf(I_k)}
        <= sum_{m=1}^{m_cap} (AN)^{-2m} ||u^{(m)}||^2_{l^2 L^inf},

and with A = 2C the right side is at most a third of ||u||^2. Orders past
m_cap are covered by the geometric tail certificate (C/A)^{2 m_cap} / (1 - (C/A)^2).
"""

import math
from dataclasses import dataclass
from typing import Any, Final

import numpy as np
import structlog
from numpy.typing import NDArray

from obslab.bandlimited.signal import DEFAULT_WINDOW, BandLimited, random_bandlimited
from obslab.errors import MassViolation, ParamError
from obslab.fitting import ConstantFit, fit_constant
from obslab.parallel import parallel_map, trial_rng

logger = structlog.get_logger(__name__)

M_CAP: Final = 12
MAX_BERNSTEIN_ORDER: Final = 8
BAD_MASS_LIMIT: Final = 0.5
SQRT3: Final = math.sqrt(3.0)
# bound on the norm share left to derivative orders past m_cap
TAIL_CERT_MAX: Final = 1e-6


def bernstein_ratio(u: BandLimited, m: int) -> float:
    """(||u^{(m)}|| / ||u||)^{1/m} / N in the amalgam norm."""
    return (u.amalgam_norm(m) / u.amalgam_norm()) ** (1 / m) / u.N


def bernstein_check(
    N: float,
    m_max: int,
    trials: int,
    seed: int,
    W: int = DEFAULT_WINDOW,
) -> tuple[list[dict[str, Any]], ConstantFit]:
    """Smallest C with ||d^m u|| <= (CN)^m ||u|| over trials and 1 <= m <= m_max."""
    if not 1 <= m_max <= MAX_BERNSTEIN_ORDER:
        msg = f"m_max must lie in [1, {MAX_BERNSTEIN_ORDER}], got {m_max}"
        raise ValueError(msg)

    def run(trial: int) -> list[dict[str, Any]]:
        u = random_bandlimited(N, trial_rng(seed, trial), W)
        return [
            {"trial": trial, "N": N, "m": m, "required_C": bernstein_ratio(u, m)}
            for m in range(1, m_max + 1)
        ]

    rows = [row for chunk in parallel_map(run, range(trials)) for row in chunk]
    fit = fit_constant([r["required_C"] for r in rows])
    logger.info("bernstein_fit", N=N, m_max=m_max, **fit.to_dict())
    return rows, fit


def cell_tail_certificate(C: float, A: float, m_cap: int = M_CAP) -> float:
    """
    (C/A)^{2 m_cap} / (1 - (C/A)^2), the share of the norm that derivative
    orders beyond m_cap can carry on bad cells.

    Raises:
        ParamError: A below sqrt(3) C, or a certificate of TAIL_CERT_MAX or more
    """
    if C <= 0 or A < SQRT3 * C:
        msg = f"cell threshold A={A} must be at least sqrt(3) C with C={C} > 0"
        raise ParamError(msg)
    ratio = (C / A) ** 2
    certificate = ratio**m_cap / (1 - ratio)
    if certificate >= TAIL_CERT_MAX:
        msg = f"tail certificate {certificate:.3e} for A/C={A / C:.4g}, m_cap={m_cap}"
        raise ParamError(msg)
    return certificate


@dataclass(frozen=True)
class CellClassification:
    """
    Attributes:
        good: mask of good cells
        bad_mass_fraction: sum_bad ||u||^2 / ||u||^2_{l^2 L^inf}
        chain_lhs: sum_bad ||u||^2_{L^inf(I_k)}
        chain_rhs: sum_m (AN)^{-2m} ||u^{(m)}||^2_{l^2 L^inf}
        tail_certificate: cell_tail_certificate when the Bernstein C was given
    """

    good: NDArray[np.bool_]
    bad_mass_fraction: float
    chain_lhs: float
    chain_rhs: float
    tail_certificate: float | None = None

    @property
    def bad(self) -> NDArray[np.bool_]:
        return ~self.good

    @property
    def chain_holds(self) -> bool:
        return self.chain_lhs <= self.chain_rhs * (1 + 1e-12) + 1e-300


def classify_cells(
    u: BandLimited,
    A: float,
    m_cap: int = M_CAP,
    *,
    bernstein_C: float | None = None,
) -> CellClassification:
    """
    Split the cells of u into good and bad at threshold A. With the fitted
    Bernstein constant, A is first checked against it.
    """
    certificate = (
        None if bernstein_C is None else cell_tail_certificate(bernstein_C, A, m_cap)
    )
    base = u.cell_sups()
    good = np.ones(base.size, dtype=bool)
    chain_rhs = 0.0
    for m in range(1, m_cap + 1):
        sups = u.cell_sups(m)
        scale = (A * u.N) ** m
        good &= sups <= scale * base * (1 + 1e-12)
        chain_rhs += float(np.sum(sups**2)) / scale**2
    total = float(np.sum(base**2))
    chain_lhs = float(np.sum(base[~good] ** 2))
    fraction = chain_lhs / total if total > 0 else 0.0
    if fraction > BAD_MASS_LIMIT:
        logger.error("bad_mass_exceeded", fraction=fraction, A=A, N=u.N)
        msg = f"bad cells carry {fraction:.3f} of the mass with A={A}"
        raise MassViolation(msg)
    return CellClassification(good, fraction, chain_lhs, chain_rhs, certificate)
