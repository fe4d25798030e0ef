"""Checked adaptive quadrature on top of QUADPACK."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
import logging
import math

from scipy import integrate

from .const import QUAD_ACCEPT_RTOL, QUAD_LIMIT
from .exceptions import QuadratureError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadResult:
    """Integral estimate with its absolute error bound."""

    value: float
    error: float
    evaluations: int = 0


def checked_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    *,
    epsabs: float,
    epsrel: float,
    limit: int = QUAD_LIMIT,
    what: str = "integral",
) -> QuadResult:
    """Integrate func over [a, b] and raise when the bound is not met.

    QUADPACK sometimes flags roundoff although the returned error bound is
    already tiny; those results are accepted as long as the bound stays
    within QUAD_ACCEPT_RTOL of the estimate.
    """
    result = integrate.quad(
        func, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1
    )
    value, error, info = float(result[0]), float(result[1]), result[2]
    evaluations = int(info.get("neval", 0))

    if not math.isfinite(value) or not math.isfinite(error):
        raise QuadratureError(f"{what} is not finite", value, error)

    if len(result) > 3:
        allowed = max(epsabs, epsrel * abs(value), QUAD_ACCEPT_RTOL * abs(value))
        if error > allowed:
            raise QuadratureError(f"{what} did not converge", value, error)
        _LOGGER.debug(
            "%s accepted despite QUADPACK warning: %s", what, str(result[3]).strip()
        )

    return QuadResult(value, error, evaluations)
