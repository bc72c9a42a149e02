"""Closed-form explicit bounds on zeta zeros and on zeta'/zeta.

All logarithms are natural. The constants that the threshold computation is
sensitive to (density constant A, zero-free constant c, log exponent base L)
live in :class:`BoundParams` so they can be varied for what-if tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BoundParams:
    A: float = 9.7
    c_ford: float = 57.54
    L: float = 5.0
    dusart_lo: float = 0.9999
    dusart_hi1: float = 1.00007
    dusart_hi2: float = 1.78
    delta_rs: float = 28_314_000.0

    def __post_init__(self):
        for name in ("A", "c_ford", "dusart_lo", "dusart_hi1", "dusart_hi2", "delta_rs"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.L < 2:
            raise DomainError("L must be >= 2")

    def with_(self, **changes) -> "BoundParams":
        return replace(self, **changes)


DEFAULT_PARAMS = BoundParams()


def n_upper(T: float) -> float:
    """Upper bound T log T / (2 pi) for the zero count N(T), T > 15."""
    if not T > 15:
        raise DomainError("zero-count bound needs T > 15")
    return T * math.log(T) / TWO_PI


def density_bound(sigma: float, T: float, params: BoundParams = DEFAULT_PARAMS) -> float:
    """Zero-density bound A (3T)^(8(1-sigma)/3) log^(L-2 sigma) T + 103 log^2 T.

    Valid for T >= 2000 and sigma >= 0.52.
    """
    if not (T >= 2000 and sigma >= 0.52):
        raise DomainError("density bound needs T >= 2000 and sigma >= 0.52")
    lt = math.log(T)
    main = params.A * math.exp(8.0 * (1.0 - sigma) / 3.0 * math.log(3.0 * T) + (params.L - 2.0 * sigma) * math.log(lt))
    return main + 103.0 * lt * lt


def zero_free_nu(T: float, params: BoundParams = DEFAULT_PARAMS) -> float:
    """Width nu(T) of the zero-free strip sigma >= 1 - nu(T) up to height T."""
    if not T >= 3:
        raise DomainError("zero-free region needs T >= 3")
    lt = math.log(T)
    return 1.0 / (params.c_ford * lt ** (2.0 / 3.0) * math.log(lt) ** (1.0 / 3.0))


def zetaprime_over_zeta_left_bound(s: complex) -> float:
    """9 + log|s| bound on |zeta'/zeta| for Re s <= -1.

    The contour must keep s at distance >= 1 from the odd negative integers;
    that is the caller's responsibility.
    """
    s = complex(s)
    if s.real > -1:
        raise DomainError("left half-plane bound needs Re s <= -1")
    return 9.0 + math.log(abs(s))


def zetaprime_over_zeta_strip_bound(t: float) -> float:
    """log^2 t + 20 log t, valid at a suitably shifted ordinate in (t-1, t+1)."""
    if not t > 50:
        raise DomainError("strip bound needs t > 50")
    lt = math.log(t)
    return lt * lt + 20.0 * lt


def choicet_bound(t: float) -> float:
    """log^2 t + log t bound on the near-zero sum at the shifted ordinate."""
    if not t > 50:
        raise DomainError("shifted-ordinate bound needs t > 50")
    lt = math.log(t)
    return lt * lt + lt
