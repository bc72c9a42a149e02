"""Prime-side ground truth: von Mangoldt, Chebyshev psi/theta, interval scans.

Everything here is exact up to floating-point summation of logarithms:
prime decisions come from a segmented sieve of Eratosthenes below the sieve
ceiling and from a deterministic Miller-Rabin witness set above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import CeilingExceeded, DomainError
from .summation import EPS, NeumaierSum, pairwise_error_bound

SIEVE_CEILING = 10**9
SEGMENT_SIZE = 1 << 20

# (bound, bases): every n < bound is decided correctly by the listed bases
_MR_TABLE = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (25_326_001, (2, 3, 5)),
    (3_215_031_751, (2, 3, 5, 7)),
    (2_152_302_898_747, (2, 3, 5, 7, 11)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318_665_857_834_031_151_167_461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (3_317_044_064_679_887_385_961_981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)
PRIMALITY_CEILING = _MR_TABLE[-1][0] - 1

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
_SMALL_PRODUCT = math.prod(_SMALL_PRIMES)


# ---------------------------------------------------------------- integers

def iroot(n: int, k: int) -> int:
    """Largest integer r with r**k <= n (pure integer Newton iteration)."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    r = 1 << -(-n.bit_length() // k)  # 2**ceil(bits/k) >= true root
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality test, valid for n <= PRIMALITY_CEILING."""
    if n < 2:
        return False
    if n <= _SMALL_PRIMES[-1]:
        return n in _SMALL_PRIMES
    if math.gcd(n, _SMALL_PRODUCT) != 1:
        return False
    if n < 97 * 97:
        return True
    if n > PRIMALITY_CEILING:
        raise CeilingExceeded(f"{n} is above the deterministic primality ceiling {PRIMALITY_CEILING}")
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for bound, bases in _MR_TABLE:
        if n < bound:
            return all(_mr_round(n, d, s, a) for a in bases)
    raise AssertionError("unreachable")


def von_mangoldt(n: int) -> float:
    """log p if n = p**m for a prime p, otherwise 0."""
    n = int(n)
    if n < 1:
        raise DomainError("von_mangoldt is defined for n >= 1")
    if n == 1:
        return 0.0
    # scanning exponents downward, the first exact root that is prime is p
    for k in range(n.bit_length(), 0, -1):
        r = iroot(n, k)
        if r >= 2 and r**k == n and is_prime(r):
            return math.log(r)
    return 0.0


# ------------------------------------------------------------------- sieve

def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit (plain sieve, limit up to a few 10**7)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def segmented_primes(lo: int, hi: int, segment_size: int = SEGMENT_SIZE) -> Iterator[np.ndarray]:
    """Yield ascending arrays of the primes in [lo, hi], one per segment."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi < lo:
        return
    base = small_primes(math.isqrt(hi))
    for start in range(lo, hi + 1, segment_size):
        stop = min(start + segment_size, hi + 1)
        seg = np.ones(stop - start, dtype=bool)
        for p in base.tolist():
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            seg[first - start :: p] = False
        yield np.flatnonzero(seg).astype(np.int64) + start


@dataclass(frozen=True)
class PrimeRange:
    lo: int
    hi: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)


def primes_in_range(lo: int, hi: int, ceiling: int = SIEVE_CEILING) -> PrimeRange:
    if lo < 2 or hi < lo:
        raise DomainError("need 2 <= lo <= hi")
    if hi > ceiling:
        raise CeilingExceeded(f"hi={hi} above sieve ceiling {ceiling}")
    chunks = list(segmented_primes(lo, hi))
    primes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return PrimeRange(lo, hi, primes)


# --------------------------------------------------------------- Chebyshev

@dataclass(frozen=True)
class ChebyshevEval:
    x: float
    psi: float
    theta: float
    error_bound: float = 0.0

    @property
    def gap(self) -> float:
        return self.psi - self.theta


def _floor(x) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, float) and not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    return math.floor(x)


def prime_power_gap(x) -> float:
    """Sum of log p over proper prime powers p**r <= x, r >= 2 (psi - theta)."""
    n = _floor(x)
    if n < 4:
        return 0.0
    acc = NeumaierSum()
    for r in range(2, n.bit_length() + 1):
        root = iroot(n, r)
        if root < 2:
            break
        ps = small_primes(root)
        if ps.size:
            acc.add(float(np.log(ps.astype(float)).sum()))
    return acc.value


def chebyshev_many(xs: Sequence, ceiling: int = SIEVE_CEILING,
                   segment_size: int = SEGMENT_SIZE) -> list[ChebyshevEval]:
    """psi and theta at every x in xs with a single sieve sweep."""
    xs = list(xs)
    if not xs:
        return []
    floors = [_floor(x) for x in xs]
    if min(floors) < 0 and any(x < 0 for x in xs):
        raise DomainError("x must be >= 0")
    top = max(floors)
    if top > ceiling:
        raise CeilingExceeded(f"x={top} above sieve ceiling {ceiling}")
    order = sorted(range(len(xs)), key=lambda i: floors[i])
    theta_at: dict[int, tuple[float, float]] = {}
    acc = NeumaierSum()
    err = 0.0
    q = 0
    for seg in segmented_primes(2, max(top, 2), segment_size):
        logs = np.log(seg.astype(float))
        prefix = np.cumsum(logs)
        seg_hi = int(seg[-1]) if seg.size else 0
        while q < len(order) and floors[order[q]] < seg_hi:
            n = floors[order[q]]
            k = int(np.searchsorted(seg, n, side="right"))
            partial = float(prefix[k - 1]) if k else 0.0
            theta_at[n] = (acc.value + partial, err + k * EPS * abs(partial))
            q += 1
        acc.add(float(logs.sum()))
        err += pairwise_error_bound(logs)
    for i in order[q:]:
        theta_at[floors[i]] = (acc.value, err)
    out = []
    for x, n in zip(xs, floors):
        th, th_err = theta_at.get(n, (0.0, 0.0))
        if n < 2:
            th, th_err = 0.0, 0.0
        gap = prime_power_gap(n)
        bound = th_err + 2 * EPS * (th + gap) + 4 * EPS * abs(th)
        out.append(ChebyshevEval(float(x), th + gap, th, bound))
    return out


def chebyshev(x, ceiling: int = SIEVE_CEILING) -> ChebyshevEval:
    return chebyshev_many([x], ceiling)[0]


def psi(x, ceiling: int = SIEVE_CEILING) -> float:
    """Chebyshev psi(x) = sum of von_mangoldt(n) for n <= x."""
    if x < 0:
        raise DomainError("psi needs x >= 0")
    return chebyshev(x, ceiling).psi


def theta(x, ceiling: int = SIEVE_CEILING) -> float:
    """Chebyshev theta(x) = sum of log p over primes p <= x."""
    if x < 0:
        raise DomainError("theta needs x >= 0")
    return chebyshev(x, ceiling).theta


class DusartCheck(NamedTuple):
    gap: float
    lower_ok: bool
    upper_ok: bool


DUSART_LO = 0.9999
DUSART_HI1 = 1.00007
DUSART_HI2 = 1.78


def psi_theta_gap_check(x, ceiling: int = SIEVE_CEILING) -> DusartCheck:
    """Compare psi(x) - theta(x) with 0.9999 sqrt(x) and 1.00007 sqrt(x) + 1.78 x**(1/3)."""
    if x < 121:
        raise DomainError("the psi - theta bounds hold for x >= 121")
    if _floor(x) > ceiling:
        raise CeilingExceeded(f"x={x} above sieve ceiling {ceiling}")
    gap = prime_power_gap(x)
    return _dusart_flags(float(x), gap)


def _dusart_flags(x: float, gap: float) -> DusartCheck:
    lower = DUSART_LO * math.sqrt(x)
    upper = DUSART_HI1 * math.sqrt(x) + DUSART_HI2 * x ** (1.0 / 3.0)
    return DusartCheck(gap, gap > lower, gap < upper)


def psi_theta_gap_many(xs: Sequence[float], ceiling: int = SIEVE_CEILING) -> list[DusartCheck]:
    """Vectorised psi_theta_gap_check over many x (one prime-power table)."""
    xs = [float(x) for x in xs]
    if not xs:
        return []
    if min(xs) < 121:
        raise DomainError("the psi - theta bounds hold for x >= 121")
    top = _floor(max(xs))
    if top > ceiling:
        raise CeilingExceeded(f"x={top} above sieve ceiling {ceiling}")
    values, weights = [], []
    for p in small_primes(math.isqrt(top)).tolist():
        lp = math.log(p)
        q = p * p
        while q <= top:
            values.append(q)
            weights.append(lp)
            q *= p
    order = np.argsort(values, kind="stable")
    v = np.asarray(values, dtype=np.int64)[order]
    w = np.asarray(weights)[order]
    cum = np.concatenate([[0.0], np.cumsum(w)])
    idx = np.searchsorted(v, np.floor(xs).astype(np.int64), side="right")
    return [_dusart_flags(x, float(cum[i])) for x, i in zip(xs, idx)]


# -------------------------------------------------------- interval scanning

@dataclass(frozen=True)
class GapCertificate:
    x: float
    h: float
    witness: int | None
    status: str  # "found" | "exhausted"
    lo: int = 0
    hi: int = 0
    n: int | None = None

    @property
    def found(self) -> bool:
        return self.status == "found"


def _first_prime(lo: int, hi: int) -> int | None:
    if lo <= 2 <= hi:
        return 2
    n = max(lo, 3) | 1
    while n <= hi:
        if is_prime(n):
            return n
        n += 2
    return None


def prime_in_interval(x, h) -> GapCertificate:
    """Smallest prime p with x < p <= x + h, decided deterministically."""
    if x < 2:
        raise DomainError("prime_in_interval needs x >= 2")
    if h <= 0:
        raise DomainError("prime_in_interval needs h > 0")
    xf, hf = Fraction(x), Fraction(h)
    lo = math.floor(xf) + 1
    hi = math.floor(xf + hf)
    if hi > PRIMALITY_CEILING:
        raise CeilingExceeded(f"x + h = {float(xf + hf):.4g} above primality ceiling")
    w = _first_prime(lo, hi)
    return GapCertificate(float(x), float(h), w, "found" if w is not None else "exhausted", lo, hi)


def cube_gap_scan(n_lo: int, n_hi: int, m: int = 3) -> list[GapCertificate]:
    """One certificate per n in [n_lo, n_hi] for a prime in (n**m, (n+1)**m)."""
    if n_lo < 1 or n_hi < n_lo:
        raise DomainError("need 1 <= n_lo <= n_hi")
    if m < 1:
        raise DomainError("exponent m must be >= 1")
    if (n_hi + 1) ** m > PRIMALITY_CEILING:
        raise CeilingExceeded(f"({n_hi}+1)**{m} above primality ceiling")
    out = []
    for n in range(n_lo, n_hi + 1):
        a, b = n**m, (n + 1) ** m
        w = _first_prime(a + 1, b - 1)
        out.append(GapCertificate(float(a), float(b - a), w, "found" if w is not None else "exhausted",
                                  a + 1, b - 1, n))
    return out
