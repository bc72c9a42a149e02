#!/usr/bin/env python3
"""Generate a table of zeta-zero ordinates for the test suite.

Development tool only: the gaplab package consumes zero tables, it never
computes them. Zeros are located as sign changes of the Riemann-Siegel
Z-function, evaluated in vectorized numpy with the C0..C4 correction terms.
Completeness is checked block by block against Rosser's rule (every Rosser
block of j Gram intervals holds exactly j zeros), and a sample of ordinates
is compared against mpmath.zetazero.

Usage:
    python tools/make_zero_table.py --count 100000 --out tests/data/zeros100k.txt.gz
"""

from __future__ import annotations

import argparse
import gzip
import math
import sys
import time

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as C

TWO_PI = 2.0 * math.pi
# below this height the asymptotic corrections are not accurate enough;
# ordinates there are polished with mpmath.siegelz
MPMATH_POLISH_BELOW = 300.0


def _phi_derivatives(order: int, nodes: np.ndarray) -> np.ndarray:
    """Derivatives 0..order of cos(2pi(p^2-p-1/16))/cos(2pi p) at nodes."""
    mpmath.mp.dps = 60
    f = lambda p: mpmath.cos(2 * mpmath.pi * (p * p - p - mpmath.mpf(1) / 16)) / mpmath.cos(2 * mpmath.pi * p)
    out = np.empty((order + 1, len(nodes)))
    for j, p in enumerate(nodes):
        ds = mpmath.diffs(f, mpmath.mpf(float(p)), order)
        for i, d in enumerate(ds):
            out[i, j] = float(d)
    mpmath.mp.dps = 15
    return out


def correction_coefficients(degree: int = 48):
    """Chebyshev fits (on p in [0, 1]) of the Riemann-Siegel terms C0..C4."""
    k = np.arange(degree + 1)
    u = np.cos(np.pi * (k + 0.5) / (degree + 1))
    nodes = 0.5 * (u + 1.0)
    d = _phi_derivatives(12, nodes)
    pi2, pi4, pi6, pi8 = math.pi**2, math.pi**4, math.pi**6, math.pi**8
    terms = [
        d[0],
        -d[3] / (96 * pi2),
        d[2] / (64 * pi2) + d[6] / (18432 * pi4),
        -d[1] / (64 * pi2) - d[5] / (3840 * pi4) - d[9] / (5308416 * pi6),
        d[0] / (128 * pi2) + 19 * d[4] / (24576 * pi4) + 11 * d[8] / (5898240 * pi6)
        + d[12] / (2038431744 * pi8),
    ]
    return [C.chebfit(u, term, degree) for term in terms]


def rs_theta(t: np.ndarray) -> np.ndarray:
    return (t / 2) * np.log(t / TWO_PI) - t / 2 - math.pi / 8 + 1 / (48 * t) + 7 / (5760 * t**3)


def make_z(coeffs):
    def z(t: np.ndarray, chunk: int = 4096) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        for s in range(0, t.size, chunk):
            tc = t[s : s + chunk]
            a = np.sqrt(tc / TWO_PI)
            n_terms = np.floor(a).astype(np.int64)
            p = a - n_terms
            nmax = int(n_terms.max())
            n = np.arange(1, nmax + 1, dtype=float)
            th = rs_theta(tc)
            phase = th[:, None] - tc[:, None] * np.log(n)[None, :]
            terms = np.cos(phase) / np.sqrt(n)[None, :]
            terms[n[None, :] > n_terms[:, None]] = 0.0
            main = 2.0 * terms.sum(axis=1)
            u = 2.0 * p - 1.0
            corr = np.zeros_like(tc)
            for j, cj in enumerate(coeffs):
                corr += C.chebval(u, cj) * a ** (-j)
            sign = np.where(n_terms % 2 == 1, 1.0, -1.0)
            out[s : s + chunk] = main + sign * corr / np.sqrt(a)
        return out

    return z


def gram_points(n_max: int) -> np.ndarray:
    """Gram points g_{-1} .. g_{n_max}: theta(g_n) = n*pi."""
    from scipy.special import lambertw

    n = np.arange(-1, n_max + 1, dtype=float)
    w = np.real(lambertw((n + 0.125) / np.e))
    g = np.maximum(TWO_PI * (n + 0.125) / np.maximum(w, 1e-3), 9.0)
    for _ in range(30):
        g = g - (rs_theta(g) - n * math.pi) / (0.5 * np.log(g / TWO_PI))
    return g


def bisect_roots(z, lo: np.ndarray, hi: np.ndarray, iters: int = 48) -> np.ndarray:
    zlo = z(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        zm = z(mid)
        same = np.sign(zm) == np.sign(zlo)
        lo = np.where(same, mid, lo)
        zlo = np.where(same, zm, zlo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _brackets(z, edges: np.ndarray, k: int):
    """Sign-change brackets of z on each interval [edges[i], edges[i+1]] split k ways."""
    frac = np.arange(k) / k
    grid = (edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * frac[None, :]).ravel()
    grid = np.append(grid, edges[-1])
    vals = z(grid)
    flips = np.sign(vals[:-1]) != np.sign(vals[1:])
    per_interval = flips.reshape(-1, k).sum(axis=1)
    where = np.flatnonzero(flips)
    return grid[where], grid[where + 1], per_interval


def find_zeros(count: int, subdiv: int = 8, log=print) -> np.ndarray:
    z = make_z(correction_coefficients())
    n_gram = count + 200
    g = gram_points(n_gram)
    idx = np.arange(-1, n_gram + 1)
    good = np.flatnonzero(((-1.0) ** idx) * z(g) > 0)
    g0, g1 = good[0], good[-1]
    lo, hi, per = _brackets(z, g[g0 : g1 + 1], subdiv)
    # zeros per Rosser block (intervals between consecutive good Gram points)
    csum = np.concatenate([[0], np.cumsum(per)])
    block_start = good - g0
    found = csum[block_start[1:]] - csum[block_start[:-1]]
    expected = np.diff(good)
    bad = np.flatnonzero(found != expected)
    log(f"{len(bad)} of {len(expected)} Rosser blocks need a finer grid")
    keep_lo, keep_hi = [lo], [hi]
    drop = np.zeros(len(lo), dtype=bool)
    for b in bad:
        a, e = g[good[b]], g[good[b + 1]]
        drop |= (lo >= a) & (hi <= e)
        k = subdiv * 4
        while True:
            blo, bhi, bper = _brackets(z, g[good[b] : good[b + 1] + 1], k)
            if bper.sum() == expected[b]:
                break
            if k > 8192:
                raise RuntimeError(f"Rosser block at t={a:.3f} has {bper.sum()} zeros, expected {expected[b]}")
            k *= 4
        keep_lo.append(blo)
        keep_hi.append(bhi)
    keep_lo[0], keep_hi[0] = lo[~drop], hi[~drop]
    lo = np.concatenate(keep_lo)
    hi = np.concatenate(keep_hi)
    order = np.argsort(lo)
    lo, hi = lo[order], hi[order]
    if g[g0] > 14.0:
        raise RuntimeError("first good Gram point lies above the first zero")
    t = bisect_roots(z, lo, hi)[:count]
    if len(t) < count:
        raise RuntimeError(f"only {len(t)} zeros located")
    mpmath.mp.dps = 30
    for i in np.flatnonzero(t < MPMATH_POLISH_BELOW):
        t[i] = float(mpmath.findroot(mpmath.siegelz, mpmath.mpf(t[i])))
    mpmath.mp.dps = 15
    return t


def validate(t: np.ndarray, samples: int = 24, seed: int = 1, log=print) -> float:
    rng = np.random.default_rng(seed)
    picks = sorted(set([1, 2, 29, 649, 1000, len(t)] + list(rng.integers(1, len(t) + 1, samples))))
    worst = 0.0
    for n in picks:
        ref = float(mpmath.zetazero(int(n)).imag)
        err = abs(ref - t[n - 1])
        worst = max(worst, err)
        log(f"  zero #{n}: table {t[n-1]:.10f} mpmath {ref:.10f} diff {err:.2e}")
    return worst


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100000)
    ap.add_argument("--out", required=True)
    ap.add_argument("--digits", type=int, default=10)
    ap.add_argument("--no-validate", action="store_true")
    args = ap.parse_args(argv)

    t0 = time.time()
    t = find_zeros(args.count)
    print(f"found {len(t)} zeros up to {t[-1]:.6f} in {time.time() - t0:.1f}s")
    assert np.all(np.diff(t) > 0)
    if not args.no_validate:
        worst = validate(t)
        print(f"worst deviation from mpmath: {worst:.3e}")
        if worst > 1e-8:
            print("validation failed", file=sys.stderr)
            return 1
    opener = gzip.open if args.out.endswith(".gz") else open
    with opener(args.out, "wt") as fh:
        fh.write(f"# first {len(t)} ordinates of nontrivial zeta zeros (Riemann-Siegel, Rosser-block checked)\n")
        for v in t:
            fh.write(f"{v:.{args.digits}f}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
