"""Scalar and small-matrix numerical kernels.

Self-contained building blocks used by the allocation solvers: the principal
branch of the Lambert W function, a plain bisection root finder, and the
squared singular values of small complex matrices (the eigen-channel power
gains of a MIMO link).
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

_INV_E = math.exp(-1.0)
_BRANCH_SLACK = 1e-12

# Singular values smaller than this fraction of the largest one are snapped
# to exactly zero so near-null eigen-channels never enter an allocation.
_SV_TRUNCATION = 1e-12


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function: the w with w * e**w = x.

    Defined for x >= -1/e; arguments up to 1e-12 below the branch point are
    clamped onto it. The initial guess (branch-point series near -1/e, log
    asymptote for large x, log(1+x) in between) is polished by Halley
    iteration, giving round-trip residuals at machine-precision level.

    Raises ValueError for non-finite input or x below the branch point.
    """
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"lambert_w0: argument must be finite, got {x!r}")
    if x < -_INV_E:
        if x < -_INV_E - _BRANCH_SLACK:
            raise ValueError(f"lambert_w0: {x!r} is below the branch point -1/e")
        x = -_INV_E
    if x == -_INV_E:
        return -1.0
    if x == 0.0:
        return 0.0

    if x < -0.25:
        # series around the branch point, p = sqrt(2 (e x + 1))
        p = math.sqrt(2.0 * (math.e * x + 1.0))
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    elif x > math.e:
        l1 = math.log(x)
        w = l1 - math.log(l1)
    else:
        w = math.log1p(x)

    for _ in range(50):
        ew = math.exp(w)
        err = w * ew - x
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * err / (2.0 * wp1)
        dw = err / denom
        w -= dw
        if abs(dw) <= 1e-16 * (1.0 + abs(w)):
            break
    return w


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Root of f on [lo, hi] by bisection.

    f(lo) and f(hi) must have opposite (or zero) signs; returns the bracket
    midpoint once the bracket is narrower than tol.
    """
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise ValueError(f"bisect: need lo < hi, got [{lo}, {hi}]")
    if not tol > 0.0:
        raise ValueError(f"bisect: tol must be positive, got {tol}")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError("bisect: f(lo) and f(hi) have the same sign")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fhi > 0.0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def svd_gains(h: np.ndarray) -> np.ndarray:
    """Squared singular values of a complex matrix, sorted descending.

    These are the power gains of the parallel scalar channels obtained by
    diagonalizing the link: exactly min(rows, cols) values, each >= 0, summing
    to the squared Frobenius norm of h. They are computed as the eigenvalues
    of the smaller Gram matrix via cyclic Jacobi rotations, which is simple
    and accurate at the small sizes used here (at most a few dozen antennas).
    """
    h = np.atleast_2d(np.asarray(h, dtype=np.complex128))
    if h.ndim != 2 or h.shape[0] < 1 or h.shape[1] < 1:
        raise ValueError(f"svd_gains: need a 2-D matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("svd_gains: matrix entries must be finite")
    rows, cols = h.shape
    if cols <= rows:
        gram = h.conj().T @ h
    else:
        gram = h @ h.conj().T
    vals = _jacobi_eigvals(gram)
    vals = np.maximum(vals, 0.0)
    vals = np.sort(vals)[::-1]
    if vals[0] > 0.0:
        vals[np.sqrt(vals) < _SV_TRUNCATION * math.sqrt(vals[0])] = 0.0
    return vals


def _jacobi_eigvals(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps."""
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros(n)
    skip = 1e-14 * fro / n
    for _ in range(60):
        off = math.sqrt(max(np.sum(np.abs(a) ** 2).real - np.sum(np.abs(np.diag(a)) ** 2).real, 0.0))
        if off <= 1e-13 * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = (t * c) * phase
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - np.conj(s) * cq
                a[:, q] = s * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = np.conj(s) * rp + c * rq
                # the rotation zeroes this pair by construction; pin it to
                # keep the iterate exactly Hermitian
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return np.real(np.diag(a))
