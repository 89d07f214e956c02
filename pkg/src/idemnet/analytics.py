"""Closed-form growth analysis for the torus model.

The collision-free ball of the torus model grows by the integer sequence
C_0 = 1, C_{i+1} = C_i + sum_{j>=1} 4j * C_{i-j}, whose growth rate is
the dominant root alpha of x^4 - 2x^3 - 4x^2 - 2x - 1 (about 3.38298).
The general (p, q) variant has the same structure with weights
w_j = 4p^2(j - 1/2) + 2p and an extra factor q, and its growth rate is
the dominant eigenvalue of a 4x4 companion matrix. The predicted
distance scale for an n-node torus graph is log_alpha(n); these values
drive the distance expectations tested elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .generators import torus_distance_classes


@dataclass
class RecurrenceSeries:
    """Exact ball-growth counts and their consecutive ratios.

    ``values[i]`` is C_i (int for p = q = 1, Fraction in general, though
    only C_0 = 1/q is ever non-integral); ``ratios[i]`` is C_{i+1} / C_i.
    """
    p: int
    q: int
    values: list
    ratios: list


def _growth_weight(p, j):
    # 4p^2(j - 1/2) + 2p, kept in integers: 2p^2(2j - 1) + 2p.
    return 2 * p * p * (2 * j - 1) + 2 * p


def recurrence_c(i_max):
    """Plain growth series (p = q = 1) as exact integers.

    Computed by the direct sum C_{i+1} = C_i + sum_j 4j C_{i-j} and
    cross-checked in place against the equivalent order-4 recurrence
    C_{i+1} = 2C_i + 4C_{i-1} + 2C_{i-2} + C_{i-3}.
    """
    if i_max < 0:
        raise ValueError("i_max must be >= 0")
    c = [1]
    for i in range(i_max):
        total = c[i]
        for j in range(1, i + 1):
            total += 4 * j * c[i - j]
        if i > 2:
            alt = 2 * c[i] + 4 * c[i - 1] + 2 * c[i - 2] + c[i - 3]
            if alt != total:
                raise RuntimeError(f"recurrence forms disagree at i={i + 1}")
        c.append(total)
    ratios = [c[i + 1] / c[i] for i in range(len(c) - 1)]
    return RecurrenceSeries(p=1, q=1, values=c, ratios=ratios)


def recurrence_c_general(p, q, i_max):
    """General growth series with C_0 = 1/q, as exact rationals.

    Direct form: C_{i+1} = q C_i + sum_{j>=1} (4p^2(j - 1/2) + 2p) q C_{i-j}.
    Cross-checked against the order-4 form whose coefficients are the
    first row of :func:`companion_matrix`.
    """
    if p < 1 or q < 1:
        raise ValueError(f"need integers p, q >= 1, got p={p}, q={q}")
    p, q = int(p), int(q)
    c = [Fraction(1, q)]
    row = _companion_first_row(p, q)
    for i in range(i_max):
        total = q * c[i]
        for j in range(1, i + 1):
            total += _growth_weight(p, j) * q * c[i - j]
        if i > 2:
            alt = (row[0] * c[i] + row[1] * c[i - 1]
                   + row[2] * c[i - 2] + row[3] * c[i - 3])
            if alt != total:
                raise RuntimeError(f"recurrence forms disagree at i={i + 1}")
        c.append(total)
    ratios = [float(c[i + 1] / c[i]) for i in range(len(c) - 1)]
    values = [int(x) if x.denominator == 1 else x for x in c]
    return RecurrenceSeries(p=p, q=q, values=values, ratios=ratios)


def _companion_first_row(p, q):
    return (q + 1,
            (2 * p * p + 2 * p - 1) * q + 1,
            4 * p * p * q - q - 1,
            (2 * p * p - 2 * p + 1) * q)


@dataclass
class CompanionMatrix:
    """4x4 companion matrix whose dominant eigenvalue is the growth rate."""
    p: int
    q: int
    entries: np.ndarray

    @property
    def first_row(self):
        return tuple(int(x) for x in self.entries[0])

    def char_coefficients(self):
        """(a, b, c, d) of x^4 - a x^3 - b x^2 - c x - d."""
        return self.first_row


def companion_matrix(p, q):
    """Companion form of the order-4 growth recurrence for parameters p, q."""
    if p < 1 or q < 1:
        raise ValueError(f"need integers p, q >= 1, got p={p}, q={q}")
    p, q = int(p), int(q)
    m = np.zeros((4, 4), dtype=np.int64)
    m[0] = _companion_first_row(p, q)
    m[1, 0] = m[2, 1] = m[3, 2] = 1
    return CompanionMatrix(p=p, q=q, entries=m)


@dataclass
class AlphaEstimate:
    """Dominant-eigenvalue estimate with both computation routes recorded."""
    alpha: float
    power_alpha: float
    bisection_alpha: float
    residual: float
    iterations: int


def _as_companion_array(m):
    arr = m.entries if isinstance(m, CompanionMatrix) else np.asarray(m, float)
    arr = np.asarray(arr, dtype=np.float64)
    k = arr.shape[0]
    if arr.ndim != 2 or arr.shape[1] != k:
        raise ValueError("matrix must be square")
    expected = np.zeros_like(arr)
    expected[0] = arr[0]
    if k > 1:
        expected[np.arange(1, k), np.arange(0, k - 1)] = 1.0
    if not np.array_equal(arr, expected):
        raise ValueError("matrix is not in companion form")
    return arr


def _char_poly(coeffs, x):
    k = len(coeffs)
    acc = x ** k
    for i, c in enumerate(coeffs):
        acc -= c * x ** (k - 1 - i)
    return acc


def dominant_eigenvalue(m, tol=1e-10, max_iter=200_000):
    """Dominant eigenvalue of a companion matrix, computed two ways.

    Power iteration on the matrix and bisection on its characteristic
    polynomial are both run; they must agree within ``tol`` (the matrix is
    non-negative, so the dominant eigenvalue is real, positive and simple,
    and both routes converge to it). Raises RuntimeError if the iteration
    fails to settle, which would indicate a bug rather than bad input.
    """
    arr = _as_companion_array(m)
    k = arr.shape[0]
    coeffs = [float(c) for c in arr[0]]

    # Route 1: power iteration, run to its machine-precision fixpoint (the
    # matrix is non-normal, so the residual alone understates the error).
    x = np.full(k, 1.0 / math.sqrt(k))
    lam = 0.0
    settled = 0
    iterations = 0
    for iterations in range(1, max_iter + 1):
        y = arr @ x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            raise RuntimeError("power iteration collapsed to the zero vector")
        new_lam = float(x @ y)
        x = y / norm
        settled = settled + 1 if abs(new_lam - lam) <= 1e-15 * max(1.0, abs(new_lam)) else 0
        lam = new_lam
        if settled >= 3:
            break
    else:
        raise RuntimeError(f"power iteration did not converge in {max_iter} steps")

    # Route 2: bisection on the single positive root of the characteristic
    # polynomial (signs +,-,...,- give exactly one by Descartes' rule).
    lo = 1.0
    if _char_poly(coeffs, lo) >= 0:
        raise ValueError("characteristic polynomial has no root above 1")
    hi = 2.0
    while _char_poly(coeffs, hi) <= 0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _char_poly(coeffs, mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 * hi:
            break
    bisect = 0.5 * (lo + hi)

    if abs(lam - bisect) > tol:
        raise RuntimeError(
            f"eigenvalue routes disagree: power={lam!r} bisection={bisect!r}")
    return AlphaEstimate(alpha=bisect, power_alpha=lam, bisection_alpha=bisect,
                         residual=abs(_char_poly(coeffs, bisect)),
                         iterations=iterations)


def growth_rate(p=1, q=1, tol=1e-10):
    """Convenience wrapper: dominant eigenvalue for parameters (p, q)."""
    return dominant_eigenvalue(companion_matrix(p, q), tol=tol).alpha


def predict_ell(n, alpha):
    """Predicted distance scale log_alpha(n) for an n-node torus graph."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not alpha > 1:
        raise ValueError(f"need alpha > 1, got {alpha}")
    return math.log(n) / math.log(alpha)


@dataclass
class BoundCheck:
    """Worst-case long-range contact probability vs. the 1/(4 n ln n) floor."""
    n: int
    r: float
    z: float
    max_distance: int
    min_prob: float
    bound: float
    holds: bool


def verify_longrange_lower_bound(n, r):
    """Check min_v P(contact of u is v) >= 1 / (4 n ln n) by exact enumeration.

    Z = sum over v != u of d(u, v)^-r is computed from the torus distance
    classes (identical for every u); the minimum probability is attained
    at the maximum lattice distance. The floor is tightest at r = 2, so a
    pass there covers every r in [0, 2).
    """
    s = math.isqrt(n)
    if s * s != n or n < 9:
        raise ValueError(f"n must be a perfect square >= 9, got {n}")
    if not 0 <= r <= 2:
        raise ValueError(f"r must be in [0, 2], got {r}")
    count = torus_distance_classes(s)
    d = np.arange(len(count), dtype=np.float64)
    with np.errstate(divide="ignore"):
        weights = count * np.where(d > 0, d ** (-float(r)), 0.0)
    z = float(weights[1:].sum())
    dmax = len(count) - 1
    min_prob = (dmax ** (-float(r))) / z
    bound = 1.0 / (4.0 * n * math.log(n))
    return BoundCheck(n=n, r=float(r), z=z, max_distance=dmax,
                      min_prob=min_prob, bound=bound, holds=min_prob >= bound)
