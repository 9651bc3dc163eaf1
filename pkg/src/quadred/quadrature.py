"""Double-exponential quadrature on finite intervals, the half line and the quadrant.

Two transformations cover everything the reduction catalog needs:

  tanh-sinh   x = mid + half*tanh((pi/2) sinh u)      finite [lo, hi]
  exp-sinh    t = exp((pi/2) sinh u)                  (0, inf)

Both push algebraic endpoint singularities into doubly-exponentially
decaying trapezoid sums in u, so one level-halving driver serves
integrands like t**(-1/2)*exp(-1/t) without special casing.  Each level
reuses the previous level's sum (trapezoid interleaving), node ladders are
fixed, and truncation scans are value-driven but deterministic, so results
are bit-reproducible.

Integrands must accept numpy arrays (every integrand built by this package
does).  They are never called at an endpoint: finite-interval nodes are
generated as offsets from the endpoints and clipped strictly inside, and
exp-sinh nodes are strictly positive.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

_HALF_PI = math.pi / 2.0
# A truncation scan stops after two consecutive blocks below this fraction
# of the running sum.
_TRUNC_EPS = 1e-18
_BLOCK = 32
_MAX_LEVEL = 11
_BASE_STEP = 0.5
_U_MAX = 700.0  # |u| rail; transformed nodes under/overflow long before this


class QuadratureError(Exception):
    """Raised when an integrand produces NaN/inf or violates a precondition."""


class _BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class Tolerance:
    """Convergence targets and a work bound for one integral."""

    rel: float = 1e-10
    abs: float = 1e-14
    max_evaluations: int = 2_000_000

    def __post_init__(self):
        if not (self.rel >= 1e-14):
            raise ValueError("rel tolerance must be >= 1e-14")
        if not (self.abs > 0.0):
            raise ValueError("abs tolerance must be positive")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")

    def met_by(self, estimate: float, value: complex) -> bool:
        return estimate <= max(self.abs, self.rel * max(1.0, abs(value)))


# Default work budget for the two-dimensional oracle.
QUADRANT_TOLERANCE = Tolerance(rel=1e-9, abs=1e-14, max_evaluations=100_000_000)


@dataclass
class QuadResult:
    """One converged (or best-effort) integral value."""

    value: complex
    abs_error_estimate: float
    evaluations: int
    converged: bool

    def require_converged(self) -> "QuadResult":
        if not self.converged:
            raise QuadratureError(
                f"quadrature did not converge (estimate {self.abs_error_estimate:.3e} "
                f"after {self.evaluations} evaluations)"
            )
        return self


class _Budget:
    __slots__ = ("used", "limit")

    def __init__(self, limit: int):
        self.used = 0
        self.limit = limit

    def spend(self, n: int) -> None:
        self.used += n
        if self.used > self.limit:
            raise _BudgetExceeded


def _exp_sinh_nodes(u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Abscissae/weights for t = exp((pi/2) sinh u) on (0, inf)."""
    with np.errstate(over="ignore"):
        g = _HALF_PI * np.sinh(u)
        t = np.exp(g)
        w = _HALF_PI * np.cosh(u) * t
    # abscissae are exact doubles at every scale: no rounding fuzz
    return t, w, np.zeros(u.shape, dtype=bool)


def _make_tanh_sinh_nodes(lo: float, hi: float):
    half = 0.5 * (hi - lo)
    # Within ~16 ulp of a nonzero endpoint the evaluation abscissa is
    # quantized; those contributions are charged to the error estimate.
    fuzz_lo = 16.0 * np.finfo(float).eps * abs(lo) if lo != 0.0 else 0.0
    fuzz_hi = 16.0 * np.finfo(float).eps * abs(hi) if hi != 0.0 else 0.0

    def nodes(u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        with np.errstate(over="ignore"):
            g = _HALF_PI * np.sinh(u)
            # distance from the nearer endpoint, computed without cancellation
            off = 2.0 * half / (1.0 + np.exp(2.0 * np.abs(g)))
            x = np.where(u >= 0.0, hi - off, lo + off)
            w = half * _HALF_PI * np.cosh(u) / np.cosh(g) ** 2
        fuzzy = np.where(u >= 0.0, off <= fuzz_hi, off <= fuzz_lo)
        return x, w, fuzzy

    def valid(x: np.ndarray) -> np.ndarray:
        return (x > lo) & (x < hi)

    return nodes, valid


# Half-line ladders span [1e-160, 1e160].  For integrands that clear the
# t**-1 divergence floor by at least ~0.05 (and decay at least that fast
# beyond 1/t at infinity) the mass outside is below 1e-8 of any digit this
# engine can resolve, and the bound keeps log-assembled integrands
# representable at every node.
_T_MIN, _T_MAX = 1e-160, 1e160


def _exp_sinh_valid(t: np.ndarray) -> np.ndarray:
    return (t > _T_MIN) & (t < _T_MAX)


def _scan(f, nodes, valid, spacing: float, offset: float, budget: _Budget) -> tuple[complex, float]:
    """Sum f(x(u))*w(u) over u = dir*(offset + k*spacing), k = 0, 1, 2, ...

    With offset 0 this is a full trapezoid pass (u = 0 counted once); with
    offset h and spacing 2h it adds the odd nodes of the next level.  Each
    direction extends outward in blocks until terms fall below the
    truncation threshold.  Returns (sum, fuzzy-node mass).
    """
    total = 0.0 + 0.0j
    fuzz_mass = 0.0
    for direction in (+1.0, -1.0):
        k0 = 1 if (direction < 0 and offset == 0.0) else 0
        quiet = 0
        while offset + spacing * k0 <= _U_MAX:
            ks = np.arange(k0, k0 + _BLOCK)
            u = direction * (offset + spacing * ks)
            x, w, fuzzy = nodes(u)
            keep = valid(x) & np.isfinite(w) & (w > 0.0)
            if not keep.any():
                break
            xk = x[keep]
            budget.spend(xk.size)
            with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
                y = np.asarray(f(xk))
                if np.isnan(y).any():
                    raise QuadratureError("integrand returned NaN")
                terms = np.where(y == 0, 0.0, y * w[keep])
            if np.isinf(terms).any():
                raise QuadratureError(
                    "integrand*weight overflowed; integral likely divergent"
                )
            total += terms.sum()
            if fuzzy[keep].any():
                fuzz_mass += float(np.abs(terms[fuzzy[keep]]).sum())
            tmax = float(np.abs(terms).max()) if terms.size else 0.0
            if tmax <= _TRUNC_EPS * max(abs(total), 1e-300):
                quiet += 1
                if quiet >= 2:
                    break
            else:
                quiet = 0
            k0 += _BLOCK
    return total, fuzz_mass


def _drive(f, nodes, valid, tol: Tolerance) -> QuadResult:
    budget = _Budget(tol.max_evaluations)
    converged = False
    h = _BASE_STEP
    value = prev = 0.0 + 0.0j
    estimate = math.inf
    fuzz = 0.0
    try:
        raw, fz = _scan(f, nodes, valid, h, 0.0, budget)
        fuzz += fz
        value = prev = h * raw
        for _ in range(_MAX_LEVEL):
            h *= 0.5
            odd, fz = _scan(f, nodes, valid, 2.0 * h, h, budget)
            fuzz += fz
            raw = raw + odd
            value = h * raw
            estimate = abs(value - prev) + h * fuzz + 4e-16 * abs(value)
            if tol.met_by(estimate, value):
                converged = True
                break
            prev = value
    except _BudgetExceeded:
        converged = False
    value = complex(value)
    out: complex = value.real if value.imag == 0.0 else value
    return QuadResult(out, float(estimate), budget.used, converged)


def integrate_half_line(integrand, tol: Tolerance | None = None) -> QuadResult:
    """Integrate a function of t over (0, inf).

    The integrand may blow up at 0 no worse than an integrable power and
    must decay at infinity.  It is never evaluated at t = 0.
    """
    return _drive(integrand, _exp_sinh_nodes, _exp_sinh_valid, tol or Tolerance())


def integrate_interval(integrand, lo: float, hi: float, tol: Tolerance | None = None) -> QuadResult:
    """Integrate over finite [lo, hi]; integrable endpoint singularities allowed."""
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise QuadratureError("integrate_interval requires finite lo < hi")
    nodes, valid = _make_tanh_sinh_nodes(lo, hi)
    return _drive(integrand, nodes, valid, tol or Tolerance())


# ----------------------------------------------------------------------------
# Two-dimensional oracle: iterated exp-sinh over the open quadrant.
# ----------------------------------------------------------------------------


def _inner_batch(f2, xs: np.ndarray, tol: Tolerance, budget: _Budget) -> np.ndarray:
    """Integrate f2(x, y) dy over (0, inf) for a whole batch of x at once.

    One shared y-ladder serves every slice; slices that are already tiny
    ride along for free because convergence is measured against the largest
    slice in the batch.
    """
    nx = xs.size
    col = xs[:, None]

    def scan(spacing: float, offset: float) -> np.ndarray:
        total = np.zeros(nx, dtype=complex)
        for direction in (+1.0, -1.0):
            k0 = 1 if (direction < 0 and offset == 0.0) else 0
            quiet = 0
            while offset + spacing * k0 <= _U_MAX:
                ks = np.arange(k0, k0 + _BLOCK)
                u = direction * (offset + spacing * ks)
                y, w, _ = _exp_sinh_nodes(u)
                keep = _exp_sinh_valid(y) & np.isfinite(w) & (w > 0.0)
                if not keep.any():
                    break
                yk = y[keep]
                budget.spend(nx * yk.size)
                with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
                    vals = np.asarray(f2(col, yk[None, :]))
                    if np.isnan(vals).any():
                        raise QuadratureError("integrand returned NaN")
                    terms = np.where(vals == 0, 0.0, vals * w[keep][None, :])
                if np.isinf(terms).any():
                    raise QuadratureError(
                        "integrand*weight overflowed; integral likely divergent"
                    )
                total += terms.sum(axis=1)
                tmax = float(np.abs(terms).max()) if terms.size else 0.0
                if tmax <= _TRUNC_EPS * max(float(np.abs(total).max()), 1e-300):
                    quiet += 1
                    if quiet >= 2:
                        break
                else:
                    quiet = 0
                k0 += _BLOCK
        return total

    h = _BASE_STEP
    raw = scan(h, 0.0)
    prev = h * raw
    for _ in range(_MAX_LEVEL):
        h *= 0.5
        raw = raw + scan(2.0 * h, h)
        cur = h * raw
        diff = float(np.abs(cur - prev).max())
        scale = max(float(np.abs(cur).max()), 1e-300)
        if diff <= max(tol.abs, tol.rel * scale):
            return cur
        prev = cur
    return prev  # best effort; the outer driver sees the residual as noise


def integrate_quadrant(integrand2d, tol: Tolerance | None = None) -> QuadResult:
    """Integrate f(x, y) over (0, inf) x (0, inf) by iterated exp-sinh.

    The outer x-integral runs the 1-D driver; each outer block evaluates the
    inner y-integral for all new x nodes simultaneously, with the inner
    tolerance tightened by a factor of 10.
    """
    tol = tol or QUADRANT_TOLERANCE
    inner_tol = Tolerance(
        rel=max(tol.rel / 10.0, 1e-14), abs=tol.abs, max_evaluations=tol.max_evaluations
    )
    budget = _Budget(tol.max_evaluations)

    def outer(xs: np.ndarray) -> np.ndarray:
        return _inner_batch(integrand2d, xs, inner_tol, budget)

    converged = False
    h = _BASE_STEP
    value = prev = 0.0 + 0.0j
    estimate = math.inf

    def scan(spacing: float, offset: float) -> complex:
        total = 0.0 + 0.0j
        for direction in (+1.0, -1.0):
            k0 = 1 if (direction < 0 and offset == 0.0) else 0
            quiet = 0
            while offset + spacing * k0 <= _U_MAX:
                ks = np.arange(k0, k0 + _BLOCK)
                u = direction * (offset + spacing * ks)
                x, w, _ = _exp_sinh_nodes(u)
                keep = _exp_sinh_valid(x) & np.isfinite(w) & (w > 0.0)
                if not keep.any():
                    break
                fx = outer(x[keep])
                with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                    terms = np.where(fx == 0, 0.0, fx * w[keep])
                if np.isinf(terms).any():
                    raise QuadratureError(
                        "integrand*weight overflowed; integral likely divergent"
                    )
                total += terms.sum()
                tmax = float(np.abs(terms).max()) if terms.size else 0.0
                if tmax <= _TRUNC_EPS * max(abs(total), 1e-300):
                    quiet += 1
                    if quiet >= 2:
                        break
                else:
                    quiet = 0
                k0 += _BLOCK
        return total

    try:
        raw = scan(h, 0.0)
        value = prev = h * raw
        for _ in range(_MAX_LEVEL):
            h *= 0.5
            raw = raw + scan(2.0 * h, h)
            value = h * raw
            estimate = abs(value - prev)
            if tol.met_by(estimate, value):
                converged = True
                break
            prev = value
    except _BudgetExceeded:
        converged = False
    value = complex(value)
    out: complex = value.real if value.imag == 0.0 else value
    return QuadResult(out, float(estimate), budget.used, converged)
