"""Two-center integrals of Yukawa potentials and their Fourier transforms.

The overlap of two Yukawa potentials centered a distance x2 apart,

    S1 = integral d^3x  exp(-eta1 |x|)/|x| * exp(-eta2 |x - x2|)/|x - x2|,

reduces through Gaussian transforms to sqrt(pi) times the quadrant integral
with exponents (4, 4, 0) and coefficients a = eta1^2/4, b = eta2^2/4,
c = x2^2, taking f(t) = t**(3/2).  This module carries the closed forms,
the catalog-reduction routes, and the brute-force oracle route, plus the
momentum-space version where the phase exp(-i k.x) adds h = i k.x2 and
j = k^2/4 and the reduced kernel acquires an erfi difference.  Every
quantity is computable two independent ways, which is the whole point.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from .catalog import get_rule
from .kernels import FourierErfiFactor, KernelTerm, eval_kernel_with_f
from .params import Params, TestIntegrand
from .quadrature import QuadResult, Tolerance, integrate_half_line, integrate_interval
from .reducer import direct_2d

SQPI = math.sqrt(math.pi)
# below this k (relative to the larger eta) the erfi route loses digits to
# the removable k->0 structure; delegate to the tau route instead
_ERFI_SMALL_K = 1e-3


@dataclass(frozen=True)
class YukawaPairSpec:
    """Two Yukawa ranges and the separation of their centers."""

    eta1: float
    eta2: float
    x2: float = 0.0

    def __post_init__(self):
        if not (self.eta1 > 0.0 and math.isfinite(self.eta1)):
            raise ValueError("eta1 must be positive and finite")
        if not (self.eta2 > 0.0 and math.isfinite(self.eta2)):
            raise ValueError("eta2 must be positive and finite")
        if not (self.x2 >= 0.0 and math.isfinite(self.x2)):
            raise ValueError("x2 must be >= 0 and finite")


@dataclass(frozen=True)
class FourierSpec:
    """Momentum magnitude k and the scalar product k.x2 alongside the pair."""

    k: float
    k_dot_x2: float
    eta1: float
    eta2: float
    x2: float

    def __post_init__(self):
        if not (self.k >= 0.0 and math.isfinite(self.k)):
            raise ValueError("k must be >= 0 and finite")
        if not (self.eta1 > 0.0 and self.eta2 > 0.0):
            raise ValueError("eta1, eta2 must be positive")
        if not (self.x2 >= 0.0 and math.isfinite(self.x2)):
            raise ValueError("x2 must be >= 0 and finite")
        if abs(self.k_dot_x2) > self.k * self.x2 * (1.0 + 1e-12):
            raise ValueError("|k_dot_x2| cannot exceed k*x2")

    @property
    def pair(self) -> YukawaPairSpec:
        return YukawaPairSpec(self.eta1, self.eta2, self.x2)


def yukawa_pair(spec: YukawaPairSpec) -> float:
    """Closed form 4 pi (exp(-x2 eta1) - exp(-x2 eta2)) / (x2 (eta2^2 - eta1^2)).

    Requires x2 > 0 and eta1 != eta2; the equal-range limit is
    ``yukawa_pair_equal``.
    """
    e1, e2, x2 = spec.eta1, spec.eta2, spec.x2
    if e1 == e2:
        raise ValueError("eta1 == eta2: use yukawa_pair_equal")
    if not x2 > 0.0:
        raise ValueError("closed form needs x2 > 0 (x2 = 0 limit: 4 pi/(eta1+eta2))")
    return 4.0 * math.pi * (math.exp(-x2 * e1) - math.exp(-x2 * e2)) / (
        x2 * (e2 * e2 - e1 * e1)
    )


def yukawa_pair_equal(eta: float, x2: float) -> float:
    """Equal-range overlap 2 pi exp(-x2 eta) / eta."""
    if not eta > 0.0:
        raise ValueError("eta must be positive")
    return 2.0 * math.pi * math.exp(-x2 * eta) / eta


def hydrogenic_pair(spec: YukawaPairSpec) -> float:
    """1s-orbital x Yukawa overlap, the eta1-derivative of the pair overlap.

    Closed form
        8 sqrt(pi) eta1^(5/2)/(eta1^2-eta2^2)^2
          * (exp(-eta2 x2)/x2 - ((eta1^2-eta2^2)/(2 eta1) + 1/x2) exp(-eta1 x2));
    equals -(eta1^(3/2)/sqrt(pi)) d/d(eta1) of ``yukawa_pair``.
    """
    e1, e2, x2 = spec.eta1, spec.eta2, spec.x2
    if e1 == e2:
        raise ValueError("eta1 == eta2: use hydrogenic_pair_equal")
    if not x2 > 0.0:
        raise ValueError("closed form needs x2 > 0")
    diff = e1 * e1 - e2 * e2
    return (
        8.0 * SQPI * e1**2.5 / diff**2
        * (math.exp(-e2 * x2) / x2 - (diff / (2.0 * e1) + 1.0 / x2) * math.exp(-e1 * x2))
    )


def hydrogenic_pair_equal(eta: float, x2: float) -> float:
    """Equal-range limit sqrt(pi) (1 + x2 eta)/sqrt(eta) exp(-eta x2)."""
    if not eta > 0.0:
        raise ValueError("eta must be positive")
    return SQPI * (1.0 + x2 * eta) / math.sqrt(eta) * math.exp(-eta * x2)


def _pair_params(spec: YukawaPairSpec) -> Params:
    # order the ranges so a >= b, which the hypergeometric rule requires;
    # the (4,4,0) integral is symmetric under (a <-> b)
    a = spec.eta1**2 / 4.0
    b = spec.eta2**2 / 4.0
    if a < b:
        a, b = b, a
    return Params(4, 4, 0, a=a, b=b, c=spec.x2**2)


def yukawa_pair_reduced(spec: YukawaPairSpec, tol: Tolerance | None = None) -> QuadResult:
    """The pair overlap through the catalog: sqrt(pi) times the reduced
    (4,4,0) integral with f = t**(3/2)."""
    params = _pair_params(spec)
    rule = get_rule("G1-general") if spec.eta1 != spec.eta2 else get_rule("N6-aeqb")
    res = rule.reduce_to_1d(params, TestIntegrand(1.0, 1.5, 0.0), tol)
    return QuadResult(SQPI * res.value, SQPI * res.abs_error_estimate,
                      res.evaluations, res.converged)


def yukawa_pair_reduced_alt(spec: YukawaPairSpec, tol: Tolerance | None = None) -> QuadResult:
    """Same value through the alternative exponent choice (1,1,3) with mu = 0."""
    base = _pair_params(spec)
    params = Params(1, 1, 3, a=base.a, b=base.b, c=base.c)
    rule = get_rule("G1-general") if spec.eta1 != spec.eta2 else get_rule("N6-aeqb")
    res = rule.reduce_to_1d(params, TestIntegrand(1.0, 0.0, 0.0), tol)
    return QuadResult(SQPI * res.value, SQPI * res.abs_error_estimate,
                      res.evaluations, res.converged)


def yukawa_pair_oracle(spec: YukawaPairSpec, tol: Tolerance | None = None) -> QuadResult:
    """The pair overlap through the brute-force quadrant oracle."""
    res = direct_2d(_pair_params(spec), TestIntegrand(1.0, 1.5, 0.0), tol)
    return QuadResult(SQPI * complex(res.value).real, SQPI * res.abs_error_estimate,
                      res.evaluations, res.converged)


# ----------------------------------------------------------------------------
# Momentum space.
# ----------------------------------------------------------------------------


def fourier_params(spec: FourierSpec) -> Params:
    """The quadrant-integral parameters of the momentum-space overlap."""
    return Params(
        4, 4, 0,
        a=spec.eta1**2 / 4.0,
        b=spec.eta2**2 / 4.0,
        c=spec.x2**2,
        h=1j * spec.k_dot_x2,
        j=spec.k * spec.k / 4.0,
    )


def _erfi_kernel(spec: FourierSpec) -> list[KernelTerm]:
    # t^(-m/2) e^(-b/t - c t) times the closed inner integral
    # sqrt(pi)/(k sqrt(t)) e^(-zp^2) (erfi(zp) - erfi(zm)); the Gaussian
    # decay lives inside the special factor so nothing overflows
    return [
        KernelTerm(
            SQPI / spec.k, -2.5,
            special=FourierErfiFactor(spec.k, spec.k_dot_x2, spec.eta1, spec.eta2, spec.x2),
        )
    ]


def fourier_pair_erfi_result(spec: FourierSpec, tol: Tolerance | None = None) -> QuadResult:
    if spec.k < _ERFI_SMALL_K * max(spec.eta1, spec.eta2):
        return fourier_pair_tau_result(spec, tol)
    terms = _erfi_kernel(spec)
    f = TestIntegrand(1.0, 1.5, 0.0)
    res = integrate_half_line(lambda t: eval_kernel_with_f(terms, f, t), tol)
    return QuadResult(SQPI * complex(res.value), SQPI * res.abs_error_estimate,
                      res.evaluations, res.converged)


def fourier_pair_erfi(spec: FourierSpec, tol: Tolerance | None = None) -> complex:
    """Momentum-space overlap via the half-line integral with the erfi kernel.

    Below k ~ 1e-3 max(eta) the kernel's removable 0/0 structure costs
    digits, so the equivalent tau-form is substituted.
    """
    return complex(fourier_pair_erfi_result(spec, tol).value)


def fourier_pair_tau_result(spec: FourierSpec, tol: Tolerance | None = None) -> QuadResult:
    k, chi, x2 = spec.k, spec.k_dot_x2, spec.x2
    e1sq, e2sq = spec.eta1**2, spec.eta2**2

    def integrand(tau):
        ell = np.sqrt((1.0 - tau) * (k * k * tau + e2sq) + e1sq * tau)
        vals = np.exp(-x2 * ell) / ell
        if chi != 0.0:
            vals = vals * np.exp(-1j * chi * tau)
        return vals

    res = integrate_interval(integrand, 0.0, 1.0, tol)
    scale = 2.0 * math.pi
    return QuadResult(scale * complex(res.value), scale * res.abs_error_estimate,
                      res.evaluations, res.converged)


def fourier_pair_tau(spec: FourierSpec, tol: Tolerance | None = None) -> complex:
    """Momentum-space overlap via the finite parametric integral

        2 pi integral_0^1 exp(-i k.x2 tau) exp(-x2 L)/L dtau,
        L = sqrt((1-tau)(k^2 tau + eta2^2) + eta1^2 tau).
    """
    return complex(fourier_pair_tau_result(spec, tol).value)


# ----------------------------------------------------------------------------
# The range-derivative cross-check at the scattering-amplitude configuration.
# ----------------------------------------------------------------------------


@dataclass
class CheshireReport:
    """Agreement of -d/d(eta2) of the momentum-space overlap between routes."""

    spec: FourierSpec
    step: float
    wrapped_erfi: complex
    wrapped_tau: complex

    @property
    def rel_diff(self) -> float:
        return abs(self.wrapped_erfi - self.wrapped_tau) / max(1.0, abs(self.wrapped_tau))


def _wrapped_derivative(route, spec: FourierSpec, step: float) -> complex:
    pref = spec.eta1**1.5 * spec.eta2**1.5 / math.pi

    def at(eta2: float) -> complex:
        return route(FourierSpec(spec.k, spec.k_dot_x2, spec.eta1, eta2, spec.x2))

    fd = (at(spec.eta2 + step) - at(spec.eta2 - step)) / (2.0 * step)
    return pref * (-fd)


def cheshire_check(
    kf_mag: float = 1.0,
    x2: float = 1.0,
    k_dot_x2: float = 0.0,
    step: float = 1e-5,
) -> CheshireReport:
    """Central-difference -d/d(eta2) wrapper at eta1 = 1, eta2 = 1/2,
    k = kf_mag/2, applied to both momentum-space routes."""
    spec = FourierSpec(kf_mag / 2.0, k_dot_x2, 1.0, 0.5, x2)
    return CheshireReport(
        spec, step,
        _wrapped_derivative(fourier_pair_erfi, spec, step),
        _wrapped_derivative(fourier_pair_tau, spec, step),
    )
