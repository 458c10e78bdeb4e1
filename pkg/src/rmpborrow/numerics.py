"""Special functions, quadrature and root finding shared by the rest of the package.

Everything here is a pure function of its inputs.  Normal CDF/quantile and
log-sum-exp delegate to :mod:`scipy.special`; the quadrature and vectorized
bisection are written here because they are tuned to the integrands that show
up in operating-characteristic calculations (smooth functions of a normal
variate).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special


class NumericalError(RuntimeError):
    """Base class for numerical failures."""


class NonConvergenceError(NumericalError):
    """An adaptive routine hit its iteration or subdivision limit."""


class BracketError(NumericalError, ValueError):
    """The supplied interval does not bracket a sign change."""


@dataclass(frozen=True)
class QuadratureSpec:
    """How to integrate a function against a normal density.

    ``scheme`` is ``"gauss-hermite"`` (fixed ``order`` nodes) or ``"adaptive"``
    (Gauss-Kronrod on ``mean +/- half_width * sd`` to absolute tolerance
    ``abs_tol``).
    """

    scheme: str = "gauss-hermite"
    order: int = 64
    abs_tol: float = 1e-8
    max_subdivisions: int = 200
    half_width: float = 12.0

    def __post_init__(self):
        if self.scheme not in ("gauss-hermite", "adaptive"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.order < 2:
            raise ValueError("gauss-hermite order must be >= 2")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def adaptive(self) -> "QuadratureSpec":
        return QuadratureSpec("adaptive", self.order, self.abs_tol, self.max_subdivisions, self.half_width)


DEFAULT_QUAD = QuadratureSpec()


def std_normal_cdf(x):
    """Standard normal CDF, accurate in both tails (``scipy.special.ndtr``)."""
    return special.ndtr(x)


def std_normal_quantile(p):
    """Inverse of :func:`std_normal_cdf` on the open interval (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr > 0) & (arr < 1))):
        raise ValueError("std_normal_quantile requires 0 < p < 1")
    return special.ndtri(p)


def log_sum_exp(log_terms) -> float:
    terms = np.asarray(log_terms, dtype=float)
    if terms.size == 0:
        raise ValueError("log_sum_exp of an empty sequence")
    return float(special.logsumexp(terms))


def normal_logpdf(x, mean, var):
    """Log density of N(mean, var); stays finite for var up to ~1e300."""
    x = np.asarray(x, dtype=float)
    return -0.5 * (np.log(2.0 * np.pi) + np.log(var)) - 0.5 * (x - mean) ** 2 / var


@lru_cache(maxsize=16)
def hermite_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Probabilists' Gauss-Hermite nodes with weights normalised to sum to 1."""
    z, w = np.polynomial.hermite_e.hermegauss(order)
    w = w / w.sum()
    z.setflags(write=False)
    w.setflags(write=False)
    return z, w


def integrate_against_normal(
    f: Callable, mean: float, sd: float, spec: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Approximate E[f(X)] for X ~ N(mean, sd^2).

    With the Gauss-Hermite scheme ``f`` is called once on the array of nodes
    and must be vectorized.  The adaptive scheme calls ``f`` on scalars.
    """
    if not sd > 0:
        raise ValueError("sd must be positive")
    if spec.scheme == "gauss-hermite":
        z, w = hermite_nodes(spec.order)
        vals = np.asarray(f(mean + sd * z), dtype=float)
        return float(np.dot(w, vals))

    def integrand(u):
        return float(f(mean + sd * u)) * np.exp(-0.5 * u * u) / np.sqrt(2.0 * np.pi)

    return _adaptive_quad(integrand, -spec.half_width, spec.half_width, spec, points=(0.0,))


def integrate_uniform(f: Callable, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_QUAD,
                      points=None) -> float:
    """Average of scalar ``f`` over the uniform distribution on [lo, hi]."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    width = hi - lo
    total = _adaptive_quad(lambda t: float(f(t)) / width, lo, hi, spec, points=points)
    return total


def _adaptive_quad(g, a, b, spec, points=None):
    inner = None
    if points:
        inner = [p for p in points if a < p < b] or None
    with np.errstate(all="ignore"):
        val, err, info = integrate.quad(
            g, a, b, epsabs=spec.abs_tol, epsrel=0.0, limit=spec.max_subdivisions,
            points=inner, full_output=1,
        )[:3]
    if err > spec.abs_tol and info.get("last", 0) >= spec.max_subdivisions:
        raise NonConvergenceError(
            f"adaptive quadrature reached {spec.max_subdivisions} subdivisions (error estimate {err:.3g})"
        )
    return float(val)


def find_root_bracketed(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Brent's method on [lo, hi]; raises :class:`BracketError` if f(lo), f(hi) share a sign."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"f({lo})={flo:.3g} and f({hi})={fhi:.3g} have the same sign")
    return float(optimize.brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500))


def bisect_increasing(f: Callable[[np.ndarray], np.ndarray], lo, hi, tol: float = 1e-12,
                      max_iter: int = 200) -> np.ndarray:
    """Elementwise root of a vectorized increasing function.

    Requires ``f(lo) <= 0 <= f(hi)`` elementwise.  Returns the midpoint of the
    final bracket, whose width is at most ``tol``.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    # a bracket a few ulps wide cannot shrink further
    floor = tol + 4 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
    for _ in range(max_iter):
        if np.all(hi - lo <= floor):
            break
        mid = 0.5 * (lo + hi)
        below = f(mid) <= 0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    else:
        if np.any(hi - lo > floor):
            raise NonConvergenceError("vectorized bisection did not reach tolerance")
    return 0.5 * (lo + hi)


def expand_bracket(f: Callable[[np.ndarray], np.ndarray], lo, hi, max_doublings: int = 60):
    """Grow [lo, hi] geometrically until ``f(lo) <= 0 < f(hi)`` for increasing ``f``."""
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    width = hi - lo
    for _ in range(max_doublings):
        bad_lo = f(lo) > 0
        bad_hi = f(hi) <= 0
        if not (np.any(bad_lo) or np.any(bad_hi)):
            return lo, hi
        width = np.where(bad_lo | bad_hi, 2.0 * width, width)
        lo = np.where(bad_lo, lo - width, lo)
        hi = np.where(bad_hi, hi + width, hi)
    raise BracketError("could not bracket root by geometric expansion")
