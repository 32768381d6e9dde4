"""
Special functions and Lévy-tail numerics shared by every sampler.

Scalar entry points validate their arguments and raise ``DomainError``;
the ``*_array`` / ``*_log_*`` variants are vectorised and assume the caller
already validated the parameters.
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Literal, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate, special

from app.errors import DomainError, NumericError, ParameterError
from app.settings import (
    LEVY_TAIL_ABS_TOL,
    QUAD_SUBDIVISIONS,
    QUANTILE_RESIDUAL_TOL,
    ROOT_MAX_ITER,
)

logger = logging.getLogger(__name__)

_X_TINY = float(np.finfo(float).smallest_subnormal)
_LOG_X_TINY = math.log(_X_TINY)
_X_MAX = float(np.nextafter(1.0, 0.0))
_LOG_X_MAX = math.log(_X_MAX)
# Below this the beta quantile is taken from its leading-order expansion
_UNDERFLOW_GUARD = 1e-280
_SPLIT = 0.5
_RULE_ORDER = 40
# Gauss-Jacobi and the power sum are used up to here; larger c switch rules
_JACOBI_MAX_C = 64.0
# c * x beyond which the large-c tail is a Gauss-Laguerre integral
_LAGUERRE_SWITCH = 6.0


class LevyTailSpec(BaseModel):
    """Parameters of the beta-process Lévy tail mu(x) = c*gamma * int_x^1 s^-1 (1-s)^(c-1) ds."""
    model_config = ConfigDict(frozen=True)

    c: float = Field(..., gt=0, allow_inf_nan=False, description="Concentration parameter.")
    gamma: float = Field(..., gt=0, allow_inf_nan=False, description="Total base mass B0(R).")

    @property
    def scale(self) -> float:
        return self.c * self.gamma


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _check_shapes(a: float, b: float) -> Tuple[float, float]:
    a = _check_finite("a", a)
    b = _check_finite("b", b)
    if a <= 0 or b <= 0:
        raise DomainError(f"beta shapes must be positive, got a={a!r}, b={b!r}")
    return a, b


def _check_unit(name: str, value: float) -> float:
    value = _check_finite(name, value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = _check_finite("x", x)
    if x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return float(special.gammaln(x))


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b), the Beta(a, b) CDF at x."""
    x = _check_unit("x", x)
    a, b = _check_shapes(a, b)
    return float(special.betainc(a, b, x))


def newton_bisect(
    func: Callable[[NDArray], NDArray],
    fprime: Callable[[NDArray], NDArray],
    lo: ArrayLike,
    hi: ArrayLike,
    x0: ArrayLike,
    ftol: float,
    maxiter: int = ROOT_MAX_ITER,
) -> NDArray:
    """
    Elementwise root of an increasing function on [lo, hi].

    Newton steps are taken while they stay strictly inside the current
    bracket; otherwise the bracket is bisected. An element is finished when
    |func| <= ftol or its bracket has shrunk to adjacent doubles.

    Raises:
        NumericError: some element is still open after ``maxiter`` steps.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    x = np.clip(np.asarray(x0, dtype=float), lo, hi)
    lo, hi, x = np.broadcast_arrays(lo, hi, x)
    lo, hi, x = lo.copy(), hi.copy(), x.copy()

    for iteration in range(1, maxiter + 1):
        fx = func(x)
        if np.any(np.isnan(fx)):
            bad = int(np.flatnonzero(np.isnan(fx))[0])
            raise NumericError(
                f"root search met a NaN at x={float(x.flat[bad])!r}",
                bracket=(float(lo.flat[bad]), float(hi.flat[bad])),
                iterations=iteration,
            )
        width = hi - lo
        resolved = width <= 2.0 * np.spacing(np.maximum(np.abs(lo), np.abs(hi)))
        open_ = (np.abs(fx) > ftol) & ~resolved
        if not open_.any():
            return x
        lo = np.where(open_ & (fx < 0), x, lo)
        hi = np.where(open_ & (fx > 0), x, hi)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            step = x - fx / fprime(x)
        inside = np.isfinite(step) & (step > lo) & (step < hi)
        x = np.where(open_, np.where(inside, step, 0.5 * (lo + hi)), x)

    bad = int(np.flatnonzero(open_)[0])
    raise NumericError(
        "root search did not converge",
        bracket=(float(lo.flat[bad]), float(hi.flat[bad])),
        iterations=maxiter,
    )


def _log_density_in_log_x(a: float, b: float) -> Callable[[NDArray], NDArray]:
    """d/du I_{e^u}(a, b) = exp(a u + (b - 1) ln(1 - e^u) - ln B(a, b))."""
    log_norm = special.betaln(a, b)

    def density(u: NDArray) -> NDArray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(a * u + (b - 1.0) * np.log(-np.expm1(u)) - log_norm)

    return density


def _invert_cdf(
    cdf: Callable[[NDArray], NDArray],
    density: Callable[[NDArray], NDArray],
    target: float,
    log_x0: float,
) -> float:
    """
    Root of cdf(x) = target for an increasing cdf on [0, 1], starting from ln x0.

    Quantiles beyond the doubles saturate: below the smallest subnormal the
    result is 0.0, above the largest double below 1 it is that double.
    """
    if cdf(_X_TINY) > target:
        return 0.0
    if cdf(_X_MAX) <= target:
        return _X_MAX
    if not math.isfinite(log_x0):
        log_x0 = math.log(0.5)
    x = min(math.exp(max(log_x0, _LOG_X_TINY)), _X_MAX)
    if abs(cdf(x) - target) <= QUANTILE_RESIDUAL_TOL:
        return x
    logger.debug(f"polishing quantile from {x!r} (target {target!r})")
    root = newton_bisect(
        lambda u: cdf(np.exp(u)) - target,
        density,
        lo=_LOG_X_TINY,
        hi=_LOG_X_MAX,
        x0=math.log(x),
        ftol=QUANTILE_RESIDUAL_TOL * 0.1,
    )
    return min(float(np.exp(root)), _X_MAX)


def beta_quantile(p: float, a: float, b: float) -> float:
    """
    Beta(a, b) quantile: x with I_x(a, b) = p.

    Starts from ``beta_log_quantile``, checks the forward CDF and refines in
    ln x by bracketed Newton-bisection when the residual exceeds 1e-10.
    Quantiles that no double can hold saturate at 0.0 (below the smallest
    subnormal, common for a below 1e-3) or at the largest double below 1.
    """
    p = _check_unit("p", p)
    a, b = _check_shapes(a, b)
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    log_x0 = float(beta_log_quantile(np.array([p]), a, b)[0])
    return _invert_cdf(lambda x: special.betainc(a, b, x), _log_density_in_log_x(a, b), p, log_x0)


def beta_log_quantile(p: ArrayLike, a: float, b: float, q: Optional[ArrayLike] = None) -> NDArray:
    """
    Natural log of the Beta(a, b) quantile, elementwise.

    ``q`` is the complement 1 - p when the caller has it to full precision;
    upper-half probabilities are inverted through it. Quantiles that would
    underflow a double use I_x(a, b) ~ x^a / (a B(a, b)).
    """
    p = np.asarray(p, dtype=float)
    q = 1.0 - p if q is None else np.asarray(q, dtype=float)
    lower = p <= 0.5
    x = np.where(lower, special.betaincinv(a, b, np.where(lower, p, 0.5)),
                 special.betainccinv(a, b, np.where(lower, 0.5, q)))
    with np.errstate(divide="ignore"):
        log_x = np.log(x)
        tiny = x < _UNDERFLOW_GUARD
        if np.any(tiny):
            series = (np.log(p) + math.log(a) + special.betaln(a, b)) / a
            log_x = np.where(tiny, series, log_x)
    return log_x


# --- Lévy tail -----------------------------------------------------------

@lru_cache(maxsize=None)
def _legendre_rule() -> Tuple[NDArray, NDArray]:
    return np.polynomial.legendre.leggauss(_RULE_ORDER)


@lru_cache(maxsize=None)
def _laguerre_rule() -> Tuple[NDArray, NDArray]:
    return special.roots_laguerre(_RULE_ORDER)


@lru_cache(maxsize=64)
def _jacobi_rule(c: float) -> Tuple[NDArray, NDArray]:
    # weight (1 + y)^(c - 1) on [-1, 1], rescaled to unit total
    y, w = special.roots_jacobi(_RULE_ORDER, 0.0, c - 1.0)
    return y, w / w.sum()


def _upper_integral(r: NDArray, c: float) -> NDArray:
    """int_{1-r}^1 s^-1 (1-s)^(c-1) ds for 0 <= r <= 1/2 (Gauss-Jacobi in t = 1 - s)."""
    y, w = _jacobi_rule(c)
    v = 0.5 * (1.0 + y)
    # unit-mass rule against v^(c-1) on [0, 1], whose mass is 1/c
    return r ** c * (w / (1.0 - r[..., None] * v)).sum(axis=-1) / c


def _lower_smooth_integral(x: NDArray, c: float) -> NDArray:
    """int_x^{1/2} ((1-s)^(c-1) - 1) / s ds for 0 <= x <= 1/2 (Gauss-Legendre)."""
    if c == 1.0:
        return np.zeros_like(x)
    y, w = _legendre_rule()
    half = 0.5 * (_SPLIT - x)
    s = (0.5 * (_SPLIT + x))[..., None] + half[..., None] * y
    h = np.expm1((c - 1.0) * np.log1p(-s)) / s
    return half * (h * w).sum(axis=-1)


def _moderate_c_integral(log_x: NDArray, c: float) -> NDArray:
    x = np.exp(log_x)
    upper = log_x >= math.log(_SPLIT)
    out = np.empty_like(log_x)
    if np.any(upper):
        out[upper] = _upper_integral(-np.expm1(log_x[upper]), c)
    if np.any(~upper):
        out[~upper] = (
            _upper_integral(np.array([_SPLIT]), c)[0]
            + (math.log(_SPLIT) - log_x[~upper])
            + _lower_smooth_integral(x[~upper], c)
        )
    return out


def _near_zero_integral(x: NDArray, c: float) -> NDArray:
    """int_0^x (1 - (1-s)^(c-1)) / s ds for c * x of order one (Gauss-Legendre)."""
    y, w = _legendre_rule()
    half = 0.5 * x
    s = half[..., None] * (1.0 + y)
    h = -np.expm1((c - 1.0) * np.log1p(-s)) / s
    return half * (h * w).sum(axis=-1)


def _large_c_integral(log_x: NDArray, c: float) -> NDArray:
    """
    int_x^1 s^-1 (1-s)^(c-1) ds for c above the Gauss-Jacobi range.

    Away from zero, t = 1 - s = r exp(-y / c) with r = 1 - x gives
    (r^c / c) int_0^inf e^-y / (1 - r e^(-y/c)) dy, a Gauss-Laguerre integral
    whose integrand is smooth once c x is a few units. Closer to zero the
    integral is -ln x - (digamma(c) + Euler gamma) plus a short remainder.
    """
    x = np.exp(log_x)
    out = np.empty_like(log_x)
    far = c * x >= _LAGUERRE_SWITCH
    if np.any(far):
        y, w = _laguerre_rule()
        r = -np.expm1(log_x[far])
        with np.errstate(divide="ignore"):
            scale = np.exp(c * np.log(r)) / c
        out[far] = scale * (w / (1.0 - r[:, None] * np.exp(-y / c))).sum(axis=-1)
    if np.any(~far):
        d0 = -(special.digamma(c) + np.euler_gamma)
        out[~far] = -log_x[~far] + d0 + _near_zero_integral(x[~far], c)
    return out


def _levy_tail_from_log(log_x: NDArray, c: float, gamma: float) -> NDArray:
    log_x = np.asarray(log_x, dtype=float)
    shape = log_x.shape
    log_x = log_x.reshape(-1)
    if c > _JACOBI_MAX_C:
        out = _large_c_integral(log_x, c)
    else:
        out = _moderate_c_integral(log_x, c)
    return (gamma * (c * out)).reshape(shape)


def levy_tail_array(x: ArrayLike, spec: LevyTailSpec) -> NDArray:
    """Vectorised mu(x) for x in (0, 1) using fixed Gauss rules."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return _levy_tail_from_log(np.log(x), spec.c, spec.gamma)


def _levy_tail_quad(x: float, c: float) -> float:
    if c > _JACOBI_MAX_C:
        return _levy_tail_quad_in_log(x, c)
    opts = dict(epsabs=LEVY_TAIL_ABS_TOL, epsrel=1e-13, limit=QUAD_SUBDIVISIONS)
    start = max(x, _SPLIT)
    # 1/s on [start, 1] against the algebraic endpoint weight (1 - s)^(c - 1)
    upper, _ = integrate.quad(lambda s: 1.0 / s, start, 1.0, weight="alg", wvar=(0.0, c - 1.0), **opts)
    if x >= _SPLIT:
        return upper
    smooth, _ = integrate.quad(lambda s: math.expm1((c - 1.0) * math.log1p(-s)) / s, x, _SPLIT, **opts)
    return upper + math.log(_SPLIT / x) + smooth


def _levy_tail_quad_in_log(x: float, c: float) -> float:
    # u = ln s: int_{ln x}^0 (1 - e^u)^(c-1) du, which falls from 1 to 0 near u = -ln c
    def integrand(u: float) -> float:
        r = -math.expm1(u)
        return math.exp((c - 1.0) * math.log(r)) if r > 0.0 else 0.0

    log_x = math.log(x)
    knee = -math.log(c)
    value, _ = integrate.quad(
        integrand,
        log_x,
        0.0,
        epsabs=LEVY_TAIL_ABS_TOL / c * 1e-3,
        epsrel=1e-13,
        limit=QUAD_SUBDIVISIONS,
        points=[knee] if log_x < knee else None,
    )
    return value


def _levy_tail_closed_form(x: float, c: int) -> float:
    # int_0^{1-x} t^(c-1) / (1 - t) dt = -ln x - sum_{k<c} (1-x)^k / k
    r = 1.0 - x
    return -math.log(x) - math.fsum(r ** k / k for k in range(1, c))


def levy_tail(x: float, spec: LevyTailSpec, method: Literal["auto", "quad", "closed_form"] = "auto") -> float:
    """
    Lévy tail mu(x) = c*gamma * int_x^1 s^-1 (1-s)^(c-1) ds.

    ``auto`` uses the finite power sum when c is an integer up to 64 and
    adaptive quadrature otherwise. Above c = 64 the quadrature runs in ln s;
    the error bound is then 1e-10 relative to mu rather than absolute.
    """
    x = _check_finite("x", x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"levy_tail requires 0 < x < 1, got {x!r}")
    integer_c = float(spec.c).is_integer()
    if method == "closed_form" and not (integer_c and spec.c <= _JACOBI_MAX_C):
        raise ParameterError(f"closed form needs an integer concentration up to {_JACOBI_MAX_C:g}, got c={spec.c!r}")
    if method == "closed_form" or (method == "auto" and integer_c and spec.c <= _JACOBI_MAX_C):
        value = _levy_tail_closed_form(x, int(spec.c))
    else:
        value = _levy_tail_quad(x, spec.c)
    return spec.gamma * (spec.c * value)


def levy_tail_log_inverse(t: ArrayLike, spec: LevyTailSpec) -> NDArray:
    """
    ln mu^-1(t), elementwise, for t > 0.

    Solved in u = ln x, where mu(e^u) = c*gamma*(D(e^u) - u) with D between
    0 and -(digamma(c) + Euler gamma); that pins a bracket of width |D0| + 2.
    """
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise DomainError("levy_tail_inverse requires finite t > 0")
    c, gamma = spec.c, spec.gamma
    d0 = -(special.digamma(c) + np.euler_gamma)
    base = -t / (c * gamma)
    lo = base + min(d0, 0.0) - 1.0
    hi = np.minimum(base + max(d0, 0.0) + 1.0, _LOG_X_MAX)

    # near x = 1, mu(x) ~ gamma (1 - x)^c
    small = np.exp(np.minimum((np.log(t) - math.log(gamma)) / c, math.log(0.5)))
    guess = np.where(t > c * gamma, base + d0, np.log1p(-small))

    def f(u: NDArray) -> NDArray:
        return t - _levy_tail_from_log(u, c, gamma)

    def fprime(u: NDArray) -> NDArray:
        with np.errstate(divide="ignore"):
            return c * gamma * np.exp((c - 1.0) * np.log(-np.expm1(u)))

    beyond = f(np.atleast_1d(hi)) < 0
    if np.any(beyond):
        logger.debug(f"{int(np.sum(beyond))} Lévy-tail targets below mu at the largest double < 1")
    return newton_bisect(f, fprime, lo, hi, guess, ftol=1e-11)


def levy_tail_inverse(t: float, spec: LevyTailSpec) -> float:
    """x in (0, 1) with mu(x) = t."""
    t = _check_finite("t", t)
    if t <= 0:
        raise DomainError(f"levy_tail_inverse requires t > 0, got {t!r}")
    return float(np.exp(levy_tail_log_inverse(np.array([t]), spec)[0]))


# --- Finite-n tail -------------------------------------------------------

def finite_shapes(spec: LevyTailSpec, n: float) -> Tuple[float, float]:
    """Beta shapes (c*gamma/n, c*(1 - gamma/n)) of the n-atom approximation."""
    if not n > spec.gamma:
        raise ParameterError(f"the n-atom approximation needs n > gamma, got n={n!r}, gamma={spec.gamma!r}")
    return spec.c * spec.gamma / n, spec.c * (1.0 - spec.gamma / n)


def finite_tail(x: float, spec: LevyTailSpec, n: int) -> float:
    """mu_n(x) = 1 - I_x(c*gamma/n, c*(1 - gamma/n))."""
    x = _check_unit("x", x)
    a, b = finite_shapes(spec, n)
    return float(special.betaincc(a, b, x))


def finite_tail_inverse(u: float, spec: LevyTailSpec, n: int) -> float:
    """mu_n^-1(u), i.e. the Beta quantile at 1 - u, inverted through the upper tail."""
    u = _check_unit("u", u)
    a, b = finite_shapes(spec, n)
    if u == 0.0:
        return 1.0
    if u == 1.0:
        return 0.0
    # mu_n(x) = u is I_x(a, b) = 1 - u; the upper tail keeps u to full precision
    log_x0 = float(beta_log_quantile(np.array([1.0 - u]), a, b, q=np.array([u]))[0])
    return _invert_cdf(lambda x: -special.betaincc(a, b, x), _log_density_in_log_x(a, b), -u, log_x0)
