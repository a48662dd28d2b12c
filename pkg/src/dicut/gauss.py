"""Float-path standard normal and bivariate normal primitives.

The bivariate c.d.f. Phi_rho(t1, t2) = Pr[X <= t1, Y <= t2] for standard
normals with correlation rho is computed through the classic reduction to a
one-dimensional integral over the correlation parameter:

    Phi_rho(t1, t2) = (1/2pi) * int_0^rho (1-r^2)^(-1/2)
                        * exp(-(t1^2 - 2r t1 t2 + t2^2) / (2(1-r^2))) dr
                      + Phi(t1) * Phi(t2)

Thresholds may be +-inf: an infinite threshold collapses the joint tail to a
univariate quantity (or to 0/1).  Everything here is fast and non-certified;
the certified counterparts live in `dicut.interval`.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri

__all__ = [
    "std_pdf",
    "std_cdf",
    "std_cdf_inv",
    "binorm_cdf",
    "binorm_partials",
    "binorm_cdf_vec",
]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_TWO_PI = 2.0 * math.pi

# Closed forms take over when 1-|rho| drops below this; the integrand's
# (1-r^2)^(-1/2) factor is numerically hostile approaching the endpoint.
_RHO_CLOSED_FORM_EPS = 1e-12


def std_pdf(t: float) -> float:
    """Standard normal density at t."""
    return _INV_SQRT_2PI * math.exp(-0.5 * t * t)


def std_cdf(t: float) -> float:
    """Standard normal c.d.f.; accepts +-inf."""
    if math.isinf(t):
        return 0.0 if t < 0 else 1.0
    return float(ndtr(t))


def std_cdf_inv(p: float) -> float:
    """Inverse standard normal c.d.f. on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"std_cdf_inv requires 0 < p < 1, got {p}")
    return float(ndtri(p))


def _dw_integrand(r: float, t1: float, t2: float) -> float:
    u = 1.0 - r * r
    q = t1 * t1 - 2.0 * r * t1 * t2 + t2 * t2
    return math.exp(-q / (2.0 * u)) / math.sqrt(u)


def binorm_cdf(t1: float, t2: float, rho: float) -> float:
    """Bivariate standard normal c.d.f. Pr[X <= t1, Y <= t2], corr(X,Y)=rho.

    Infinite thresholds reduce to univariate/degenerate cases.  |rho|=1 (and
    near-1) uses the Frechet closed forms Phi_1 = Phi(min(t1,t2)) and
    Phi_{-1} = max(0, Phi(t1)+Phi(t2)-1).
    """
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"correlation out of range: {rho}")
    if math.isinf(t1) or math.isinf(t2):
        if t1 == -math.inf or t2 == -math.inf:
            return 0.0
        if t1 == math.inf:
            return std_cdf(t2)
        return std_cdf(t1)
    if 1.0 - abs(rho) < _RHO_CLOSED_FORM_EPS:
        if rho > 0:
            return std_cdf(min(t1, t2))
        return max(0.0, std_cdf(t1) + std_cdf(t2) - 1.0)
    p = std_cdf(t1) * std_cdf(t2)
    if rho == 0.0:
        return p
    integral, _ = integrate.quad(
        _dw_integrand, 0.0, rho, args=(t1, t2), epsabs=1e-12, epsrel=1e-10, limit=200
    )
    v = integral / _TWO_PI + p
    # quadrature noise can poke past the Frechet envelope by an ulp or two
    lo = max(0.0, std_cdf(t1) + std_cdf(t2) - 1.0)
    hi = min(std_cdf(t1), std_cdf(t2))
    return min(max(v, lo), hi)


def binorm_partials(t1: float, t2: float, rho: float) -> tuple[float, float, float]:
    """Closed-form partial derivatives (d/drho, d/dt1, d/dt2) of binorm_cdf.

    d/drho is the bivariate density at (t1, t2); d/dt1 = phi(t1) * Phi of the
    conditional residual, symmetrically for t2.  Requires |rho| < 1 and finite
    thresholds.
    """
    if abs(rho) >= 1.0:
        raise ValueError(f"partials need |rho| < 1, got {rho}")
    if math.isinf(t1) or math.isinf(t2):
        raise ValueError("partials need finite thresholds")
    s = math.sqrt(1.0 - rho * rho)
    q = t1 * t1 - 2.0 * rho * t1 * t2 + t2 * t2
    d_rho = math.exp(-q / (2.0 * (1.0 - rho * rho))) / (_TWO_PI * s)
    d_t1 = std_pdf(t1) * std_cdf((t2 - rho * t1) / s)
    d_t2 = std_pdf(t2) * std_cdf((t1 - rho * t2) / s)
    return d_rho, d_t1, d_t2


# Fixed Gauss-Legendre rule for the vectorized path.  The arcsin substitution
# r = sin(theta) removes the endpoint singularity, so a modest node count is
# accurate to ~1e-13 for |rho| <= 1 - 1e-12.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def binorm_cdf_vec(t1, t2, rho):
    """Vectorized binorm_cdf over broadcastable arrays (finite thresholds).

    Uses int_0^rho (1-r^2)^(-1/2) E(r) dr = int_0^asin(rho) E(sin phi) dphi
    with fixed Gauss-Legendre nodes; accuracy ~1e-12, adequate for scans and
    searches.  Infinite thresholds are handled by masking to the univariate
    reductions.
    """
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    rho = np.asarray(rho, dtype=float)
    t1, t2, rho = np.broadcast_arrays(t1, t2, rho)
    out = np.empty(t1.shape, dtype=float)

    inf1 = np.isinf(t1)
    inf2 = np.isinf(t2)
    finite = ~(inf1 | inf2)
    if inf1.any() or inf2.any():
        out[inf1 & (t1 < 0)] = 0.0
        out[inf2 & (t2 < 0)] = 0.0
        m = inf1 & (t1 > 0) & ~(inf2 & (t2 < 0))
        out[m] = ndtr(t2[m])
        m = inf2 & (t2 > 0) & ~inf1
        out[m] = ndtr(t1[m])

    a = t1[finite]
    b = t2[finite]
    r = np.clip(rho[finite], -1.0, 1.0)
    theta = np.arcsin(r)
    # map GL nodes from [-1,1] onto [0, theta] per element
    half = 0.5 * theta
    phi = half[..., None] * (_GL_NODES + 1.0)
    sin_phi = np.sin(phi)
    cos2 = np.cos(phi) ** 2
    q = a[..., None] ** 2 - 2.0 * sin_phi * (a * b)[..., None] + b[..., None] ** 2
    vals = np.exp(-q / (2.0 * cos2))
    integral = half * (vals @ _GL_WEIGHTS)
    v = integral / _TWO_PI + ndtr(a) * ndtr(b)
    lo = np.maximum(0.0, ndtr(a) + ndtr(b) - 1.0)
    hi = np.minimum(ndtr(a), ndtr(b))
    out[finite] = np.minimum(np.maximum(v, lo), hi)
    return out
