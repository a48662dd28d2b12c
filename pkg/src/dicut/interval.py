"""Certified interval arithmetic and rigorous normal-c.d.f. enclosures.

The single contract everything here obeys is containment: the result interval
of an operation contains the exact real-arithmetic image of its operands.
Directed rounding is done by one-ulp outward nudging with nextafter.  IEEE
basic operations (+ - * / sqrt) are correctly rounded, so a one-ulp nudge
over-covers them; exp results from libm/numpy are nudged by four ulps to
cover their (documented, sub-ulp to few-ulp) error.

Enclosures provided on top of the arithmetic:

* Phi(t) for a point endpoint: alternating Taylor series of the integral of
  the density for |t| <= 4 (remainder bounded by the first omitted term), and
  the Mills-ratio tail pinch phi(t)(1/t - 1/t^3) <= 1 - Phi(t) <= phi(t)/t
  beyond.

* Phi_rho(t1, t2): the one-dimensional correlation integral is enclosed by a
  rigorous Riemann scheme: the integration range is partitioned, each
  subintegral is bracketed by both the interval image of the integrand and a
  mean-value (centered) form using the interval derivative, and the pieces
  are summed with directed rounding.  The last sliver of correlation range
  near |r| = 1, where the integrand is singular, is bounded through the
  closed-form arc-length of the weight function.  Results are intersected
  with the Frechet bounds, which also supply the closed forms at |rho| = 1.

Monotonicity of Phi_rho in each of t1, t2, rho reduces interval queries to
two certified point evaluations, which keeps enclosures tight.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "Interval",
    "iv_arith",
    "iv_std_cdf",
    "iv_binorm_cdf",
    "iv_binorm_partials",
]

_INF = math.inf


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _exp_dn(x: float) -> float:
    try:
        v = math.exp(x)
    except OverflowError:
        return 1.7e308
    v = math.nextafter(math.nextafter(v, -_INF), -_INF)
    return v if v > 0.0 else 0.0


def _exp_up(x: float) -> float:
    try:
        v = math.exp(x)
    except OverflowError:
        return _INF
    return math.nextafter(math.nextafter(v, _INF), _INF)


# pi is correctly rounded in math.pi, so one ulp each way encloses it
_PI_LO, _PI_HI = _dn(math.pi), _up(math.pi)


class Interval:
    """Closed interval [lo, hi], endpoints possibly infinite."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        if hi is None:
            hi = lo
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise ValueError(f"bad interval endpoints [{lo}, {hi}]")
        object.__setattr__(self, "lo", float(lo))
        object.__setattr__(self, "hi", float(hi))

    def __setattr__(self, *a):
        raise AttributeError("Interval is immutable")

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi
        )

    def __hash__(self):
        return hash((self.lo, self.hi))

    # -- queries ---------------------------------------------------------
    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        if math.isinf(m):
            m = 0.5 * self.lo + 0.5 * self.hi
        return m

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    # -- lattice ---------------------------------------------------------
    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError(f"empty intersection of {self} and {other}")
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    # -- arithmetic ------------------------------------------------------
    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        o = _as_iv(other)
        return Interval(_dn(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_iv(other)
        return Interval(_dn(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return _as_iv(other) - self

    def __mul__(self, other):
        o = _as_iv(other)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        # 0 * inf from degenerate products is spurious; treat as 0 bound
        p = tuple(0.0 if math.isnan(v) else v for v in p)
        return Interval(_dn(min(p)), _up(max(p)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_iv(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError(f"division by interval containing zero: {o}")
        p = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_dn(min(p)), _up(max(p)))

    def __rtruediv__(self, other):
        return _as_iv(other) / self

    def square(self) -> "Interval":
        a, b = abs(self.lo), abs(self.hi)
        lo, hi = min(a, b), max(a, b)
        if self.lo <= 0.0 <= self.hi:
            lo = 0.0
        return Interval(max(0.0, _dn(lo * lo)), _up(hi * hi))

    def sqrt(self) -> "Interval":
        if self.hi < 0.0:
            raise ValueError(f"sqrt of negative interval {self}")
        lo = max(0.0, self.lo)
        return Interval(max(0.0, _dn(math.sqrt(lo))), _up(math.sqrt(self.hi)))

    def exp(self) -> "Interval":
        return Interval(_exp_dn(self.lo), _exp_up(self.hi))


def _as_iv(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval(float(x))


_IV_PI = Interval(_PI_LO, _PI_HI)
_IV_TWO_PI = _IV_PI * 2.0
_IV_INV_2PI = 1.0 / _IV_TWO_PI
_IV_SQRT_2PI = _IV_TWO_PI.sqrt()
_IV_INV_SQRT_2PI = 1.0 / _IV_SQRT_2PI

_OPS1 = {"neg", "sqrt", "exp", "square"}
_OPS2 = {"add", "sub", "mul", "div"}


def iv_arith(op: str, a: Interval, b: Interval | None = None) -> Interval:
    """Dispatch by name; `op` in {add, sub, mul, div, neg, sqrt, exp, square}."""
    if op in _OPS2:
        if b is None:
            raise ValueError(f"{op} needs two operands")
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        return a / b
    if op in _OPS1:
        if op == "neg":
            return -a
        if op == "sqrt":
            return a.sqrt()
        if op == "exp":
            return a.exp()
        return a.square()
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# certified Phi at a point endpoint
# ---------------------------------------------------------------------------

_PHI_SERIES_CUT = 4.0


@lru_cache(maxsize=1 << 15)
def _phi_point(x: float) -> tuple[float, float]:
    """Certified bounds on Phi(x) for a float x (or +-inf)."""
    if x != x:
        raise ValueError("nan threshold")
    if x == _INF:
        return 1.0, 1.0
    if x == -_INF:
        return 0.0, 0.0
    if x < 0.0:
        lo, hi = _phi_point(-x)
        return max(0.0, _dn(1.0 - hi)), min(1.0, _up(1.0 - lo))
    if x <= _PHI_SERIES_CUT:
        s = _int_phi_series(x)
        half = s * _IV_INV_SQRT_2PI + Interval(0.5)
        return max(0.0, half.lo), min(1.0, half.hi)
    # Mills pinch: phi(x)(1/x - 1/x^3) <= 1 - Phi(x) <= phi(x)/x
    xx = Interval(x)
    pdf = (-xx.square() / 2.0).exp() * _IV_INV_SQRT_2PI
    upper_tail = pdf / xx
    lower_tail = pdf * (1.0 / xx - 1.0 / (xx * xx * xx))
    lo = max(0.0, _dn(1.0 - upper_tail.hi))
    hi = min(1.0, _up(1.0 - max(0.0, lower_tail.lo)))
    return lo, hi


def _int_phi_series(x: float) -> Interval:
    """Enclosure of int_0^x exp(-u^2/2) du for 0 <= x <= 4.

    Alternating series sum_n (-1)^n x^(2n+1) / ((2n+1) 2^n n!); terms are
    decreasing for n >= x^2/2, so the remainder after the last added term is
    bounded by the next term once n >= 9.
    """
    x2 = Interval(x).square()
    u = Interval(x)  # u_n = x^(2n+1) / (2^n n!)
    total = u  # n = 0 term (u / 1)
    n = 0
    while True:
        n += 1
        u = u * x2 / (2.0 * n)
        term = u / (2.0 * n + 1.0)
        if n >= 9 and term.hi < 1e-22:
            rem = Interval(-term.hi, term.hi)
            return total + rem
        if n & 1:
            total = total - term
        else:
            total = total + term
        if n > 200:
            raise RuntimeError("series failed to converge")


def iv_std_cdf(t: Interval) -> Interval:
    """Enclosure of {Phi(x) : x in t}; monotone, so endpoint bounds suffice."""
    lo, _ = _phi_point(t.lo)
    _, hi = _phi_point(t.hi)
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# certified Phi_rho
# ---------------------------------------------------------------------------

# integrate the correlation integral only up to |r| <= 127/128; the sliver
# beyond is bounded by sup(E) * arc-length, with acos(127/128) enclosed below
_RSTAR = 1.0 - 2.0**-7
_ACOS_RSTAR_HI = 0.1250815235929828

_NEG_INF_ARR = np.float64(-_INF)
_POS_INF_ARR = np.float64(_INF)


def _vdn(a):
    return np.nextafter(a, _NEG_INF_ARR)


def _vup(a):
    return np.nextafter(a, _POS_INF_ARR)


def _vexp_dn(a):
    return np.maximum(_vdn(_vdn(_vdn(_vdn(np.exp(a))))), 0.0)


def _vexp_up(a):
    return _vup(_vup(_vup(_vup(np.exp(a)))))


def _fsum_dn(arr) -> float:
    return _dn(math.fsum(arr))


def _fsum_up(arr) -> float:
    return _up(math.fsum(arr))


def _dw_integral(x: float, y: float, rend: float, n: int) -> tuple[float, float]:
    """Certified bounds on int_0^rend g(r) dr, 0 <= rend <= RSTAR, where
    g(r) = (1-r^2)^(-1/2) exp(-(x^2 - 2 r x y + y^2) / (2(1-r^2))).

    Each of n coarse subintervals [a, b] with interior node m is enclosed
    two ways and the results intersected:

    * interval image: sum of image(g) * width over the two halves;
    * midpoint form: (b-a) g(m) + G'_[m,b] (b-m)^2/2 - G'_[a,m] (m-a)^2/2,
      exact by Fubini on g(r)-g(m) = int_m^r g'(s) ds, giving second-order
      width decay using only first-derivative intervals on the halves.

    Vectorized over the partition with directed rounding throughout.
    """
    if rend == 0.0:
        return 0.0, 0.0
    k = np.arange(2 * n + 1, dtype=float)
    nodes = rend * (k / (2 * n))
    nodes[0] = 0.0
    nodes[-1] = rend
    nodes = np.maximum.accumulate(nodes)
    fa = nodes[:-1]  # fine halves
    fb = nodes[1:]

    # the scalar product x*y is itself rounded; carry both directions
    xy_dn = _dn(x * y)
    xy_up = _up(x * y)
    x2y2_dn = _dn(_dn(x * x) + _dn(y * y))
    x2y2_up = _up(_up(x * x) + _up(y * y))

    # interval image and derivative of g over each fine half [fa, fb]
    U_dn = _vdn(1.0 - _vup(fb * fb))
    U_up = _vup(1.0 - _vdn(fa * fa))
    Rxy_dn = _vdn(np.minimum(fa * xy_dn, fb * xy_dn))
    Rxy_up = _vup(np.maximum(fa * xy_up, fb * xy_up))
    Q_dn = np.maximum(_vdn(x2y2_dn - 2.0 * Rxy_up), 0.0)
    Q_up = _vup(x2y2_up - 2.0 * Rxy_dn)
    E_dn = _vexp_dn(_vdn(-Q_up / (2.0 * U_dn)))
    E_up = _vexp_up(_vup(-Q_dn / (2.0 * U_up)))
    W_dn = _vdn(1.0 / _vup(np.sqrt(U_up)))
    W_up = _vup(1.0 / _vdn(np.sqrt(U_dn)))
    img_dn = np.maximum(_vdn(E_dn * W_dn), 0.0)
    img_up = _vup(E_up * W_up)

    # g' = E * ((xy*u - r*q)/u^(5/2) + r/u^(3/2)) over each fine half
    sqU_dn = _vdn(np.sqrt(U_dn))
    sqU_up = _vup(np.sqrt(U_up))
    u32_dn = _vdn(U_dn * sqU_dn)
    u32_up = _vup(U_up * sqU_up)
    u52_dn = _vdn(u32_dn * U_dn)
    u52_up = _vup(u32_up * U_up)
    xyU_dn = _vdn(np.minimum(xy_dn * U_dn, xy_dn * U_up))
    xyU_up = _vup(np.maximum(xy_up * U_dn, xy_up * U_up))
    rq_dn = _vdn(fa * Q_dn)  # r >= 0 and Q >= 0
    rq_up = _vup(fb * Q_up)
    n1_dn = _vdn(xyU_dn - rq_up)
    n1_up = _vup(xyU_up - rq_dn)
    t1_dn = _vdn(np.where(n1_dn >= 0, n1_dn / u52_up, n1_dn / u52_dn))
    t1_up = _vup(np.where(n1_up >= 0, n1_up / u52_dn, n1_up / u52_up))
    t2_dn = _vdn(fa / u32_up)
    t2_up = _vup(fb / u32_dn)
    s_dn = _vdn(t1_dn + t2_dn)
    s_up = _vup(t1_up + t2_up)
    gp_dn = _vdn(np.minimum(E_dn * s_dn, E_up * s_dn))  # E >= 0
    gp_up = _vup(np.maximum(E_dn * s_up, E_up * s_up))

    # image-based enclosure of each fine subintegral
    hf_dn = np.maximum(_vdn(fb - fa), 0.0)
    hf_up = _vup(fb - fa)
    fine_dn = _vdn(hf_dn * img_dn)
    fine_up = _vup(hf_up * img_up)
    img_enc_dn = _vdn(fine_dn[0::2] + fine_dn[1::2])
    img_enc_up = _vup(fine_up[0::2] + fine_up[1::2])

    # midpoint form on coarse subintervals; m is the shared interior node
    a = nodes[0:-2:2]
    m = nodes[1:-1:2]
    b = nodes[2::2]
    u_dn = _vdn(1.0 - _vup(m * m))
    u_up = _vup(1.0 - _vdn(m * m))
    mxy_dn = _vdn(m * xy_dn)
    mxy_up = _vup(m * xy_up)
    q_dn = np.maximum(_vdn(x2y2_dn - 2.0 * mxy_up), 0.0)
    q_up = _vup(x2y2_up - 2.0 * mxy_dn)
    e_dn = _vexp_dn(_vdn(-q_up / (2.0 * u_dn)))
    e_up = _vexp_up(_vup(-q_dn / (2.0 * u_up)))
    gm_dn = np.maximum(_vdn(e_dn * _vdn(1.0 / _vup(np.sqrt(u_up)))), 0.0)
    gm_up = _vup(e_up * _vup(1.0 / _vdn(np.sqrt(u_dn))))
    h_dn = np.maximum(_vdn(b - a), 0.0)
    h_up = _vup(b - a)
    base_dn = _vdn(h_dn * gm_dn)
    base_up = _vup(h_up * gm_up)

    cl_dn = np.maximum(_vdn(0.5 * _vdn((m - a) * (m - a))), 0.0)
    cl_up = _vup(0.5 * _vup((m - a) * (m - a)))
    cr_dn = np.maximum(_vdn(0.5 * _vdn((b - m) * (b - m))), 0.0)
    cr_up = _vup(0.5 * _vup((b - m) * (b - m)))
    gl_dn, gl_up = gp_dn[0::2], gp_up[0::2]
    gr_dn, gr_up = gp_dn[1::2], gp_up[1::2]
    r_dn = _vdn(np.minimum(gr_dn * cr_dn, gr_dn * cr_up))
    r_up = _vup(np.maximum(gr_up * cr_dn, gr_up * cr_up))
    l_dn = _vdn(np.minimum(gl_dn * cl_dn, gl_dn * cl_up))
    l_up = _vup(np.maximum(gl_up * cl_dn, gl_up * cl_up))
    mid_enc_dn = _vdn(_vdn(base_dn + r_dn) - l_up)
    mid_enc_up = _vup(_vup(base_up + r_up) - l_dn)

    enc_dn = np.maximum(np.maximum(img_enc_dn, mid_enc_dn), 0.0)
    enc_up = np.minimum(img_enc_up, mid_enc_up)
    lo = _fsum_dn(enc_dn)
    hi = _fsum_up(enc_up)
    return max(0.0, lo), hi


def _binorm_point_core(x: float, y: float, r: float, n: int) -> tuple[float, float]:
    """Certified bounds on Phi_r(x, y) for finite x, y and 0 <= r <= 1."""
    px_lo, px_hi = _phi_point(x)
    py_lo, py_hi = _phi_point(y)
    fre_lo = max(0.0, _dn(px_lo * py_lo))  # product is the r=0 floor; r >= 0
    fre_hi = min(px_hi, py_hi)
    if r == 0.0:
        return fre_lo, min(fre_hi, _up(px_hi * py_hi))

    rr = min(r, _RSTAR)
    i_lo, i_hi = _dw_integral(x, y, rr, n)
    if r > _RSTAR:
        # sliver bound: 0 <= int <= sup(E) * (acos(rr) - acos(r)) <= sup(E)*acos(RSTAR)
        # over [RSTAR, 1]: q/(2(1-r^2)) >= 32 (x-y)^2 + min(xy/2, xy)
        d_dn, d_up = _dn(x - y), _up(x - y)
        d2 = 0.0 if d_dn <= 0.0 <= d_up else max(0.0, _dn(min(abs(d_dn), abs(d_up)) ** 2))
        xy_dn = _dn(x * y)
        hmin = _dn(_dn(32.0 * d2) + min(_dn(xy_dn / 2.0), xy_dn))
        esup = _exp_up(-hmin)
        i_hi = _up(i_hi + _up(esup * _ACOS_RSTAR_HI))

    total = Interval(i_lo, i_hi) * _IV_INV_2PI + Interval(
        _dn(px_lo * py_lo), _up(px_hi * py_hi)
    )
    # every bound above is sound for the same true value, so they must agree
    lo = max(fre_lo, total.lo, 0.0)
    hi = min(fre_hi, total.hi, 1.0)
    assert lo <= hi, (x, y, r, lo, hi)
    return lo, hi


def _binorm_point(x: float, y: float, r: float, n: int) -> tuple[float, float]:
    """Certified bounds on Phi_r(x, y); thresholds may be +-inf, -1<=r<=1."""
    if x == -_INF or y == -_INF:
        return 0.0, 0.0
    if x == _INF:
        return _phi_point(y)
    if y == _INF:
        return _phi_point(x)
    if r >= 0.0:
        return _binorm_point_core(x, y, r, n)
    # Phi_r(x, y) = Phi(x) - Phi_{-r}(x, -y)
    px_lo, px_hi = _phi_point(x)
    b_lo, b_hi = _binorm_point_core(x, -y, -r, n)
    py_lo, py_hi = _phi_point(y)
    lo = max(0.0, _dn(px_lo - b_hi), _dn(px_lo + py_lo - 1.0))
    hi = min(1.0, _up(px_hi - b_lo), px_hi, py_hi)
    assert lo <= hi, (x, y, r, lo, hi)
    return lo, hi


def iv_binorm_cdf(
    t1: Interval,
    t2: Interval,
    rho: Interval,
    n_sub: int = 256,
    width_target: float = 1e-6,
    max_doublings: int = 4,
) -> Interval:
    """Enclosure of {Phi_r(x, y) : x in t1, y in t2, r in rho}.

    Phi_rho is nondecreasing in all three arguments (the rho-derivative is
    the positive bivariate density), so the enclosure comes from certified
    point evaluations at the two corners.  The partition count doubles until
    the width target is met or the doubling cap runs out.
    """
    if rho.lo < -1.0 or rho.hi > 1.0:
        raise ValueError(f"correlation interval out of range: {rho}")
    n = n_sub
    for _ in range(max_doublings + 1):
        lo, _ = _binorm_point(t1.lo, t2.lo, rho.lo, n)
        _, hi = _binorm_point(t1.hi, t2.hi, rho.hi, n)
        if hi - lo <= width_target:
            break
        n *= 2
    return Interval(lo, max(lo, hi))


def iv_binorm_partials(
    t1: Interval, t2: Interval, rho: Interval
) -> tuple[Interval, Interval, Interval]:
    """Interval enclosures of (d/drho, d/dt1, d/dt2) of Phi_rho.

    Requires rho strictly inside (-1, 1) and finite thresholds; used for
    derivative pruning, which must keep away from the boundary anyway.
    """
    if rho.lo <= -1.0 or rho.hi >= 1.0:
        raise ValueError(f"partials need rho strictly inside (-1,1): {rho}")
    if math.isinf(t1.lo) or math.isinf(t1.hi) or math.isinf(t2.lo) or math.isinf(t2.hi):
        raise ValueError("partials need finite thresholds")
    one_minus = (1.0 - rho.square()).intersect(Interval(0.0, 1.0))
    s = one_minus.sqrt()
    if s.lo <= 0.0:
        raise ValueError(f"correlation too close to +-1 for partials: {rho}")
    q = t1.square() - 2.0 * (rho * t1 * t2) + t2.square()
    q = Interval(max(q.lo, 0.0), max(q.hi, 0.0))
    d_rho = (-q / (2.0 * one_minus)).exp() * _IV_INV_2PI / s
    pdf1 = (-(t1.square()) / 2.0).exp() * _IV_INV_SQRT_2PI
    pdf2 = (-(t2.square()) / 2.0).exp() * _IV_INV_SQRT_2PI
    d_t1 = pdf1 * iv_std_cdf((t2 - rho * t1) / s)
    d_t2 = pdf2 * iv_std_cdf((t1 - rho * t2) / s)
    clamp = lambda v: Interval(max(0.0, v.lo), max(0.0, v.hi))
    return clamp(d_rho), clamp(d_t1), clamp(d_t2)
