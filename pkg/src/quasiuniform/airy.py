"""Airy-function kernel: values, log-derivatives of Ai + t*Bi, and Ai zeros.

The rest of the package never needs Ai/Bi values themselves in the regimes
where they overflow or oscillate violently; what it needs everywhere is the
logarithmic derivative

    y1(a; t) = (Ai'(a) + t Bi'(a)) / (Ai(a) + t Bi(a))

for a real mixing parameter t, or for the complex combinations t = +-i, plus
the companion quantity

    y2(a; t) = (-8 a^2 y1^2 - 4 a y1 + 8 a^3 - 3) / 30 .

Three evaluation regimes:

* |a| <= 8: direct ratios of Ai, Ai', Bi, Bi' (AMOS via scipy.special).
* a < -8, t = +-i: the combination w = Ai + i*Bi is treated as a single
  analytic object through its large-argument expansion.  Evaluating Ai(a)
  and Bi(a) separately and dividing would push huge oscillatory phases
  through scipy's argument reduction and destroy the small real part of y1;
  the series form is smooth and cancellation-free.
* a > 8, t = 0: ratio asymptotics of Ai'/Ai, so no underflow of Ai itself.

For a < -8 the direct formula for y2 cancels catastrophically (the 8a^3-size
terms annihilate to leave an O(|a|^-3/2) remainder), so y2 is evaluated from
the same asymptotic series as y1, where the cancellation is done in exact
arithmetic on the series coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "AiryQuad",
    "AiryOverflowError",
    "AiryPoleError",
    "BranchSelector",
    "airy_quad",
    "log_deriv_combo",
    "log_deriv_pair",
    "log_deriv_triple",
    "airy_zero",
    "ASYMPTOTIC_SWITCH",
]

# Regime split between direct ratios and asymptotic series.  Both sides
# deliver <= 1e-12 here; the overlap band is tested at +-7.5, +-8, +-8.5.
ASYMPTOTIC_SWITCH = 8.0


class AiryOverflowError(OverflowError):
    """Bi/Bi' not representable at this argument (large positive a)."""

    def __init__(self, a):
        super().__init__(f"Bi(a) overflows at a={a!r}")
        self.a = a


class AiryPoleError(ArithmeticError):
    """Ai + t*Bi vanishes at (or numerically indistinguishably near) a."""

    def __init__(self, a, t):
        super().__init__(f"Ai + t*Bi has a zero at a={a!r} (t={t!r})")
        self.a = a
        self.t = t


@dataclass(frozen=True)
class AiryQuad:
    """Ai, Ai', Bi, Bi' at one real argument."""

    ai: float
    aip: float
    bi: float
    bip: float

    def wronskian(self) -> float:
        """ai*bip - aip*bi; equals 1/pi identically."""
        return self.ai * self.bip - self.aip * self.bi


@dataclass(frozen=True)
class BranchSelector:
    """Which particular solution the log-derivative follows.

    kind is one of "real" (with mixing parameter t), "plus_i", "minus_i".
    Real t is meaningful only where the solution is non-oscillatory
    (classically forbidden side); the complex pair lives inside the well.
    """

    kind: str
    t: float = 0.0

    @classmethod
    def real(cls, t: float) -> "BranchSelector":
        return cls("real", float(t))

    @classmethod
    def plus_i(cls) -> "BranchSelector":
        return cls("plus_i")

    @classmethod
    def minus_i(cls) -> "BranchSelector":
        return cls("minus_i")

    @property
    def is_complex(self) -> bool:
        return self.kind in ("plus_i", "minus_i")


def airy_quad(a: float) -> AiryQuad:
    """All four Airy values at a real argument.

    Raises AiryOverflowError once Bi/Bi' exceed double range (a >~ 104);
    callers on that side only ever need the decaying ratio Ai'/Ai, which
    log_deriv_combo provides without overflow.
    """
    a = float(a)
    if not math.isfinite(a):
        raise ValueError(f"airy_quad requires finite a, got {a!r}")
    ai, aip, bi, bip = special.airy(a)
    if not (math.isfinite(bi) and math.isfinite(bip)):
        raise AiryOverflowError(a)
    return AiryQuad(float(ai), float(aip), float(bi), float(bip))


# --- asymptotic series machinery -------------------------------------------
#
# With z = |a|, zeta = (2/3) z^(3/2) and the standard coefficients
#   u_0 = 1,  u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k),
# the single-sided combination w = Ai + i*Bi at a = -z has
#   w ~ C z^(-1/4) exp(-i zeta) W(e),  W(e) = sum_m u_m e^m,  e = i/zeta,
# while Ai at a = +z has the same form with e = -1/zeta and exp(-zeta).
# Logarithmic differentiation gives, with V(e) = sum_m m u_m e^m,
#   y1(a;+i) = i sqrt(z) + 1/(4z) + sqrt(z) V/(zeta W)          (a < 0)
#   y1(a; 0) = -sqrt(a) - 1/(4a) - sqrt(a) V/(zeta W)           (a > 0)
# and substituting into y2 cancels every polynomially large term exactly:
#   y2 = ( D(e)/W(e) - 18 (V/W)^2 ) / 30,
#   D(e) = sum_j d_j e^j,  d_j = 36 (j+1) u_{j+1} - (5/2) u_j   (d_0 = 0).

_N_TERMS = 21


def _u_coeffs(n):
    u = [1.0]
    for k in range(1, n + 1):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    return u


_U = _u_coeffs(_N_TERMS)
_D = [36.0 * (j + 1) * _U[j + 1] - 2.5 * _U[j] for j in range(_N_TERMS)]


def _series_wvd(e):
    """W, V, D sums for array-valued expansion variable e."""
    w = np.zeros_like(e)
    v = np.zeros_like(e)
    d = np.zeros_like(e)
    p = np.ones_like(e)
    for m in range(_N_TERMS):
        term = _U[m] * p
        w += term
        v += m * term
        d += _D[m] * p
        p = p * e
    return w, v, d


def _pair_oscillatory_asym(a):
    """(y1, y2) for t=+i on a < -ASYMPTOTIC_SWITCH (array in, array out)."""
    z = -a
    sqz = np.sqrt(z)
    zeta = (2.0 / 3.0) * z * sqz
    w, v, d = _series_wvd(1j / zeta)
    y1 = 1j * sqz + 1.0 / (4.0 * z) + sqz * v / (zeta * w)
    y2 = (d / w - 18.0 * (v / w) ** 2) / 30.0
    return y1, y2


def _pair_decaying_asym(a):
    """(y1, y2) for t=0 on a > ASYMPTOTIC_SWITCH (array in, array out)."""
    sqa = np.sqrt(a)
    zeta = (2.0 / 3.0) * a * sqa
    w, v, d = _series_wvd(-1.0 / zeta)
    y1 = -sqa - 1.0 / (4.0 * a) - sqa * v / (zeta * w)
    y2 = (d / w - 18.0 * (v / w) ** 2) / 30.0
    return y1, y2


def _y2_direct(a, y1):
    return (-8.0 * a * a * y1 * y1 - 4.0 * a * y1 + 8.0 * a ** 3 - 3.0) / 30.0


# --- residual core ----------------------------------------------------------
#
# The Riccati residual of Y = b1 y1 + b2 y2 collapses, after substituting
# the chain-rule derivative and the Airy identity y1' = a - y1^2, to
#
#   R = b2^2 * B2(a; t) + (Q'''/Q') * y2,
#   B2 = y2^2 - y2 + (4/3) a y1 y2 - (4/9) a^3 + (4/9) a^2 y1^2 + (2/9) a y1
#
# (every b1*b2 cross term cancels identically).  B2 decays like |a|^-3 on
# the oscillatory branch while its defining formula subtracts numbers of
# size |a|^3, so for large negative a it is evaluated from its own exact
# expansion B2 = sum_j gamma_j e^j, e = i/zeta, derived by exact rational
# series algebra from the same u_k data (gamma_2 = 19/144, gamma_3 =
# 115/216, ...).  The direct formula stays more accurate than the series
# down to a ~ -12, hence the separate switch point.

_B2_SWITCH = -9.0
_B2_GAMMA = [
    0.0,
    0.0,
    19.0 / 144.0,
    115.0 / 216.0,
    1309.0 / 648.0,
    1567.0 / 192.0,
    6715639.0 / 186624.0,
    129707035.0 / 746496.0,
    6156718505.0 / 6718464.0,
    847387145515.0 / 161243136.0,
    1971886625335.0 / 60466176.0,
    124938527219065.0 / 573308928.0,
    3398522150250425.0 / 2176782336.0,
    11942460.757486576,
    97173452.24228193,
    838245318.0651212,
    7642501033.434654,
    73440192133.24434,
    741937280574.519,
    7861990096038.769,
    87198934281779.66,
    1010321909059379.4,
    1.2206790077857232e+16,
    1.5353907032405773e+17,
    2.0074640244495524e+18,
    2.7244031407726305e+19,
    3.832796921720703e+20,
    5.582719112699356e+21,
    8.409320143072429e+22,
    1.308556306880362e+24,
    2.1013599422587716e+25,
    3.479135524475698e+26,
    5.933561981848188e+27,
    1.0415143302193633e+29,
    1.8800666942408641e+30,
    3.4874719769962094e+31,
]


def _b2_core_direct(a, y1, y2):
    return (
        y2 * y2 - y2 + (4.0 / 3.0) * a * y1 * y2 - (4.0 / 9.0) * a ** 3
        + (4.0 / 9.0) * a * a * y1 * y1 + (2.0 / 9.0) * a * y1
    )


def _b2_core_series(a):
    z = -np.asarray(a, dtype=float)
    zeta = (2.0 / 3.0) * z * np.sqrt(z)
    e = 1j / zeta
    acc = np.zeros(z.shape, dtype=complex)
    p = np.ones(z.shape, dtype=complex)
    for g in _B2_GAMMA:
        acc += g * p
        p = p * e
    return acc


def _pair_plus_i(a):
    """(y1, y2) along t=+i for an array of real arguments."""
    a = np.asarray(a, dtype=float)
    y1 = np.empty(a.shape, dtype=complex)
    y2 = np.empty(a.shape, dtype=complex)
    near = a >= -ASYMPTOTIC_SWITCH
    if np.any(near):
        an = a[near]
        ai, aip, bi, bip = special.airy(an)
        y1n = (aip + 1j * bip) / (ai + 1j * bi)
        y1[near] = y1n
        y2[near] = _y2_direct(an, y1n)
    far = ~near
    if np.any(far):
        y1[far], y2[far] = _pair_oscillatory_asym(a[far])
    return y1, y2


def _pair_real(a, t):
    """(y1, y2) along real t; t=0 switches to ratio asymptotics for a > 8."""
    a = np.asarray(a, dtype=float)
    y1 = np.empty(a.shape, dtype=float)
    y2 = np.empty(a.shape, dtype=float)
    far = (a > ASYMPTOTIC_SWITCH) & (t == 0.0)
    near = ~far
    if np.any(near):
        an = a[near]
        ai, aip, bi, bip = special.airy(an)
        den = ai + t * bi
        at_pole = np.abs(den) <= 1e-13 * (1.0 + abs(t)) * np.hypot(ai, bi)
        if np.any(at_pole):
            raise AiryPoleError(float(an[at_pole][0]), t)
        y1n = (aip + t * bip) / den
        y1[near] = y1n
        y2[near] = _y2_direct(an, y1n)
    if np.any(far):
        y1[far], y2[far] = _pair_decaying_asym(a[far])
    return y1, y2


def log_deriv_pair(a, branch: BranchSelector):
    """Joint (y1, y2) evaluation sharing one Airy computation.

    Accepts scalar or array a.  Complex branches return complex arrays; the
    minus_i branch is the plus_i code path conjugated, so the conjugation
    symmetry y1(a;-i) = conj(y1(a;+i)) holds exactly as computed.
    """
    if branch.kind == "plus_i":
        return _pair_plus_i(a)
    if branch.kind == "minus_i":
        y1, y2 = _pair_plus_i(a)
        return np.conj(y1), np.conj(y2)
    return _pair_real(a, branch.t)


def log_deriv_triple(a, branch: BranchSelector):
    """(y1, y2, B2) with the residual core evaluated cancellation-free."""
    a = np.asarray(a, dtype=float)
    if branch.kind == "real":
        y1, y2 = _pair_real(a, branch.t)
        return y1, y2, _b2_core_direct(a, y1, y2)
    y1, y2 = _pair_plus_i(a)
    b2c = np.empty(a.shape, dtype=complex)
    near = a >= _B2_SWITCH
    if np.any(near):
        b2c[near] = _b2_core_direct(a[near], y1[near], y2[near])
    far = ~near
    if np.any(far):
        b2c[far] = _b2_core_series(a[far])
    if branch.kind == "minus_i":
        return np.conj(y1), np.conj(y2), np.conj(b2c)
    return y1, y2, b2c


def log_deriv_combo(a: float, branch: BranchSelector) -> complex:
    """y1(a; branch) at one real argument.

    Real branches yield a real-valued complex number; a zero of Ai + t*Bi
    raises AiryPoleError carrying the offending argument.
    """
    y1, _ = log_deriv_pair(np.asarray([float(a)]), branch)
    val = complex(y1[0])
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        if not branch.is_complex:
            raise AiryPoleError(float(a), branch.t)
        raise ArithmeticError(f"non-finite log-derivative at a={a!r}")
    return val


def airy_zero(index: int) -> float:
    """index-th negative zero of Ai (index >= 1), |Ai(zero)| <= 1e-12.

    Seeded from the asymptotic zero formula and polished by bracketed
    bisection/secant iteration on airy_quad.
    """
    if index < 1 or index != int(index):
        raise ValueError(f"zero index must be a positive integer, got {index!r}")
    # Asymptotic seed: z_s ~ -T(3 pi (4s-1)/8), T(t) = t^(2/3) (1 + 5/(48 t^2)).
    tt = 3.0 * math.pi * (4 * index - 1) / 8.0
    seed = -(tt ** (2.0 / 3.0)) * (1.0 + 5.0 / (48.0 * tt * tt))
    lo, hi = seed - 0.3, seed + 0.3
    flo, fhi = airy_quad(lo).ai, airy_quad(hi).ai
    while flo * fhi > 0.0:  # seed is good; this is just belt and braces
        lo -= 0.2
        hi += 0.2
        flo, fhi = airy_quad(lo).ai, airy_quad(hi).ai
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = airy_quad(mid).ai
        if fmid == 0.0 or (hi - lo) < 1e-16 * abs(mid):
            return mid
        if flo * fmid < 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)
