"""Special-function identities behind the symmetric and non-symmetric families.

Covers Pochhammer symbols, the Gauss duplication formula, the collapse of the
Jacobi 2F1 generating function to a binomial (1F0) series, and the four
generating-function identities that tie scaled Gegenbauer and shifted Jacobi
polynomials to their closed forms.  Each check returns a residual magnitude;
the caller compares it against the documented tolerance.

Classical monic recurrence coefficients on [-1, 1] are implemented here from
the standard formulas and are cross-validated in the test suite against the
Stieltjes procedure run on the corresponding Beta densities.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import measures
from .errors import DomainError, ParameterError
from .families import Family
from .recurrence import JacobiSzegoSequence, eval_monic

_CAP = 200


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameters of a Gauss 2F1 series evaluation.

    upper holds the two numerator parameters, lower the single denominator
    parameter; the series requires |argument| < 1 and a lower parameter that
    is not a non-positive integer.
    """

    upper: tuple[float, float]
    lower: float
    argument: float

    def __post_init__(self):
        if abs(self.argument) >= 1.0:
            raise DomainError(
                f"2F1 series needs |argument| < 1, got {self.argument}"
            )
        if self.lower <= 0.0 and float(self.lower).is_integer():
            raise ParameterError(
                f"lower parameter {self.lower} is a non-positive integer"
            )


def gauss_2f1(params: HypergeometricParams) -> float:
    """Plain 2F1 series sum_n (u1)_n (u2)_n / ((l)_n n!) * argument^n."""
    u1, u2 = params.upper
    low = params.lower
    arg = params.argument
    total = 0.0
    term = 1.0
    quiet = 0
    for n in range(2000):
        total += term
        if abs(term) <= 1e-17 * abs(total):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        term *= (u1 + n) * (u2 + n) * arg / ((low + n) * (n + 1.0))
    return total


def pochhammer(lam: float, n: int) -> float:
    """Rising factorial (lam)_n = lam (lam+1) ... (lam+n-1), with ()_0 = 1."""
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    out = 1.0
    for k in range(n):
        out *= lam + k
    return out


def pochhammer_over_factorial(lam: float, count: int) -> np.ndarray:
    """Coefficients (lam)_n / n! for n < count, by the stable ratio recurrence."""
    out = np.empty(count)
    c = 1.0
    for n in range(count):
        out[n] = c
        c *= (lam + n) / (n + 1.0)
    return out


def duplication_check(a: float) -> float:
    """Log-scale residual of sqrt(pi) Gamma(2a) = 2^(2a-1) Gamma(a) Gamma(a+1/2)."""
    if a <= 0.0:
        raise ParameterError(f"a must be > 0, got {a}")
    lhs = 0.5 * math.log(math.pi) + math.lgamma(2.0 * a)
    rhs = (2.0 * a - 1.0) * math.log(2.0) + math.lgamma(a) + math.lgamma(a + 0.5)
    return abs(lhs - rhs)


def pochhammer_ratio_check(lam: float, n: int) -> float:
    """Relative residual of (2 lam - 1)_{2n} / (lam - 1/2)_n = 4^n (lam)_n."""
    if lam <= 0.5:
        raise ParameterError(f"lambda must be > 1/2, got {lam}")
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    lhs = pochhammer(2.0 * lam - 1.0, 2 * n) / pochhammer(lam - 0.5, n)
    rhs = 4.0**n * pochhammer(lam, n)
    return abs(lhs - rhs) / abs(rhs)


def one_f_zero_reduction(lam: float, y: float) -> float:
    """Residual of the binomial series sum_n (lam)_n y^n / n! = (1-y)^(-lam)."""
    if abs(y) >= 1.0:
        raise DomainError(f"|y| must be < 1, got {y}")
    total = 0.0
    term = 1.0
    quiet = 0
    for n in range(1000):
        total += term
        if abs(term) <= 1e-17 * abs(total):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        term *= (lam + n) * y / (n + 1.0)
    return abs(total - (1.0 - y) ** (-lam))


# ----------------------------------------------------------------------------
# Classical monic recurrences on [-1, 1]


def gegenbauer_omega(n: int, lam: float) -> float:
    """omega_n of the monic Gegenbauer system, weight (1-x^2)^(lam-1/2)."""
    if n <= 0:
        return 1.0
    return n * (n + 2.0 * lam - 1.0) / (4.0 * (n + lam) * (n + lam - 1.0))


def jacobi_alpha(n: int, alf: float, bet: float) -> float:
    """alpha_n of the monic Jacobi system, weight (1-x)^alf (1+x)^bet."""
    if n == 0:
        return (bet - alf) / (alf + bet + 2.0)
    s = 2.0 * n + alf + bet
    return (bet * bet - alf * alf) / (s * (s + 2.0))


def jacobi_omega(n: int, alf: float, bet: float) -> float:
    """omega_n of the monic Jacobi system (omega_0 = 1 by convention)."""
    if n <= 0:
        return 1.0
    if n == 1:
        s = alf + bet
        return 4.0 * (alf + 1.0) * (bet + 1.0) / ((s + 2.0) ** 2 * (s + 3.0))
    s = 2.0 * n + alf + bet
    return (
        4.0 * n * (n + alf) * (n + bet) * (n + alf + bet)
        / (s * s * (s + 1.0) * (s - 1.0))
    )


def gegenbauer_sequence(lam: float) -> JacobiSzegoSequence:
    return JacobiSzegoSequence(
        alpha=lambda n: 0.0,
        omega=lambda n: gegenbauer_omega(n, lam),
        standardized=False,
    )


def jacobi_sequence(alf: float, bet: float) -> JacobiSzegoSequence:
    return JacobiSzegoSequence(
        alpha=lambda n: jacobi_alpha(n, alf, bet),
        omega=lambda n: jacobi_omega(n, alf, bet),
        standardized=False,
    )


def _adaptive_sum(terms) -> complex:
    total = 0.0 + 0.0j
    quiet = 0
    for t in terms:
        total += t
        if abs(t) <= 1e-15 * abs(total):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    return total


def _principal_power(w: complex, expo: float) -> complex:
    return cmath.exp(expo * cmath.log(w))


# ----------------------------------------------------------------------------
# Generating-function identities


def gegenbauer_gf_check(lam: float, z: complex, x: float, n_terms: int) -> float:
    """Residual of sum_n 2^n (lam)_n/n! C_n(x) z^n = (1 - 2zx + z^2)^(-lam)."""
    if abs(x) > 1.0:
        raise ParameterError(f"|x| must be <= 1, got {x}")
    z = complex(z)
    if abs(z) > 0.3:
        raise DomainError(f"|z| must be <= 0.3, got {abs(z)}")
    table = eval_monic(gegenbauer_sequence(lam), n_terms - 1, x)
    coefs = pochhammer_over_factorial(lam, n_terms)
    series = _adaptive_sum(
        coefs[n] * table.values[n] * (2.0 * z) ** n for n in range(n_terms)
    )
    closed = _principal_power(1.0 - 2.0 * z * x + z * z, -lam)
    return abs(series - closed)


def _scaled_gegenbauer_series(lam_coeff: float, lam_poly: float, scale: float,
                              z: complex, x: float) -> complex:
    """sum_n (lam_coeff)_n/n! * scale^n C_n^{lam_poly}(x/scale) * z^n."""
    table = eval_monic(gegenbauer_sequence(lam_poly), _CAP - 1, x / scale)
    coefs = pochhammer_over_factorial(lam_coeff, _CAP)
    sz = scale * complex(z)
    return _adaptive_sum(coefs[n] * table.values[n] * sz**n for n in range(_CAP))


def tilde_gegenbauer_identity(lam: float, z: complex, x: float) -> float:
    """Residual of the scaled Gegenbauer generating function.

    The polynomials are sqrt(2(1+lam))^n C_n(x / sqrt(2(1+lam))) and the
    closed form is (1 - zx + (1+lam) z^2 / 2)^(-lam).
    """
    scale = math.sqrt(2.0 * (1.0 + lam))
    series = _scaled_gegenbauer_series(lam, lam, scale, z, x)
    z = complex(z)
    closed = _principal_power(1.0 - z * x + 0.5 * (1.0 + lam) * z * z, -lam)
    return abs(series - closed)


def family2_identity(lam: float, z: complex, x: float) -> float:
    """Residual of the second symmetric family's generating function.

    The polynomials carry Gegenbauer parameter lam - 1 (scale sqrt(2 lam))
    while the series coefficient keeps (lam)_n; the closed form is
    (1 - lam z^2/2) / (1 - zx + lam z^2/2)^lam.
    """
    if lam <= 0.5:
        raise ParameterError(f"lambda must be > 1/2, got {lam}")
    if abs(lam - 1.0) < 1e-9:
        raise ParameterError("lambda = 1 is excluded for the second symmetric family")
    scale = math.sqrt(2.0 * lam)
    series = _scaled_gegenbauer_series(lam, lam - 1.0, scale, z, x)
    z = complex(z)
    closed = (1.0 - 0.5 * lam * z * z) * _principal_power(
        1.0 - z * x + 0.5 * lam * z * z, -lam
    )
    return abs(series - closed)


def jacobi_shift_check(lam: float, n: int, x: float, sign: str) -> float:
    """Relative residual between a catalog non-symmetric polynomial and its
    scaled-shifted classical monic Jacobi form.

    For sign "plus": P_n(x) = k^n p_n^{(l-1/2, l-3/2)}((sqrt(2l-1) x - 1)/(2l))
    with k = 2l/sqrt(2l-1); for "minus" the parameters swap and the shift
    reflects, matching p_n at (sqrt(2l-1) x + 1)/(2l).
    """
    if sign not in ("plus", "minus"):
        raise ParameterError(f"sign must be 'plus' or 'minus', got {sign!r}")
    root = math.sqrt(2.0 * lam - 1.0)
    k = 2.0 * lam / root
    if sign == "plus":
        family = Family.NONSYM_PLUS
        alf, bet = lam - 0.5, lam - 1.5
        y = (root * x - 1.0) / (2.0 * lam)
    else:
        family = Family.NONSYM_MINUS
        alf, bet = lam - 1.5, lam - 0.5
        y = (root * x + 1.0) / (2.0 * lam)
    catalog = eval_monic(measures.family_sequence(family, lam), n, x).values[n]
    oracle = k**n * eval_monic(jacobi_sequence(alf, bet), n, y).values[n]
    return abs(catalog - oracle) / max(1.0, abs(oracle))


def jacobi_2f1_gf_check(lam: float, t: float, y: float) -> float:
    """Residual of sum_n (lam)_n/n! p_n^{(l-1/2, l-3/2)}(y) (2t)^n
    = (1+t)/(1 + t^2 - 2ty)^lam."""
    if abs(t) >= 0.3:
        raise DomainError(f"|t| must be < 0.3, got {t}")
    if abs(y) >= 1.0:
        raise DomainError(f"|y| must be < 1, got {y}")
    table = eval_monic(jacobi_sequence(lam - 0.5, lam - 1.5), _CAP - 1, y)
    coefs = pochhammer_over_factorial(lam, _CAP)
    series = _adaptive_sum(
        coefs[n] * table.values[n] * (2.0 * t) ** n for n in range(_CAP)
    )
    closed = (1.0 + t) * (1.0 + t * t - 2.0 * t * y) ** (-lam)
    return abs(series - closed)


def two_f_one_collapse_check(lam: float, t: float, y: float) -> float:
    """Residual of the hypergeometric prefactor form against its collapse.

    With (alf, bet) = (lam-1/2, lam-3/2) the first numerator parameter
    (alf+bet+1)/2 equals the denominator parameter bet+1, so

        (1+t)^(-(alf+bet+1)) 2F1((alf+bet+1)/2, (alf+bet+2)/2; bet+1; w)

    with w = 2(y+1)t/(1+t)^2 reduces to (1+t)/(1 + t^2 - 2ty)^lam.  The left
    side is summed as a genuine 2F1 series (no term cancellation assumed).
    """
    if abs(t) >= 0.3:
        raise DomainError(f"|t| must be < 0.3, got {t}")
    if abs(y) >= 1.0:
        raise DomainError(f"|y| must be < 1, got {y}")
    alf, bet = lam - 0.5, lam - 1.5
    params = HypergeometricParams(
        upper=(0.5 * (alf + bet + 1.0), 0.5 * (alf + bet + 2.0)),
        lower=bet + 1.0,
        argument=2.0 * (y + 1.0) * t / (1.0 + t) ** 2,
    )
    lhs = (1.0 + t) ** (-(alf + bet + 1.0)) * gauss_2f1(params)
    rhs = (1.0 + t) * (1.0 + t * t - 2.0 * t * y) ** (-lam)
    return abs(lhs - rhs)


def gf3_equivalence(lam: float, z: float, x: float) -> float:
    """Residual between the rational-prefactor closed forms of the
    non-symmetric generating function and the product evaluation of psi.

    Checks the plus display
        (l/r) (z + r/l) [1 - z(x - 1/r) + l^2 z^2 / r^2]^(-l),  r = sqrt(2l-1),
    against psi for nonsym-plus, and the analogous minus display against
    psi for nonsym-minus; returns the larger of the two residuals.
    """
    from . import genfun  # local import; genfun depends on this module

    root = math.sqrt(2.0 * lam - 1.0)
    ratio = lam * lam / (2.0 * lam - 1.0)
    out = 0.0
    for family, sgn in ((Family.NONSYM_PLUS, 1.0), (Family.NONSYM_MINUS, -1.0)):
        cf = genfun.closed_form(family, lam)
        w = 1.0 - z * (x - sgn / root) + ratio * z * z
        closed = sgn * (lam / root) * (z + sgn * root / lam) * _principal_power(w, -lam)
        out = max(out, abs(closed - genfun.psi_analytic(cf, z, x)))
    return out
