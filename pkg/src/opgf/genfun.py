"""Generating functions of ultraspherical type.

The object of study is

    psi(z, x) = sum_{n>=0} (lambda)_n / n! * P_n(x) z^n
              = 1 / (u(z) * (f(z) - x)^lambda),

where (lambda)_n is the Pochhammer symbol, P_n are the monic orthogonal
polynomials of the measure, and powers take the principal branch.  Both
z*f(z) and u(z)/z^lambda extend analytically to z = 0 with value 1, so psi
tends to 1 as z -> 0.

Two evaluators are provided.  ``psi_closed`` is the literal product
u(z) * exp(lambda*Log(f(z)-x)) and refuses the branch cut of either factor.
``psi_analytic`` evaluates the equivalent factorization

    1 / [ (u(z)/z^lambda) * (z*f(z) - z*x)^lambda ]

whose power argument stays near 1 for small |z|; it agrees with psi_closed
off the negative real axis and continues the series across the cut, which is
what moment checks at negative real z need.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import families, measures
from .errors import BranchCutError, DomainError, ParameterError, SingularityError
from .families import Family
from .identities import pochhammer_over_factorial
from .recurrence import JacobiSzegoSequence, eval_monic

# Ratio rule for adaptive truncation: stop after this many consecutive terms
# below QUIET_FACTOR * |partial sum|; hard cap on the number of terms.
SERIES_CAP = 200
_QUIET_FACTOR = 1e-15
_QUIET_RUN = 3
_TAIL_WARN_FACTOR = 1e-8


@dataclass(frozen=True)
class GenFunClosedForm:
    """Closed-form data (f, u, g, domain) of one family's generating function.

    zf_coeffs holds the quadratic z*f(z) = c0 + c1 z + c2 z^2 (c0 = 1), and
    u_reduced is the analytic-at-0 ratio u(z)/z^lambda with value 1 at z = 0.
    g is f - Q_1/2 with Q_1(z) = (lambda+1) omega_2 z + alpha_1.
    """

    family: Family
    lam: float
    a: Optional[float]
    b: Optional[float]
    alpha1: float
    omega2: float
    zf_coeffs: tuple[float, float, float]
    f: Callable[[complex], complex]
    f_prime: Callable[[complex], complex]
    u: Callable[[complex], complex]
    u_reduced: Callable[[complex], complex]
    u_log_deriv: Callable[[complex], complex]
    g: Callable[[complex], complex]
    domain_radius: float
    excludes_negative_axis: bool


def _min_root_modulus(coeffs_desc) -> float:
    """Smallest modulus among the roots of a polynomial (inf if none)."""
    coeffs = np.array(coeffs_desc, dtype=float)
    nz = np.nonzero(np.abs(coeffs) > 1e-300)[0]
    if nz.size == 0:
        return math.inf
    coeffs = coeffs[nz[0]:]
    if coeffs.size < 2:
        return math.inf
    roots = np.roots(coeffs)
    return float(np.abs(roots).min()) if roots.size else math.inf


def closed_form(family, lam=None, a=None, b=None) -> GenFunClosedForm:
    """Closed forms f, u, g and domain data for a family."""
    family = Family(family)
    lam, a, b = families.validate_params(family, lam, a, b)
    alpha1 = families.alpha1_value(family, lam, a, b)
    omega2 = families.omega2_value(family, lam, a, b)
    excludes = True

    if family is Family.SYM1:
        c1, c2 = 0.0, 0.5 * (1.0 + lam)

        def u_reduced(z: complex) -> complex:
            return 1.0 + 0.0j

        def u_log_extra(z: complex) -> complex:
            return 0.0j

        radius = 0.9 * math.sqrt(2.0 / (1.0 + lam))

    elif family is Family.SYM2:
        c1, c2 = 0.0, 0.5 * lam

        def u_reduced(z: complex) -> complex:
            return 1.0 / (1.0 - 0.5 * lam * z * z)

        def u_log_extra(z: complex) -> complex:
            return lam * z / (1.0 - 0.5 * lam * z * z)

        radius = 0.9 * math.sqrt(2.0 / lam)

    elif family.nonsymmetric:
        sign = families.nonsym_sign(family)
        root = math.sqrt(2.0 * lam - 1.0)
        c1, c2 = sign / root, lam * lam / (2.0 * lam - 1.0)
        pole = sign * root / lam

        def u_reduced(z: complex) -> complex:
            return pole / (z + pole)

        def u_log_extra(z: complex) -> complex:
            return -1.0 / (z + pole)

        radius = 0.9 * root / lam

    else:
        c1, c2 = a, 1.0 + b

        def u_reduced(z: complex) -> complex:
            return 1.0 / (1.0 + a * z + b * z * z)

        def u_log_extra(z: complex) -> complex:
            return -(a + 2.0 * b * z) / (1.0 + a * z + b * z * z)

        candidates = [_min_root_modulus([1.0 + b, a, 1.0]),
                      _min_root_modulus([b, a, 1.0])]
        if b > -1.0:
            candidates.append(1.0 / math.sqrt(1.0 + b))
        radius = 0.9 * min(candidates)
        excludes = False

    lam_ = lam

    def f(z: complex) -> complex:
        return 1.0 / z + c1 + c2 * z

    def f_prime(z: complex) -> complex:
        return c2 - 1.0 / (z * z)

    def u(z: complex) -> complex:
        return complex(z) ** lam_ * u_reduced(z)

    def u_log_deriv(z: complex) -> complex:
        return lam_ / z + u_log_extra(z)

    half_q1_slope = 0.5 * (lam + 1.0) * omega2
    half_alpha1 = 0.5 * alpha1

    def g(z: complex) -> complex:
        return f(z) - half_q1_slope * z - half_alpha1

    return GenFunClosedForm(
        family=family, lam=lam, a=a, b=b, alpha1=alpha1, omega2=omega2,
        zf_coeffs=(1.0, c1, c2), f=f, f_prime=f_prime, u=u,
        u_reduced=u_reduced, u_log_deriv=u_log_deriv, g=g,
        domain_radius=radius, excludes_negative_axis=excludes,
    )


def check_in_domain(cf: GenFunClosedForm, z: complex) -> complex:
    """Validate z against the closed form's domain and return it as complex."""
    z = complex(z)
    if abs(z) >= cf.domain_radius:
        raise DomainError(
            f"|z| = {abs(z):.6g} is outside the domain radius {cf.domain_radius:.6g} "
            f"of {cf.family.value}"
        )
    if cf.excludes_negative_axis and z.imag == 0.0 and z.real <= 0.0:
        raise DomainError(
            f"z = {z} lies on the closed negative real axis, excluded for "
            f"{cf.family.value}"
        )
    return z


def psi_closed(cf: GenFunClosedForm, z: complex, x: float) -> complex:
    """psi(z, x) = 1 / (u(z) * exp(lambda * Log(f(z) - x))), principal branch."""
    z = check_in_domain(cf, z)
    w = cf.f(z) - x
    if w == 0:
        raise SingularityError(f"f(z) - x vanishes at z = {z}, x = {x}")
    if w.imag == 0.0 and w.real < 0.0:
        raise BranchCutError(
            f"f(z) - x = {w.real:.6g} lies on the branch cut (z = {z}, x = {x})",
            z=z, x=x,
        )
    return 1.0 / (cf.u(z) * cmath.exp(cf.lam * cmath.log(w)))


def psi_analytic(cf: GenFunClosedForm, z: complex, x: float) -> complex:
    """psi via the factorization that is analytic at z = 0.

    Evaluates 1 / [u_reduced(z) * (z f(z) - z x)^lambda]; the power argument
    tends to 1 as z -> 0, so this continues the series across the negative
    real z axis as long as z f(z) - z x stays off the non-positive reals.
    """
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j
    if abs(z) >= cf.domain_radius:
        raise DomainError(
            f"|z| = {abs(z):.6g} is outside the domain radius {cf.domain_radius:.6g}"
        )
    c0, c1, c2 = cf.zf_coeffs
    w = c0 + (c1 - x) * z + c2 * z * z
    if w == 0:
        raise SingularityError(f"z*(f(z) - x) vanishes at z = {z}, x = {x}")
    if w.imag == 0.0 and w.real < 0.0:
        raise BranchCutError(
            f"z*(f(z) - x) = {w.real:.6g} lies on the branch cut (z = {z}, x = {x})",
            z=z, x=x,
        )
    return 1.0 / (cf.u_reduced(z) * cmath.exp(cf.lam * cmath.log(w)))


class PsiSeriesResult(NamedTuple):
    """Partial sum, magnitude of the last retained term, and a convergence flag."""

    value: complex
    tail: float
    converged: bool


def psi_series(seq: JacobiSzegoSequence, lam: float, z: complex, x: float,
               n_terms: int) -> PsiSeriesResult:
    """Partial sum of sum_n (lambda)_n/n! P_n(x) z^n with n_terms terms.

    The tail field is the magnitude of the last retained term; the result is
    flagged non-converged when that exceeds 1e-8 * |partial sum|.
    """
    if n_terms < 1:
        raise ParameterError(f"n_terms must be >= 1, got {n_terms}")
    table = eval_monic(seq, n_terms - 1, x)
    coefs = pochhammer_over_factorial(lam, n_terms)
    z = complex(z)
    total = 0.0 + 0.0j
    zpow = 1.0 + 0.0j
    term = 0.0 + 0.0j
    for n in range(n_terms):
        term = coefs[n] * table.values[n] * zpow
        total += term
        zpow *= z
    tail = abs(term)
    return PsiSeriesResult(total, tail, tail <= _TAIL_WARN_FACTOR * abs(total))


def psi_series_auto(seq: JacobiSzegoSequence, lam: float, z: complex, x: float,
                    cap: int = SERIES_CAP) -> PsiSeriesResult:
    """Adaptively truncated series: stop after three consecutive terms below
    1e-15 * |partial sum|, never exceeding cap terms."""
    table = eval_monic(seq, cap - 1, x)
    coefs = pochhammer_over_factorial(lam, cap)
    z = complex(z)
    total = 0.0 + 0.0j
    zpow = 1.0 + 0.0j
    term = 0.0 + 0.0j
    quiet = 0
    for n in range(cap):
        term = coefs[n] * table.values[n] * zpow
        total += term
        if abs(term) <= _QUIET_FACTOR * abs(total):
            quiet += 1
            if quiet >= _QUIET_RUN:
                break
        else:
            quiet = 0
        zpow *= z
    tail = abs(term)
    return PsiSeriesResult(total, tail, tail <= _TAIL_WARN_FACTOR * abs(total))


def psi_family_moments(measure: measures.MeasureSpec, cf: GenFunClosedForm,
                       z: float, order: int) -> tuple[float, float, float]:
    """Moments m_i = integral of x^i psi(z, x) d(measure), i = 0, 1, 2.

    For real z in the domain these satisfy m0 = 1, m1 = lambda*z and
    m2 = lambda(lambda+1)/2 * omega_2 z^2 + lambda*alpha_1 z + 1.
    """
    z = float(z)
    if abs(z) >= cf.domain_radius:
        raise DomainError(
            f"|z| = {abs(z):.6g} is outside the domain radius {cf.domain_radius:.6g}"
        )
    if order < 12:
        raise ParameterError(f"quadrature order must be >= 12, got {order}")
    rule = measures.gauss_quadrature(measure, order)
    m = [0.0, 0.0, 0.0]
    for xj, wj in zip(rule.nodes, rule.weights):
        p = psi_analytic(cf, z, float(xj)).real
        m[0] += wj * p
        m[1] += wj * xj * p
        m[2] += wj * xj * xj * p
    return m[0], m[1], m[2]
