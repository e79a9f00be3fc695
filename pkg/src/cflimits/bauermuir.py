"""Convergent companion fractions that select single points of a limit set.

Each transform rebuilds the divergent elliptic-type fraction into a new
fraction that genuinely converges, to the modified limit at infinity, at
zero, or at an arbitrary power of lambda = alpha/beta.  A structurally
vanishing partial numerator truncates the companion fraction (the constant
case collapses to its leading term); a vanishing inner denominator of the
lambda-power transform is reported, not patched.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cf as _cf
from . import qseries as _qs
from .errors import (
    DegenerateTermError,
    RootOfUnityLambdaError,
    SeriesNotConvergedError,
)
from .limitset import EllipticCFSpec, UnitModulusNumber, tail_omega
from .sphere import ExtendedComplex, chordal_distance


@dataclass(frozen=True)
class BMTransformResult:
    """A companion fraction plus the modification it realises."""

    cf: _cf.ContinuedFraction
    target: str  # "infinity" | "zero" | "lambda-power"
    k: int | None = None

    def evaluate(self, tol: float = 1e-12, max_n: int = 100_000) -> _cf.EvalResult:
        return _cf.evaluate(self.cf, tol, max_n, on_zero_numerator="terminate")


def bm_at_infinity(spec: EllipticCFSpec) -> BMTransformResult:
    """Convergent fraction whose value is the modified limit at infinity.

    Starting from -beta, the first term is (q_1 + beta p_1)/(alpha + p_1)
    and the general term couples consecutive perturbations; when all
    q_n + beta p_n vanish (the unperturbed case) the fraction terminates
    and the value is -beta itself.
    """
    return BMTransformResult(_bm_cf(spec, spec.alpha, spec.beta), "infinity")


def bm_at_zero(spec: EllipticCFSpec) -> BMTransformResult:
    """Mirror image of ``bm_at_infinity`` (alpha and beta exchanged)."""
    return BMTransformResult(_bm_cf(spec, spec.beta, spec.alpha), "zero")


def _bm_cf(spec: EllipticCFSpec, alpha: UnitModulusNumber, beta: UnitModulusNumber) -> _cf.ContinuedFraction:
    # Classical transform with constant modifier -beta: the couplings are
    # L_n = q_n + beta p_n, the transformed terms a'_n = a_{n-1} L_n / L_{n-1}
    # and b'_n = alpha + p_n + beta L_n / L_{n-1}, cleared of denominators by
    # the equivalence scaling c_n = L_{n-1} (so the n-th numerator carries
    # L_n L_{n-2}, with L_0 = 1).
    av, bv = alpha.value, beta.value
    ab = (alpha * beta).value
    p, q = spec.p, spec.q

    def coupling(n: int) -> complex:
        if n == 0:
            return 1.0 + 0.0j
        return complex(q(n)) + bv * complex(p(n))

    def terms(n: int) -> tuple[complex, complex]:
        if n == 1:
            return coupling(1), av + complex(p(1))
        num = (complex(q(n - 1)) - ab) * coupling(n) * coupling(n - 2)
        den = (av + complex(p(n))) * coupling(n - 1) + bv * coupling(n)
        return num, den

    return _cf.ContinuedFraction(-bv, terms)


def bm_at_lambda_power(spec: EllipticCFSpec, k: int) -> BMTransformResult:
    """Convergent fraction whose value is the modified limit at lambda^(k+1).

    Keeps the original terms up to depth k' - 1 with k' = max(3, k + 3),
    folds the tail value into depth k', patches depth k' + 1 with the
    compound numerator, and from depth k' + 2 on uses coupled terms whose
    inner quotients share the denominator

        E_n = -alpha beta + q_n - w_{n-1} (alpha + beta + p_n + w_n),

    where w_n is the tail value shifted by k.  Requires lambda not to be a
    root of unity (the shifted tail values must stay finite); E_{n-1} = 0 is
    reported as DegenerateTermError(n).
    """
    lam = spec.lam
    if lam.is_exact_root:
        raise RootOfUnityLambdaError("alpha/beta is a root of unity")
    alpha, beta = spec.alpha, spec.beta
    av, bv = alpha.value, beta.value
    ab = (alpha * beta).value
    absum = av + bv
    p, q = spec.p, spec.q
    kp = max(3, k + 3)

    def w(j: int) -> complex:
        value = tail_omega(alpha, beta, j - k)
        if value.is_infinity:
            raise RootOfUnityLambdaError(f"tail value at shifted index {j - k} is infinite")
        return value.z

    def e(n: int) -> complex:
        return -ab + complex(q(n)) - w(n - 1) * (absum + complex(p(n)) + w(n))

    def terms(n: int) -> tuple[complex, complex]:
        if n < kp:
            return -ab + complex(q(n)), absum + complex(p(n))
        if n == kp:
            return -ab + complex(q(n)), absum + complex(p(n)) + w(n)
        if n == kp + 1:
            return e(n), absum + complex(p(n)) + w(n)
        inner_den = e(n - 1)
        if inner_den == 0:
            raise DegenerateTermError(n)
        inner = e(n) / inner_den
        num = (complex(q(n - 1)) - ab) * inner
        den = absum + complex(p(n)) + w(n) - w(n - 2) * inner
        return num, den

    return BMTransformResult(_cf.ContinuedFraction(0.0, terms), "lambda-power", k)


def rbm_identity(
    q: complex,
    alpha: UnitModulusNumber,
    beta: UnitModulusNumber,
    tol: float = 1e-12,
    max_n: int = 50_000,
) -> tuple[ExtendedComplex, ExtendedComplex, float]:
    """Both sides of the convergent q-fraction / q-series identity.

    The left side is the fraction -beta + beta q/(alpha + q) followed by
    terms -alpha beta q / (q^n + alpha + beta q); the right side is -beta
    times a ratio of two q-series (evaluated independently through the
    two-variable series P).  Returns (lhs, rhs, chordal residual).
    """
    q = complex(q)
    if not abs(q) < 1.0:
        raise ValueError("|q| must be < 1")
    lam = alpha / beta
    if lam.is_exact_root:
        raise RootOfUnityLambdaError("alpha/beta is a root of unity")
    av, bv = alpha.value, beta.value
    ab = (alpha * beta).value

    def terms(n: int) -> tuple[complex, complex]:
        if n == 1:
            return bv * q, av + q
        return -ab * q, q**n + av + bv * q

    fraction = _cf.ContinuedFraction(-bv, terms)
    result = _cf.evaluate(fraction, tol, max_n, on_zero_numerator="terminate")
    if not result.converged:
        raise SeriesNotConvergedError(
            f"transformed fraction not stable after {max_n} terms",
            last_delta=result.last_delta,
        )
    lhs = result.value

    params = _qs.QParams(q, min(tol, 1e-14))
    numerator = _qs.pxy(q / av, bv / av, params)
    denominator = _qs.pxy(1.0 / av, bv / av, params)
    rhs = ExtendedComplex(-bv * numerator / denominator)
    return lhs, rhs, chordal_distance(lhs, rhs)
