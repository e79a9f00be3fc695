"""Generic continued fraction evaluation on the Riemann sphere.

Convergents are kept as projective pairs (P_n, Q_n) advanced by the
three-term recurrence

    P_n = b_n P_{n-1} + a_n P_{n-2},    Q_n = b_n Q_{n-1} + a_n Q_{n-2},

seeded with P_{-1} = 1, Q_{-1} = 0, P_0 = b0, Q_0 = 1, so the approximant
f_n = P_n/Q_n includes the terms through (a_n, b_n).  Whenever a component
grows past a threshold both pairs are rescaled by a power of two (exact in
binary floating point) and the exponent is recorded; the value P_n/Q_n is
untouched by this.

Convergence in the extended plane is judged in the chordal metric: a mere
pair of close consecutive approximants is easily faked by a slowly
rotating unit eigenvalue ratio, so instead we require a configurable
stability window of consecutive small steps.  That criterion is a
heuristic, not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import (
    IndeterminateValueError,
    ZeroPartialNumeratorError,
    ZeroScaleError,
)
from .sphere import INFINITY, ExtendedComplex, as_extended, chordal_distance

TermGenerator = Callable[[int], tuple[complex, complex]]

#: Default renormalization trigger for convergent pairs.
RENORM_THRESHOLD = 1e150

#: Default length of the stability window used by the convergence tests.
STABILITY_WINDOW = 16


@dataclass(frozen=True)
class ContinuedFraction:
    """b0 + K(a_n / b_n) with terms supplied by a pure generator.

    ``terms(n)`` must return the pair (a_n, b_n) for n >= 1 and must be a
    pure function of n.  A zero partial numerator is rejected during
    iteration (it would truncate the fraction).
    """

    b0: complex
    terms: TermGenerator

    def term(self, n: int) -> tuple[complex, complex]:
        a, b = self.terms(n)
        return complex(a), complex(b)


class ConvergentStream:
    """Iterates the convergent recurrence of a continued fraction.

    Attributes ``num``/``den`` hold the current stored pair and
    ``num_prev``/``den_prev`` the previous one; true convergents are the
    stored values times 2**exponent.  A running product of the partial
    numerators is carried along (with its own power-of-two exponent) so the
    determinant identity

        P_n Q_{n-1} - P_{n-1} Q_n = (-1)^(n-1) * prod_{k<=n} a_k

    is checkable at every step.
    """

    def __init__(self, cf: ContinuedFraction, renorm_threshold: float = RENORM_THRESHOLD):
        self.cf = cf
        self.renorm_threshold = float(renorm_threshold)
        self.n = 0
        self.num_prev, self.den_prev = 1.0 + 0.0j, 0.0 + 0.0j
        self.num, self.den = complex(cf.b0), 1.0 + 0.0j
        self.exponent = 0
        self._a_prod = 1.0 + 0.0j
        self._a_prod_exp = 0

    def step(self) -> None:
        n = self.n + 1
        a, b = self.cf.term(n)
        if a == 0:
            raise ZeroPartialNumeratorError(n)
        self.num_prev, self.num = self.num, b * self.num + a * self.num_prev
        self.den_prev, self.den = self.den, b * self.den + a * self.den_prev
        self.n = n
        self._a_prod *= a
        self._renormalize()

    def _renormalize(self) -> None:
        mag = max(abs(self.num), abs(self.den), abs(self.num_prev), abs(self.den_prev))
        if mag > self.renorm_threshold or (0.0 < mag < 1.0 / self.renorm_threshold):
            k = math.frexp(mag)[1]  # power-of-two scaling is exact
            s = math.ldexp(1.0, -k)
            self.num *= s
            self.den *= s
            self.num_prev *= s
            self.den_prev *= s
            self.exponent += k
        pm = abs(self._a_prod)
        if pm > self.renorm_threshold or (0.0 < pm < 1.0 / self.renorm_threshold):
            k = math.frexp(pm)[1]
            self._a_prod *= math.ldexp(1.0, -k)
            self._a_prod_exp += k

    def value(self) -> ExtendedComplex:
        """P_n / Q_n on the sphere; invariant under renormalization."""
        return _projective(self.num, self.den)

    def modified(self, omega) -> ExtendedComplex:
        """(P_n + w P_{n-1}) / (Q_n + w Q_{n-1}); w may be infinity."""
        omega = as_extended(omega)
        if omega.is_infinity:
            return _projective(self.num_prev, self.den_prev)
        w = omega.z
        return _projective(self.num + w * self.num_prev, self.den + w * self.den_prev)

    def determinant_residual(self) -> float:
        """Deviation from the determinant identity, condition-aware.

        Returns |P_n Q_{n-1} - P_{n-1} Q_n - (-1)^(n-1) prod a_k| divided by
        the largest magnitude entering the cancellation, at the stored
        scale.  When convergents stay O(1) (the elliptic-type regime) this
        is the plain relative error; for exponentially growing convergents
        it measures drift relative to what double precision can resolve.
        """
        lhs = self.num * self.den_prev
        rhs = self.num_prev * self.den
        det = lhs - rhs
        target = self._a_prod if self.n % 2 == 1 else -self._a_prod
        # Align the product onto the stored scale of the convergent pairs.
        shift = self._a_prod_exp - 2 * self.exponent
        try:
            aligned = complex(
                math.ldexp(target.real, shift), math.ldexp(target.imag, shift)
            )
        except OverflowError:
            aligned = complex(math.inf, 0.0)
        if not (math.isfinite(aligned.real) and math.isfinite(aligned.imag)):
            # The product dwarfs the representable determinant: compare in
            # the product's scale instead.
            det_aligned = complex(
                math.ldexp(det.real, -shift), math.ldexp(det.imag, -shift)
            )
            return abs(det_aligned - target) / abs(target)
        scale = max(abs(lhs), abs(rhs), abs(aligned))
        if scale == 0.0:
            return math.inf
        return abs(det - aligned) / scale


def convergents(cf: ContinuedFraction, renorm_threshold: float = RENORM_THRESHOLD) -> ConvergentStream:
    return ConvergentStream(cf, renorm_threshold)


def _projective(num: complex, den: complex) -> ExtendedComplex:
    if den == 0:
        if num == 0:
            raise IndeterminateValueError("projective pair degenerated to (0, 0)")
        return INFINITY
    value = num / den
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        return INFINITY
    return ExtendedComplex(value)


@dataclass(frozen=True)
class EvalResult:
    """Outcome of an approximant iteration.

    ``value`` is the limit when ``converged`` is true, otherwise None.
    ``history`` keeps the last few approximants for diagnostics.
    """

    converged: bool
    value: ExtendedComplex | None
    n: int
    last_delta: float | None
    history: tuple[ExtendedComplex, ...] = field(default=())


class _StabilityTracker:
    """Declares convergence after ``window`` consecutive chordally-small steps."""

    def __init__(self, tol: float, window: int):
        if tol <= 0:
            raise ValueError("tol must be positive")
        self.tol = tol
        self.window = window
        self.prev: ExtendedComplex | None = None
        self.stable = 0
        self.last_delta: float | None = None
        self.history: list[ExtendedComplex] = []
        self.n = 0

    def push(self, n: int, value: ExtendedComplex) -> EvalResult | None:
        self.n = n
        self.history.append(value)
        if len(self.history) > self.window:
            self.history.pop(0)
        if self.prev is not None:
            self.last_delta = chordal_distance(value, self.prev)
            self.stable = self.stable + 1 if self.last_delta < self.tol else 0
            if self.stable >= self.window:
                self.prev = value
                return EvalResult(True, value, n, self.last_delta, tuple(self.history))
        self.prev = value
        return None

    def terminated(self) -> EvalResult:
        """The fraction ended; its last approximant is its exact value."""
        return EvalResult(True, self.prev, self.n, self.last_delta, tuple(self.history))

    def not_converged(self) -> EvalResult:
        return EvalResult(False, None, self.n, self.last_delta, tuple(self.history))


def evaluate(
    cf: ContinuedFraction,
    tol: float,
    max_n: int,
    window: int = STABILITY_WINDOW,
    on_zero_numerator: str = "raise",
) -> EvalResult:
    """Iterate approximants until chordally stable over ``window`` steps.

    ``on_zero_numerator`` may be "raise" (default, the generic contract) or
    "terminate": a zero partial numerator then truncates the fraction and
    the current approximant is returned as its exact value.
    """
    tracker = _StabilityTracker(tol, window)
    stream = ConvergentStream(cf)
    tracker.push(0, stream.value())
    for _ in range(max_n):
        try:
            stream.step()
        except ZeroPartialNumeratorError:
            if on_zero_numerator == "terminate":
                return tracker.terminated()
            raise
        result = tracker.push(stream.n, stream.value())
        if result is not None:
            return result
    return tracker.not_converged()


def modified_value(
    cf: ContinuedFraction,
    w: Callable[[int], complex | ExtendedComplex],
    tol: float,
    max_n: int,
    window: int = STABILITY_WINDOW,
) -> EvalResult:
    """Limit of approximants with the tail denominator perturbed by w(n).

    The n-th approximant replaces b_n by b_n + w(n), evaluated through the
    identity (P_n + w P_{n-1}) / (Q_n + w Q_{n-1}).  With w identically 0
    this reproduces ``evaluate`` exactly.
    """
    tracker = _StabilityTracker(tol, window)
    stream = ConvergentStream(cf)
    for _ in range(max_n):
        stream.step()
        result = tracker.push(stream.n, stream.modified(w(stream.n)))
        if result is not None:
            return result
    return tracker.not_converged()


def limit_along_residue(
    cf: ContinuedFraction,
    residue: int,
    modulus: int,
    tol: float,
    max_n: int,
    window: int = 8,
    w: Callable[[int], complex | ExtendedComplex] | None = None,
) -> EvalResult:
    """Limit of (optionally modified) approximants along n = residue (mod m)."""
    tracker = _StabilityTracker(tol, window)
    stream = ConvergentStream(cf)

    def current() -> ExtendedComplex:
        return stream.value() if w is None else stream.modified(w(stream.n))

    if residue % modulus == 0:
        tracker.push(0, current())
    for _ in range(max_n):
        stream.step()
        if stream.n % modulus == residue % modulus:
            result = tracker.push(stream.n, current())
            if result is not None:
                return result
    return tracker.not_converged()


def equivalence_transform(cf: ContinuedFraction, scale: Callable[[int], complex]) -> ContinuedFraction:
    """Rescale terms by c_n without changing any approximant.

    The new fraction has a'_n = c_n c_{n-1} a_n and b'_n = c_n b_n with
    c_0 = 1.  Every approximant (not only the limit) is preserved.
    """

    def c(n: int) -> complex:
        if n == 0:
            return 1.0 + 0.0j
        value = complex(scale(n))
        if value == 0:
            raise ZeroScaleError(n)
        return value

    def terms(n: int) -> tuple[complex, complex]:
        a, b = cf.term(n)
        return c(n) * c(n - 1) * a, c(n) * b

    return ContinuedFraction(cf.b0, terms)
