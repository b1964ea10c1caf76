"""Closed-form treatment of phase-covariant qubit channels.

A phase-covariant generator is fixed by three rate functions (a, x, f)
through the decoherence matrix

    gamma(t) = [[a(t), -i x(t), 0],
                [i x(t), a(t),  0],
                [0,      0,     f(t)]],

whose eigenvalues are a +- x and f.  The Bloch equations decouple:

    dr_perp/dt = -(a + f) r_perp,      dr3/dt = -2 a r3 - 2 x,

so everything is controlled by the integrals A = int a, F = int f and the
longitudinal shift lz(t) = -2 exp(-2A(t)) int_0^t x exp(2A) (the fixed point
of r3 for constant rates is -x/a).  The channel at time t contracts the
transverse plane by alpha = exp(-A - F), the axis by beta = exp(-2A), and
shifts it by -c with c = -lz.

Complete positivity requires

    exp(-2A) + |lz| <= 1     and     4 alpha^2 + c^2 <= (1 + beta)^2.

Saturating the second inequality at every time singles out the unique
dephasing rate f that minimizes the loss of correlations and coherence;
that rate is negative for all t > 0 whenever |x| <= a, so the optimal
dynamics is non-Markovian at all times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.integrate import quad

from . import lindblad
from .errors import InfeasibleRates, QuadratureFailed

QUAD_TOL = 1e-10

RateLike = Union[float, Callable[[float], float]]


def _as_rate(value: RateLike) -> tuple[Callable[[float], float], float | None]:
    if callable(value):
        return value, None
    const = float(value)
    return (lambda t: const), const


@dataclass(frozen=True)
class CovariantRates:
    """Rate functions (a, x, f) of a phase-covariant generator.

    ``a`` must be nonnegative; ``f`` may be negative (non-Markovian noise).
    Constant rates are tracked so the rate integrals can use closed forms.
    """

    a: Callable[[float], float]
    x: Callable[[float], float]
    f: Callable[[float], float]
    a_const: float | None = None
    x_const: float | None = None
    f_const: float | None = None
    f_is_optimal: bool = False

    @classmethod
    def constant(cls, a: float, x: float = 0.0, f: float = 0.0) -> "CovariantRates":
        a_fn, _ = _as_rate(a)
        x_fn, _ = _as_rate(x)
        f_fn, _ = _as_rate(f)
        return cls(
            a=a_fn,
            x=x_fn,
            f=f_fn,
            a_const=float(a),
            x_const=float(x),
            f_const=float(f),
        )

    @classmethod
    def optimal(cls, a: RateLike, x: RateLike = 0.0) -> "CovariantRates":
        """Rates (a, x) with f set to the correlation-optimal dephasing rate.

        Requires |x(t)| <= a(t) wherever the channel is evaluated.
        """
        a_fn, a_const = _as_rate(a)
        x_fn, x_const = _as_rate(x)
        if a_const is not None and x_const is not None and abs(x_const) > a_const:
            raise InfeasibleRates("optimal dephasing requires |x| <= a")
        rates = cls(
            a=a_fn,
            x=x_fn,
            f=lambda t: 0.0,
            a_const=a_const,
            x_const=x_const,
            f_is_optimal=True,
        )
        object.__setattr__(rates, "f", lambda t: optimal_dephasing_rate(rates, t))
        return rates

    @classmethod
    def from_callables(
        cls, a: RateLike, x: RateLike, f: RateLike
    ) -> "CovariantRates":
        a_fn, a_const = _as_rate(a)
        x_fn, x_const = _as_rate(x)
        f_fn, f_const = _as_rate(f)
        return cls(
            a=a_fn,
            x=x_fn,
            f=f_fn,
            a_const=a_const,
            x_const=x_const,
            f_const=f_const,
        )

    @property
    def is_constant_ax(self) -> bool:
        return self.a_const is not None and self.x_const is not None


def gamma_matrix(rates: CovariantRates, t: float) -> np.ndarray:
    """The 3x3 decoherence matrix of the covariant family at time t."""
    a, x, f = rates.a(t), rates.x(t), rates.f(t)
    return np.array(
        [[a, -1j * x, 0.0], [1j * x, a, 0.0], [0.0, 0.0, f]], dtype=complex
    )


def decoherence_matrix(
    rates: CovariantRates, hamiltonian_rate: float = 0.0
) -> lindblad.DecoherenceMatrix:
    """Wrap the covariant rates as a generic time-dependent generator."""
    return lindblad.DecoherenceMatrix(
        gamma=lambda t: gamma_matrix(rates, t), hamiltonian_rate=hamiltonian_rate
    )


@dataclass(frozen=True)
class RateIntegrals:
    """Integrated rates at one time: int a, int f and the longitudinal shift."""

    int_a: float
    int_f: float
    lz: float


def _quad(fn, lo, hi):
    val, err = quad(fn, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
    if err > max(QUAD_TOL, 1e-10 * abs(val)):
        raise QuadratureFailed(f"quadrature error {err} too large")
    return val


def _int_a(rates: CovariantRates, t: float) -> float:
    if rates.a_const is not None:
        return rates.a_const * t
    return _quad(rates.a, 0.0, t)


def _lz(rates: CovariantRates, t: float) -> float:
    if rates.is_constant_ax:
        a, x = rates.a_const, rates.x_const
        if a == 0.0:
            return -2.0 * x * t
        return -(x / a) * (1.0 - np.exp(-2.0 * a * t))
    big_a = _int_a(rates, t)
    weighted = _quad(lambda s: rates.x(s) * np.exp(2.0 * (_int_a(rates, s) - big_a)), 0.0, t)
    return -2.0 * weighted


def optimal_dephasing_integral(rates: CovariantRates, t: float) -> float:
    """Integral F(t) of the correlation-optimal dephasing rate.

    Chosen so the complete-positivity inequality
    4 exp(-2A - 2F) + lz^2 <= (1 + exp(-2A))^2 is an equality at every time:

        F(t) = -[2 A(t) + log(((1 + e^{-2A})^2 - lz^2) / 4)] / 2.
    """
    big_a = _int_a(rates, t)
    u = np.exp(-2.0 * big_a)
    if rates.is_constant_ax and rates.a_const > 0.0:
        q = rates.x_const / rates.a_const
        if abs(q) > 1.0 + 1e-12:
            raise InfeasibleRates("optimal dephasing requires |x| <= a")
        if abs(abs(q) - 1.0) < 1e-15:
            return 0.0
        # expanded form with only positive terms: stable for u -> 0, |q| -> 1
        arg = ((1.0 - q * q) * (1.0 + u * u) + 2.0 * u * (1.0 + q * q)) / 4.0
    else:
        lz = _lz(rates, t)
        arg = ((1.0 + u) ** 2 - lz**2) / 4.0
    if arg <= 0.0:
        raise InfeasibleRates("(1 + e^{-2A})^2 <= lz^2: no admissible dephasing")
    return -0.5 * (2.0 * big_a + np.log(arg))


def optimal_dephasing_rate(rates: CovariantRates, t: float) -> float:
    """The unique dephasing rate minimizing correlation loss at every time.

    For constant (a, x) the closed form

        f(t) = -a (1 - q^2) (1 - u^2) / ((1 + u)^2 - q^2 (1 - u)^2),

    with q = x/a and u = exp(-2 a t), is used; it equals -a tanh(a t) for
    x = 0 and vanishes identically for |x| = a.  For time-dependent rates
    the derivative of :func:`optimal_dephasing_integral` is taken by a
    centered finite difference with step 1e-6 max(1, t).
    """
    if rates.is_constant_ax:
        a, x = rates.a_const, rates.x_const
        if abs(x) > a:
            raise InfeasibleRates("optimal dephasing requires |x| <= a")
        if a == 0.0:
            return 0.0
        q = x / a
        u = np.exp(-2.0 * a * t)
        denom = (1.0 + u) ** 2 - q**2 * (1.0 - u) ** 2
        return -a * (1.0 - q**2) * (1.0 - u**2) / denom
    h = 1e-6 * max(1.0, abs(t))
    lo = max(t - h, 0.0)
    hi = t + h
    f_hi = optimal_dephasing_integral(rates, hi)
    f_lo = optimal_dephasing_integral(rates, lo)
    return (f_hi - f_lo) / (hi - lo)


def _int_f(rates: CovariantRates, t: float) -> float:
    if rates.f_is_optimal:
        return optimal_dephasing_integral(rates, t)
    if rates.f_const is not None:
        return rates.f_const * t
    return _quad(rates.f, 0.0, t)


def rate_integrals(rates: CovariantRates, t: float) -> RateIntegrals:
    """A(t) = int a, F(t) = int f and lz(t) by closed form or quadrature."""
    return RateIntegrals(
        int_a=_int_a(rates, t), int_f=_int_f(rates, t), lz=_lz(rates, t)
    )


@dataclass(frozen=True)
class CovariantChannelAt:
    """Snapshot of the covariant channel at one time.

    ``alpha`` contracts the transverse plane, ``beta`` the z-axis, and the
    Bloch action is r -> (alpha r1, alpha r2, beta r3 - shift).
    """

    alpha: float
    beta: float
    shift: float

    @property
    def matrix(self) -> np.ndarray:
        return np.diag([self.alpha, self.alpha, self.beta])

    @property
    def shift_vector(self) -> np.ndarray:
        return np.array([0.0, 0.0, -self.shift])


def channel_at(rates: CovariantRates, t: float) -> CovariantChannelAt:
    """Contraction coefficients (alpha, beta) and longitudinal shift at t."""
    ints = rate_integrals(rates, t)
    return CovariantChannelAt(
        alpha=float(np.exp(-ints.int_a - ints.int_f)),
        beta=float(np.exp(-2.0 * ints.int_a)),
        shift=float(-ints.lz),
    )


def evolve_bloch(rates: CovariantRates, r0, t: float) -> np.ndarray:
    """Closed-form image of a Bloch vector under the covariant channel."""
    ch = channel_at(rates, t)
    r0 = np.asarray(r0, dtype=float)
    return np.array(
        [ch.alpha * r0[0], ch.alpha * r0[1], ch.beta * r0[2] - ch.shift]
    )


def cptp_conditions(rates: CovariantRates, t: float) -> tuple[bool, bool, float]:
    """Both complete-positivity conditions at time t.

    Returns (cond_a, cond_b, slack_b) where cond_a is
    exp(-2A) + |lz| <= 1, cond_b is 4 exp(-2A - 2F) + lz^2 <= (1+exp(-2A))^2
    and slack_b is the right-hand side minus the left-hand side of the
    latter (zero when the optimal dephasing rate saturates it).
    """
    ints = rate_integrals(rates, t)
    u = np.exp(-2.0 * ints.int_a)
    cond_a = u + abs(ints.lz) <= 1.0 + 1e-9
    lhs = 4.0 * np.exp(-2.0 * ints.int_a - 2.0 * ints.int_f) + ints.lz**2
    rhs = (1.0 + u) ** 2
    slack = float(rhs - lhs)
    return bool(cond_a), bool(slack >= -1e-9), slack


def choi_state(rates: CovariantRates, t: float) -> np.ndarray:
    """Choi matrix of the covariant channel at time t.

    With alpha, beta, c = shift this is

        (1/4) [[1+b, 0,   0,   2a ],
               [0,   1-b, 0,   0  ],
               [0,   0,   1-b, 0  ],
               [2a,  0,   0,   1+b]]  -  (c/4) diag(1, -1, 1, -1),

    which is positive semidefinite exactly when the CPTP conditions hold.
    """
    ch = channel_at(rates, t)
    return lindblad.choi_of_map(ch.matrix, ch.shift_vector)


def asymptotic_image(rates: CovariantRates) -> tuple[float, float]:
    """Limit geometry of the Bloch ball under the optimal channel.

    For constant rates with |x| <= a and the optimal dephasing rate, the
    ball flattens onto a disk of radius sqrt(1 - (x/a)^2) / 2 centered at
    -x/a on the z-axis.  Returns (radius, center_z).
    """
    if not rates.is_constant_ax:
        raise ValueError("asymptotic image requires constant a, x")
    a, x = rates.a_const, rates.x_const
    if a <= 0.0:
        raise InfeasibleRates("asymptotic image requires a > 0")
    q = x / a
    if abs(q) > 1.0 + 1e-12:
        raise InfeasibleRates("asymptotic image requires |x| <= a")
    radius = 0.5 * np.sqrt(max(0.0, 1.0 - q**2))
    return float(radius), float(-q)
