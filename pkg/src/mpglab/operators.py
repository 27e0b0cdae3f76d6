"""The five propagation-operator classes carried by graph edges.

An operator maps the source node's current deviation to a contribution for
the target: proportional (linear), relative scaling realized through the
target's multiplicative aggregation, a threshold with an affine active
branch (throttling and congestion onsets), a seeded Monte-Carlo expectation
over additive noise (stochastic), and a time-delayed application of an
inner operator (aging, depreciation, delayed economic effects).

Wrapping operators (stochastic, delayed) take exactly one non-wrapping
inner operator; nesting depth never exceeds two.

All randomness is derived from (run seed, operator seed, edge channel,
step), so identical seeds reproduce identical results bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import OperatorError, StateError

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class NormalNoise:
    sigma: float

    def __post_init__(self) -> None:
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise OperatorError(f"normal noise sigma must be finite and >= 0, got {self.sigma}")

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.sigma == 0.0:
            return np.zeros(shape)
        return rng.normal(0.0, self.sigma, size=shape)


@dataclass(frozen=True)
class UniformNoise:
    half_width: float

    def __post_init__(self) -> None:
        if not (self.half_width >= 0 and math.isfinite(self.half_width)):
            raise OperatorError(
                f"uniform noise half_width must be finite and >= 0, got {self.half_width}"
            )

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.half_width == 0.0:
            return np.zeros(shape)
        return rng.uniform(-self.half_width, self.half_width, size=shape)


Noise = Union[NormalNoise, UniformNoise]


@dataclass(frozen=True)
class Linear:
    """P(x) = alpha * x."""

    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha):
            raise OperatorError(f"linear alpha must be finite, got {self.alpha}")


@dataclass(frozen=True)
class Multiplicative:
    """Contribution beta * x; the (1 + beta*x) scaling of the target comes
    from multiplicative aggregation at the target node."""

    beta: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.beta):
            raise OperatorError(f"multiplicative beta must be finite, got {self.beta}")


@dataclass(frozen=True)
class Threshold:
    """P(x) = 0 below tau, else slope*(x - tau) + offset (>= branch at tau)."""

    tau: float
    slope: float
    offset: float = 0.0

    def __post_init__(self) -> None:
        for name in ("tau", "slope", "offset"):
            if not math.isfinite(getattr(self, name)):
                raise OperatorError(f"threshold {name} must be finite")


@dataclass(frozen=True)
class Stochastic:
    """P(x) = E[inner(x + xi)], estimated by a seeded Monte-Carlo mean."""

    inner: Union[Linear, Multiplicative, Threshold]
    noise: Noise
    samples: int = 1024
    seed: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.inner, (Stochastic, Delayed)):
            raise OperatorError("stochastic operators wrap one non-wrapping inner")
        if self.samples < 1:
            raise OperatorError(f"stochastic samples must be >= 1, got {self.samples}")


@dataclass(frozen=True)
class Delayed:
    """P(x(t)) = inner(x(t - delta_t)); pre-history reads the source's
    declared initial value."""

    delta_t: int
    inner: Union[Linear, Multiplicative, Threshold]

    def __post_init__(self) -> None:
        if isinstance(self.inner, (Stochastic, Delayed)):
            raise OperatorError("delayed operators wrap one non-wrapping inner")
        if self.delta_t < 1:
            raise OperatorError(f"delayed delta_t must be >= 1, got {self.delta_t}")


OperatorSpec = Union[Linear, Multiplicative, Threshold, Stochastic, Delayed]


def operator_delay(op: OperatorSpec) -> int:
    return op.delta_t if isinstance(op, Delayed) else 0


def default_gain(op: OperatorSpec, dst_initial: np.ndarray) -> float:
    """Edge gain when the document does not set one: the local linear
    sensitivity at the initial state (wrappers inherit the inner's gain)."""
    if isinstance(op, Linear):
        return abs(op.alpha)
    if isinstance(op, Multiplicative):
        return abs(op.beta * float(np.mean(dst_initial)))
    if isinstance(op, Threshold):
        return abs(op.slope)
    return default_gain(op.inner, dst_initial)


def _stochastic_rng(op: Stochastic, run_seed: int, channel: int, t: int) -> np.random.Generator:
    entropy = (run_seed & _MASK64, op.seed & _MASK64, channel & _MASK64, t & _MASK64)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def apply_operator(
    op: OperatorSpec,
    input: np.ndarray,
    state=None,
    *,
    source: str | None = None,
    channel: int = 0,
) -> np.ndarray:
    """Apply one edge operator to the source deviation vector.

    `state` supplies the step index and run seed for stochastic draws and
    the history ring for delayed access.  Without a state (static path
    composition), delays evaluate at zero lag and stochastic draws use
    step 0 of run seed 0.
    """
    x = np.asarray(input, dtype=float)
    if isinstance(op, Linear):
        return op.alpha * x
    if isinstance(op, Multiplicative):
        return op.beta * x
    if isinstance(op, Threshold):
        active = x >= op.tau
        return np.where(active, op.slope * (x - op.tau) + op.offset, 0.0)
    if isinstance(op, Stochastic):
        run_seed = state.seed if state is not None else 0
        t = state.t if state is not None else 0
        rng = _stochastic_rng(op, run_seed, channel, t)
        noise = op.noise.draw(rng, (op.samples,) + x.shape)
        return np.mean(
            [apply_operator(op.inner, x + xi) for xi in noise], axis=0
        )
    if isinstance(op, Delayed):
        if state is None:
            return apply_operator(op.inner, x)
        if source is None:
            raise StateError("delayed operators need the source node id")
        lagged = state.lagged_value(source, op.delta_t)
        return apply_operator(op.inner, lagged)
    raise OperatorError(f"unknown operator {op!r}")


def _fd_step(x: float) -> float:
    return max(1e-6, 1e-6 * abs(x))


def operator_derivative(
    op: OperatorSpec,
    input: np.ndarray,
    state=None,
    *,
    channel: int = 0,
) -> np.ndarray:
    """Componentwise derivative of the operator at the given input.

    Linear and multiplicative are analytic.  Threshold uses one-sided or
    central finite differences that stay on the active branch (at exactly
    tau the >= branch applies).  Stochastic differentiates the Monte-Carlo
    mean under frozen draws.  For delayed operators the caller passes the
    lagged input; the derivative is the inner's.
    """
    x = np.asarray(input, dtype=float)
    if isinstance(op, Linear):
        return np.full_like(x, op.alpha)
    if isinstance(op, Multiplicative):
        return np.full_like(x, op.beta)
    if isinstance(op, Threshold):
        out = np.zeros_like(x)
        for i, xi in np.ndenumerate(x):
            h = _fd_step(xi)

            def f(v: float) -> float:
                return op.slope * (v - op.tau) + op.offset if v >= op.tau else 0.0

            if xi >= op.tau:
                if xi - h >= op.tau:
                    out[i] = (f(xi + h) - f(xi - h)) / (2 * h)
                else:
                    out[i] = (f(xi + h) - f(xi)) / h
            else:
                if xi + h < op.tau:
                    out[i] = (f(xi + h) - f(xi - h)) / (2 * h)
                else:
                    out[i] = (f(xi) - f(xi - h)) / h
        return out
    if isinstance(op, Stochastic):
        out = np.zeros_like(x)
        for i, xi in np.ndenumerate(x):
            h = _fd_step(xi)
            lo = x.copy()
            hi = x.copy()
            lo[i] = xi - h
            hi[i] = xi + h
            f_hi = apply_operator(op, hi, state, channel=channel)
            f_lo = apply_operator(op, lo, state, channel=channel)
            out[i] = (f_hi[i] - f_lo[i]) / (2 * h)
        return out
    if isinstance(op, Delayed):
        return operator_derivative(op.inner, x, state, channel=channel)
    raise OperatorError(f"unknown operator {op!r}")
