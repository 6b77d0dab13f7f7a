"""Closed-form gains and the discrete executor for long-short feedback trading.

The controller keeps a long book invested at I_L = I0 + K*g_L and a short
book at I_S = -alpha*I0 - beta*K*g_S, where g_L and g_S are the books'
cumulative gains, K > 0 is the long feedback gain and alpha, beta > 0 scale
the short side.  alpha = beta = 1 is the classical symmetric long-short
controller.

Trading continuously against a deterministic price path gives closed forms
in the price ratio q = p(t)/p(0):

    g_L(q) = (I0/K) * (q**K - 1)
    g_S(q) = (alpha*I0/(beta*K)) * (q**(-beta*K) - 1)

and the total gain g = g_L + g_S.  The discrete executor integrates
dg = (dp/p) * I with one explicit Euler step per price observation and
converges to the closed forms as the step size shrinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Beta1Roots",
    "ControlParams",
    "StrategyTrace",
    "beta1_roots",
    "feedback_gain_partials",
    "gain_long_closed",
    "gain_short_closed",
    "gain_total_closed",
    "positive_gain_condition",
    "run_strategy",
]


@dataclass(frozen=True)
class ControlParams:
    """Controller parameters: initial investment i0 and gains k, alpha, beta.

    All four must be strictly positive and finite.  The long book trades
    with feedback gain k_long = k, the short book with k_short = beta*k.
    """

    i0: float
    k: float
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self) -> None:
        for name in ("i0", "k", "alpha", "beta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def k_long(self) -> float:
        return self.k

    @property
    def k_short(self) -> float:
        return self.beta * self.k


class Beta1Roots(NamedTuple):
    """Zero crossings and global minimum of the total gain for beta == 1."""

    q_root1: float
    q_root2: float
    q_min: float
    g_min: float


def _check_ratio(q) -> None:
    if not np.all(np.asarray(q) > 0.0):
        raise ValueError("price ratio q must be strictly positive")


def gain_long_closed(params: ControlParams, q):
    """Closed-form cumulative gain of the long book at price ratio q.

    q may be a float or an ndarray.
    """
    _check_ratio(q)
    return params.i0 / params.k * (q ** params.k - 1.0)


def gain_short_closed(params: ControlParams, q):
    """Closed-form cumulative gain of the short book at price ratio q."""
    _check_ratio(q)
    ks = params.beta * params.k
    return (params.alpha * params.i0) / ks * (q ** (-ks) - 1.0)


def gain_total_closed(params: ControlParams, q):
    """Total closed-form gain; exactly the sum of the long and short books."""
    return gain_long_closed(params, q) + gain_short_closed(params, q)


def feedback_gain_partials(params: ControlParams, q):
    """Partial derivatives of the total gain in the feedback gains.

    With K_L = k and K_S = beta*k,

        dg/dK_L = i0 * (q**K_L * (K_L*ln q - 1) + 1) / K_L**2
        dg/dK_S = alpha*i0 * (q**(-K_S) * (-K_S*ln q - 1) + 1) / K_S**2

    Both are non-negative for every q > 0 because e**x * (x - 1) + 1 >= 0;
    the total gain never decreases when either feedback gain grows.
    """
    _check_ratio(q)
    kl = params.k
    ks = params.beta * params.k
    lnq = np.log(q)
    d_long = params.i0 * (q ** kl * (kl * lnq - 1.0) + 1.0) / kl**2
    d_short = params.alpha * params.i0 * (q ** (-ks) * (-ks * lnq - 1.0) + 1.0) / ks**2
    return d_long, d_short


def beta1_roots(params: ControlParams) -> Beta1Roots:
    """Roots and minimum of the total gain as a function of q when beta == 1.

    Through u = q**k the total gain factors as (i0/k) * (u-1) * (u-alpha) / u,
    so it vanishes at q = 1 and q = alpha**(1/k) and attains its global
    minimum -i0*(sqrt(alpha)-1)**2/k at q = alpha**(1/(2k)).  For alpha == 1
    the roots coincide at q = 1 and the minimum is 0.
    """
    if params.beta != 1.0:
        raise ValueError(f"roots in closed form require beta == 1, got beta={params.beta}")
    a, k, i0 = params.alpha, params.k, params.i0
    return Beta1Roots(
        q_root1=1.0,
        q_root2=a ** (1.0 / k),
        q_min=a ** (1.0 / (2.0 * k)),
        g_min=-(i0 * (math.sqrt(a) - 1.0) ** 2 / k),
    )


def positive_gain_condition(params: ControlParams, q: float) -> bool:
    """True when (1 - alpha) * ln(q) >= 0.

    Under this condition the total gain is bounded below by
    i0 * (1 - alpha) * ln(q) >= 0 for every k > 0 and beta > 0.  When it
    fails there are always small feedback gains with negative total gain.
    """
    _check_ratio(q)
    return (1.0 - params.alpha) * math.log(q) >= 0.0


@dataclass(frozen=True)
class StrategyTrace:
    """Step-by-step record of a discrete strategy run.

    All arrays share the shape of the input prices with time along the last
    axis, so a batch of paths produces a batch of traces in one object.
    """

    times: np.ndarray
    prices: np.ndarray
    gain_long: np.ndarray
    gain_short: np.ndarray
    gain: np.ndarray
    inv_long: np.ndarray
    inv_short: np.ndarray
    inv_net: np.ndarray

    @property
    def final_gain(self):
        return self.gain[..., -1]


def run_strategy(params: ControlParams, prices, times=None) -> StrategyTrace:
    """Run the discrete feedback strategy over a price series.

    For step n with simple return r_n = (p[n+1] - p[n]) / p[n] the books
    update by one explicit Euler step of dg = (dp/p) * I:

        g_L[n+1] = g_L[n] + r_n * (i0 + k*g_L[n])
        g_S[n+1] = g_S[n] + r_n * (-alpha*i0 - beta*k*g_S[n])

    with investments recomputed from the gains after every step.  Each
    update multiplies the running long investment by (1 + k*r_n) and the
    short investment by (1 - beta*k*r_n), so the whole trace follows from
    cumulative products of those factors.

    prices may be any array with time along the last axis; leading axes are
    treated as independent paths.
    """
    p = np.asarray(prices, dtype=float)
    if p.ndim == 0 or p.shape[-1] < 1:
        raise ValueError("price series must contain at least one price")
    if not (np.all(np.isfinite(p)) and np.all(p > 0.0)):
        raise ValueError("prices must be finite and strictly positive")
    n = p.shape[-1]
    if times is None:
        times = np.arange(n)
    else:
        times = np.asarray(times)
        if times.shape != (n,):
            raise ValueError(f"times must have shape ({n},), got {times.shape}")

    r = np.diff(p, axis=-1) / p[..., :-1]
    lead = np.ones(p.shape[:-1] + (1,))
    long_factor = np.concatenate([lead, np.cumprod(1.0 + params.k * r, axis=-1)], axis=-1)
    short_factor = np.concatenate([lead, np.cumprod(1.0 - params.k_short * r, axis=-1)], axis=-1)

    inv_long = params.i0 * long_factor
    inv_short = -(params.alpha * params.i0) * short_factor
    gain_long = (inv_long - params.i0) / params.k
    gain_short = -(inv_short + params.alpha * params.i0) / params.k_short
    return StrategyTrace(
        times=times,
        prices=p,
        gain_long=gain_long,
        gain_short=gain_short,
        gain=gain_long + gain_short,
        inv_long=inv_long,
        inv_short=inv_short,
        inv_net=inv_long + inv_short,
    )
