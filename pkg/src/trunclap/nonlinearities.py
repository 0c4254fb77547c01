"""Reaction terms: scalar nonlinearities carrying a certified monotone window.

Every reaction f here vanishes at zero, is positive on (0, delta), and has a
nonnegative derivative on (-delta, delta).  The window radius delta is what
the radial solver relies on: initial heights inside the window produce
decreasing, positive trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

#: Allowed dip of f' below zero inside the declared window.
DERIV_SLACK = 1e-12

#: Sample count used when certifying a window radius by bisection.
WINDOW_SAMPLES = 10_000


class NonlinearityError(ValueError):
    """Parameters that admit no valid monotone window."""


@dataclass(frozen=True)
class Nonlinearity:
    """Reaction term with derivative and monotone-window radius.

    ``f`` and ``fprime`` are vectorized over numpy arrays.
    """

    name: str
    f: Callable
    fprime: Callable
    delta: float


def allen_cahn() -> Nonlinearity:
    """The cubic double-well reaction u - u^3, monotone on |u| < 1/sqrt(3)."""
    return Nonlinearity(
        "allen-cahn",
        lambda u: u - u**3,
        lambda u: 1.0 - 3.0 * u**2,
        1.0 / math.sqrt(3.0),
    )


def power_law(a: float, b: float, gamma: float) -> Nonlinearity:
    """Reaction a*u + b*|u|^(gamma-1)*u with a bisected window radius.

    The radius is the largest delta <= 1 whose sampled derivative stays
    nonnegative on (-delta, delta); with b >= 0 that is simply 1.
    """
    if not a > 0.0:
        raise NonlinearityError(f"linear coefficient must be positive, got {a}")
    if not gamma > 1.0:
        raise NonlinearityError(f"exponent must exceed 1, got {gamma}")

    def f(u):
        return a * u + b * np.abs(u) ** (gamma - 1.0) * u

    def fprime(u):
        return a + b * gamma * np.abs(u) ** (gamma - 1.0)

    delta = _window_radius(fprime)
    if delta <= 0.0:
        raise NonlinearityError(f"no monotone window for a={a}, b={b}, gamma={gamma}")
    name = f"power:{a:g},{b:g},{gamma:g}"
    return Nonlinearity(name, f, fprime, float(delta))


def _window_radius(fprime: Callable) -> float:
    def ok(d: float) -> bool:
        u = np.linspace(-d, d, WINDOW_SAMPLES)
        return bool(np.min(fprime(u)) >= -DERIV_SLACK)

    if ok(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def check_nonlinearity(nl: Nonlinearity, samples: int = 2048) -> list[str]:
    """Return human-readable violations of the reaction-term contract."""
    problems: list[str] = []
    if nl.f(0.0) != 0.0:
        problems.append(f"f(0) = {nl.f(0.0)!r}, expected 0")
    if not 0.0 < nl.delta:
        problems.append(f"window radius {nl.delta} is not positive")
    inside = np.linspace(-nl.delta, nl.delta, samples)
    if float(np.min(nl.fprime(inside))) < -DERIV_SLACK:
        problems.append("derivative dips below zero inside the window")
    pos = np.linspace(nl.delta * 1e-4, nl.delta * (1.0 - 1e-9), samples)
    if float(np.min(nl.f(pos))) <= 0.0:
        problems.append("f is not positive on (0, delta)")
    h = 1e-6
    numeric = (nl.f(inside + h) - nl.f(inside - h)) / (2.0 * h)
    gap = float(np.max(np.abs(numeric - nl.fprime(inside))))
    if gap > 1e-6:
        problems.append(f"derivative mismatch vs centered differences: {gap:.3e}")
    return problems
