"""Benchmark problem registry for the time-fractional BBM-Burgers equation

    D_t^alpha u - u_xxt + u_x + u u_x = f,   (x, t) in (0,1)^2,

with u(x,0) = phi, u(0,t) = psi1, u(1,t) = psi2.
"""

from __future__ import annotations

from math import e, gamma, sqrt, pi
from typing import Callable

import numpy as np

from .assembly import ProblemSpec


def example1(alpha: float) -> ProblemSpec:
    """Exact solution u = x^4 (x - 1) t^1.5 with homogeneous initial/boundary data."""

    def f(x, t):
        caputo = 3.0 * sqrt(pi) * x**4 * (x - 1.0) * t ** (1.5 - alpha) / (4.0 * gamma(2.5 - alpha))
        rest = x**2 * np.sqrt(t) * (
            5.0 * x**7 * t**2.5
            - 9.0 * x**6 * t**2.5
            + 4.0 * x**5 * t**2.5
            + 5.0 * x**2 * t
            - 4.0 * x * t
            - 30.0 * x
            + 18.0
        )
        return caputo + rest

    return ProblemSpec(
        alpha=alpha,
        phi=lambda x: 0.0,
        psi1=lambda t: 0.0,
        psi2=lambda t: 0.0,
        f=f,
        exact=lambda x, t: x**4 * (x - 1.0) * t**1.5,
    )


def example2(alpha: float) -> ProblemSpec:
    """Exact solution u = t^2 e^x with psi1 = t^2, psi2 = e t^2.

    The source term carries the full Burgers contribution u u_x = t^4 e^(2x)
    alongside the Caputo, dispersion, and advection parts.
    """

    def f(x, t):
        ex = np.exp(x)
        return (
            2.0 * ex * t ** (2.0 - alpha) / gamma(3.0 - alpha)
            + t**4 * ex**2
            + t**2 * ex
            - 2.0 * t * ex
        )

    return ProblemSpec(
        alpha=alpha,
        phi=lambda x: 0.0,
        psi1=lambda t: t**2,
        psi2=lambda t: e * t**2,
        f=f,
        exact=lambda x, t: t**2 * np.exp(x),
    )


def make_separable_problem(
    alpha: float,
    X: Callable,
    dX: Callable,
    ddX: Callable,
    T: Callable,
    dT: Callable,
    caputo_T: Callable[[np.ndarray, float], np.ndarray],
) -> ProblemSpec:
    """Manufactured problem for exact u(x,t) = X(x) T(t), with f obtained by
    substituting u into the equation using the analytic Caputo of T."""

    def f(x, t):
        return (
            X(x) * caputo_T(t, alpha)
            - ddX(x) * dT(t)
            + dX(x) * T(t)
            + X(x) * dX(x) * T(t) ** 2
        )

    return ProblemSpec(
        alpha=alpha,
        phi=lambda x: X(x) * T(0.0),
        psi1=lambda t: X(0.0) * T(t),
        psi2=lambda t: X(1.0) * T(t),
        f=f,
        exact=lambda x, t: X(x) * T(t),
    )


def manufactured_poly(alpha: float) -> ProblemSpec:
    """u = x^2 (1 - x) t^2: polynomial in both directions, smooth everywhere."""
    return make_separable_problem(
        alpha,
        X=lambda x: x**2 * (1.0 - x),
        dX=lambda x: 2.0 * x - 3.0 * x**2,
        ddX=lambda x: 2.0 - 6.0 * x,
        T=lambda t: t**2,
        dT=lambda t: 2.0 * t,
        caputo_T=lambda t, a: 2.0 * t ** (2.0 - a) / gamma(3.0 - a),
    )


def manufactured_trig(alpha: float) -> ProblemSpec:
    """u = sin(pi x) t^3: trigonometric in space, cubic in time."""
    return make_separable_problem(
        alpha,
        X=lambda x: np.sin(pi * np.asarray(x, dtype=float)),
        dX=lambda x: pi * np.cos(pi * np.asarray(x, dtype=float)),
        ddX=lambda x: -(pi**2) * np.sin(pi * np.asarray(x, dtype=float)),
        T=lambda t: t**3,
        dT=lambda t: 3.0 * t**2,
        caputo_T=lambda t, a: 6.0 * t ** (3.0 - a) / gamma(4.0 - a),
    )


REGISTRY: dict[str, Callable[[float], ProblemSpec]] = {
    "example1": example1,
    "example2": example2,
    "manufactured:poly": manufactured_poly,
    "manufactured:trig": manufactured_trig,
}


def register_problems() -> dict[str, Callable[[float], ProblemSpec]]:
    """Problem-name -> factory(alpha) mapping."""
    return dict(REGISTRY)


def get_problem(name: str, alpha: float) -> ProblemSpec:
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {sorted(REGISTRY)}") from None
    return factory(alpha)
