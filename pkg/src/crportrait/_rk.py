"""Dormand–Prince 5(4) for a planar field written as one complex state.

Small and allocation-free so that per-step overhead stays low; the tracer
drives the step loop itself because it needs to switch charts between steps.
"""

from __future__ import annotations

from typing import Callable

Field = Callable[[complex], complex]

# Dormand–Prince tableau
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def dp_step(f: Field, y: complex, h: float, k1: complex) -> tuple[complex, complex, float]:
    """One step; returns (y_new, f(y_new), error estimate magnitude)."""
    k2 = f(y + h * _A21 * k1)
    k3 = f(y + h * (_A31 * k1 + _A32 * k2))
    k4 = f(y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
    k5 = f(y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
    k6 = f(y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
    y5 = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
    k7 = f(y5)
    err = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
    return y5, k7, abs(err)


class Stepper:
    """Adaptive controller around :func:`dp_step`.

    ``h`` may be negative for backward integration.  ``advance`` performs one
    accepted step and returns (y, dy/dt, h_used).
    """

    def __init__(self, f: Field, y0: complex, h0: float, rtol: float, atol: float | None = None):
        self.f = f
        self.y = y0
        self.k = f(y0)
        self.h = h0
        self.rtol = rtol
        self.atol = rtol if atol is None else atol
        self.rejects = 0

    def reset(self, f: Field, y: complex, h: float | None = None) -> None:
        self.f = f
        self.y = y
        self.k = f(y)
        if h is not None:
            self.h = h

    def advance(self, h_max: float | None = None) -> tuple[complex, complex, float]:
        h = self.h
        sgn = 1.0 if h > 0 else -1.0
        if h_max is not None and abs(h) > h_max:
            h = sgn * h_max
        while True:
            y5, k7, err = dp_step(self.f, self.y, h, self.k)
            scale = self.atol + self.rtol * max(abs(self.y), abs(y5))
            ratio = err / scale
            if ratio <= 1.0 or abs(h) < 1e-14:
                fac = 5.0 if ratio == 0 else min(5.0, max(0.2, 0.9 * ratio ** -0.2))
                self.y, self.k = y5, k7
                self.h = h * fac
                return y5, k7, h
            self.rejects += 1
            h *= max(0.1, 0.9 * ratio ** -0.25)


def hermite(y0: complex, f0: complex, y1: complex, f1: complex, h: float, s: float) -> complex:
    """Cubic Hermite interpolant at fraction ``s`` of a step of length h."""
    s2, s3 = s * s, s * s * s
    return (
        (2 * s3 - 3 * s2 + 1) * y0
        + (s3 - 2 * s2 + s) * h * f0
        + (-2 * s3 + 3 * s2) * y1
        + (s3 - s2) * h * f1
    )
