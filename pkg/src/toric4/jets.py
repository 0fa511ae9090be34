"""Truncated second-order Taylor arithmetic in four base coordinates.

A `Jet` carries a value, its gradient and its Hessian with respect to the
four chart coordinates, so every metric component evaluated through jet
arithmetic comes with exact first and second partial derivatives (up to
roundoff).  This is the scalar arithmetic every closed-form metric in the
package is evaluated in; tabulated or black-box fields fall back to the
Richardson finite differences in `finite_difference_jet`.
"""

from __future__ import annotations

import math

import numpy as np

NVARS = 4


class Jet:
    """Value, gradient and Hessian of a scalar function at one point."""

    __slots__ = ("val", "d", "dd")

    def __init__(self, val, d=None, dd=None):
        self.val = float(val)
        self.d = np.zeros(NVARS) if d is None else d
        self.dd = np.zeros((NVARS, NVARS)) if dd is None else dd

    # -- constructors ------------------------------------------------------

    @staticmethod
    def variable(value, index):
        """Seed coordinate number `index` with unit first derivative."""
        d = np.zeros(NVARS)
        d[index] = 1.0
        return Jet(value, d)

    @staticmethod
    def constant(value):
        return Jet(value)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.d + other.d, self.dd + other.dd)
        return Jet(self.val + other, self.d.copy(), self.dd.copy())

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.d, -self.dd)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val - other.val, self.d - other.d, self.dd - other.dd)
        return Jet(self.val - other, self.d.copy(), self.dd.copy())

    def __rsub__(self, other):
        return Jet(other - self.val, -self.d, -self.dd)

    def __mul__(self, other):
        if isinstance(other, Jet):
            cross = np.outer(self.d, other.d)
            return Jet(
                self.val * other.val,
                self.d * other.val + self.val * other.d,
                self.dd * other.val + self.val * other.dd + cross + cross.T,
            )
        return Jet(self.val * other, self.d * other, self.dd * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other._reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def __pow__(self, p):
        if p == 2:
            return self * self
        u = self.val
        return self._chain(u ** p, p * u ** (p - 1), p * (p - 1) * u ** (p - 2))

    # -- elementary functions ----------------------------------------------

    def _chain(self, f, fp, fpp):
        """Compose with a scalar function given f(u), f'(u), f''(u)."""
        cross = np.outer(self.d, self.d)
        return Jet(f, fp * self.d, fp * self.dd + fpp * cross)

    def _reciprocal(self):
        iu = 1.0 / self.val
        return self._chain(iu, -iu * iu, 2.0 * iu * iu * iu)

    def sqrt(self):
        s = math.sqrt(self.val)
        return self._chain(s, 0.5 / s, -0.25 / (s * self.val))

    def exp(self):
        e = math.exp(self.val)
        return self._chain(e, e, e)

    def log(self):
        iu = 1.0 / self.val
        return self._chain(math.log(self.val), iu, -iu * iu)

    def sin(self):
        s, c = math.sin(self.val), math.cos(self.val)
        return self._chain(s, c, -s)

    def cos(self):
        s, c = math.sin(self.val), math.cos(self.val)
        return self._chain(c, -s, -c)

    def __repr__(self):
        return f"Jet({self.val!r})"


def sqrt(x):
    return x.sqrt() if isinstance(x, Jet) else math.sqrt(x)


def sin(x):
    return x.sin() if isinstance(x, Jet) else math.sin(x)


def cos(x):
    return x.cos() if isinstance(x, Jet) else math.cos(x)


def log(x):
    return x.log() if isinstance(x, Jet) else math.log(x)


def exp(x):
    return x.exp() if isinstance(x, Jet) else math.exp(x)


def value(x):
    return x.val if isinstance(x, Jet) else float(x)


def seed_coords(coords, active=None):
    """Turn a coordinate 4-tuple into jet variables.

    `active` restricts which coordinates are seeded (the rest become
    constants); by default all four are active.
    """
    active = range(NVARS) if active is None else active
    return tuple(
        Jet.variable(c, i) if i in active else Jet.constant(c)
        for i, c in enumerate(coords)
    )


def smoothstep_quintic(t):
    """C² step 6t⁵ − 15t⁴ + 10t³ clamped to [0, 1].

    First and second derivatives vanish at both ends, which is what makes
    piecewise-defined Gram fields twice differentiable across seams.
    """
    if not isinstance(t, Jet):
        t = Jet.constant(t)
    if t.val <= 0.0:
        return Jet.constant(0.0)
    if t.val >= 1.0:
        return Jet.constant(1.0)
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def finite_difference_jet(f, coords, index_pair=None, scale=None):
    """Second-order jet of a black-box scalar via Richardson differences.

    `f` maps a plain coordinate 4-tuple to a float.  Steps are chosen as
    eps^(1/3) times the coordinate scale, with one Richardson extrapolation
    level on gradient and Hessian entries.
    """
    x = np.asarray(coords, dtype=float)
    if scale is None:
        scale = np.maximum(1.0, np.abs(x))
    h = (np.finfo(float).eps ** (1.0 / 3.0)) * scale

    def grad_entry(i, step):
        e = np.zeros(NVARS)
        e[i] = step
        return (f(x + e) - f(x - e)) / (2 * step)

    def hess_diag(i, step):
        e = np.zeros(NVARS)
        e[i] = step
        return (f(x + e) - 2 * f(x) + f(x - e)) / step ** 2

    def hess_off(i, j, step_i, step_j):
        ei = np.zeros(NVARS)
        ej = np.zeros(NVARS)
        ei[i] = step_i
        ej[j] = step_j
        return (
            f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
        ) / (4 * step_i * step_j)

    def richardson(val_h, val_h2):
        return (4.0 * val_h2 - val_h) / 3.0

    d = np.zeros(NVARS)
    dd = np.zeros((NVARS, NVARS))
    for i in range(NVARS):
        d[i] = richardson(grad_entry(i, h[i]), grad_entry(i, h[i] / 2))
        dd[i, i] = richardson(hess_diag(i, h[i]), hess_diag(i, h[i] / 2))
        for j in range(i + 1, NVARS):
            v = richardson(
                hess_off(i, j, h[i], h[j]), hess_off(i, j, h[i] / 2, h[j] / 2)
            )
            dd[i, j] = dd[j, i] = v
    return Jet(f(x), d, dd)
