"""Evaluable tensor fields on a coordinate patch with finite-difference jets.

Every field wraps a plain callable ``point -> value`` together with an
:class:`FdConfig` that fixes how its derivatives are approximated.  All
derivative-taking operations in the package route through
:func:`partial_jet`, so a single stencil convention applies everywhere.
"""

from dataclasses import dataclass

import numpy as np

from .util import as_point


@dataclass(frozen=True)
class FdConfig:
    """Central finite-difference configuration.

    The effective spacing at a point p is ``step * max(1, |p|)`` so that
    derivatives stay well scaled far from the origin.
    """

    step: float = 1e-5
    order: int = 4

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("finite-difference step must be positive")
        if self.order not in (2, 4):
            raise ValueError("stencil order must be 2 or 4")

    def spacing(self, p):
        return self.step * max(1.0, float(np.linalg.norm(p)))


class Field:
    """An evaluable map point -> value with a finite-difference config."""

    def __init__(self, fn, fd=None, name=None):
        self.fn = fn
        self.fd = fd if fd is not None else FdConfig()
        self.name = name

    def __call__(self, p):
        return self.fn(as_point(p))

    def partial(self, p, axis):
        return partial_jet(self, p, axis)


class ScalarField(Field):
    """Real scalar field.  ``grad`` may supply an exact gradient hook."""

    def __init__(self, fn, fd=None, grad=None, name=None):
        super().__init__(fn, fd, name)
        self._grad = grad

    def gradient(self, p):
        p = as_point(p)
        if self._grad is not None:
            return np.asarray(self._grad(p), dtype=float)
        return np.array([partial_jet(self, p, a) for a in range(p.size)])


class VectorField(Field):
    """Real vector field, returned in coordinate components."""


class CovectorField(Field):
    """Real 1-form field, returned as its coefficient vector."""


class MatrixField(Field):
    """(1,1)-tensor field; columns of the matrix are images of basis vectors."""


class TwoFormField(Field):
    """2-form field; entry [a, b] is the form on the basis pair (e_a, e_b)."""

    def antisymmetry_residual(self, p):
        W = self(p)
        return float(np.max(np.abs(W + W.T)))


def partial_jet(field, p, axis):
    """Central finite-difference partial derivative of a field along one axis.

    Order 2 uses (f(p+h) - f(p-h)) / 2h; order 4 the five-point stencil
    (-f(p+2h) + 8 f(p+h) - 8 f(p-h) + f(p-2h)) / 12h.  Works for scalar,
    vector and matrix valued fields alike.
    """
    p = as_point(p)
    if not 0 <= axis < p.size:
        raise ValueError(f"axis {axis} out of range for a point of dimension {p.size}")
    h = field.fd.spacing(p)
    e = np.zeros_like(p)
    e[axis] = 1.0
    if field.fd.order == 2:
        return (np.asarray(field(p + h * e)) - np.asarray(field(p - h * e))) / (2.0 * h)
    f1 = np.asarray(field(p + h * e))
    f2 = np.asarray(field(p + 2.0 * h * e))
    b1 = np.asarray(field(p - h * e))
    b2 = np.asarray(field(p - 2.0 * h * e))
    # paired differences so that symmetric evaluations cancel exactly
    return (8.0 * (f1 - b1) - (f2 - b2)) / (12.0 * h)


def constant_matrix_field(M, fd=None, name=None):
    M = np.asarray(M, dtype=float)
    return MatrixField(lambda p, _M=M: _M, fd=fd, name=name)


def constant_two_form_field(W, fd=None, name=None):
    W = np.asarray(W, dtype=float)
    return TwoFormField(lambda p, _W=W: _W, fd=fd, name=name)
