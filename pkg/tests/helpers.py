"""Small problem builders shared by the tests."""

import numpy as np

from fitted_hjb.control import ControlSet
from fitted_hjb.discretization import ProblemSpec1D, ProblemSpec2D


def const(v):
    return lambda *args: v + 0 * args[0]


def spec_1d(a=1.0, b=0.0, c=0.0, boundary=0.0, controls=None):
    bfun = boundary if callable(boundary) else (lambda t, x: boundary + 0 * x)
    return ProblemSpec1D(
        a if callable(a) else const(a),
        b if callable(b) else const(b),
        c if callable(c) else const(c),
        controls=controls or ControlSet.singleton(0.0),
        boundary=bfun,
        terminal=lambda x: np.zeros_like(x),
        horizon=1.0,
        time_dependent=False,
    )


def spec_2d(a=1.0, abar=1.0, b1=0.0, b2=0.0, d1=0.0, c=0.0, boundary=0.0, controls=None):
    f = lambda v: v if callable(v) else const(v)  # noqa: E731
    bfun = boundary if callable(boundary) else (lambda t, x, y: boundary + 0 * x)
    return ProblemSpec2D(
        f(a), f(abar), f(b1), f(b2), f(d1), f(c),
        controls=controls or ControlSet.singleton(0.0),
        boundary=bfun,
        terminal=lambda x, y: np.zeros_like(x),
        horizon=1.0,
        time_dependent=False,
    )


def power_form_flux(a, b, xl, xr, vl, vr):
    """Fitted flux evaluated literally with powers x**beta."""
    beta = b / a
    return b * (xr**beta * vr - xl**beta * vl) / (xr**beta - xl**beta)
