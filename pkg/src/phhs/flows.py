"""Deterministic numerical flows and their compositions.

All integration is fixed-step classical Runge-Kutta 4: determinism is worth
more than adaptivity for golden-value work, and the step budget guards the
singular loci.  Time-plane conventions: a bi-time grid node t + i s is reached
by flowing X for t and then J X for s from the anchor; paths in the complex
time plane are polylines integrated segment by segment.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteStateError, StepBudgetExceededError
from .fields import VectorField
from .util import as_point

BLOWUP = 1e8


@dataclass(frozen=True)
class FlowConfig:
    dt: float = 1e-3
    scheme: str = "rk4"
    max_step_count: int = 5_000_000
    richardson: bool = False

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.max_step_count <= 0:
            raise ValueError("max_step_count must be positive")
        if self.scheme != "rk4":
            raise ValueError(f"unknown scheme {self.scheme!r}")


def _check_state(y):
    if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > BLOWUP:
        raise NonFiniteStateError("flow state overflowed; a singular locus was hit")


def _rk4(V, x0, t, n_steps):
    y = np.array(x0, dtype=float)
    h = t / n_steps
    for _ in range(n_steps):
        k1 = np.asarray(V(y), dtype=float)
        k2 = np.asarray(V(y + 0.5 * h * k1), dtype=float)
        k3 = np.asarray(V(y + 0.5 * h * k2), dtype=float)
        k4 = np.asarray(V(y + h * k3), dtype=float)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check_state(y)
    return y


def _steps_for(t, cfg):
    n = max(1, int(np.ceil(abs(t) / cfg.dt)))
    if n > cfg.max_step_count:
        raise StepBudgetExceededError(
            f"flow of duration {t} needs {n} steps, budget is {cfg.max_step_count}"
        )
    return n


def flow(V, x0, t, cfg=FlowConfig()):
    """Endpoint of the time-t flow of V from x0 (fixed-step RK4).

    With ``cfg.richardson`` the endpoint is Richardson-extrapolated from the
    base and halved step sizes (one extra order, deterministic as well).
    """
    x0 = as_point(x0)
    if t == 0.0:
        return np.array(x0)
    n = _steps_for(t, cfg)
    if not cfg.richardson:
        return _rk4(V, x0, t, n)
    coarse = _rk4(V, x0, t, n)
    fine = _rk4(V, x0, t, 2 * n)
    return fine + (fine - coarse) / 15.0


def flow_error_estimate(V, x0, t, cfg=FlowConfig()):
    """Flow endpoint with a Richardson error estimate from halved steps."""
    x0 = as_point(x0)
    if t == 0.0:
        return np.array(x0), 0.0
    n = _steps_for(t, cfg)
    coarse = _rk4(V, x0, t, n)
    fine = _rk4(V, x0, t, 2 * n)
    err = float(np.max(np.abs(fine - coarse))) / 15.0
    return fine, err


def _flow_through_nodes(V, x0, offsets, cfg):
    """Flow sequentially through increasing |offsets| from 0, capturing states."""
    out = {0.0: np.array(x0)}
    for sgn in (1.0, -1.0):
        ts = sorted((o for o in offsets if (o > 0 if sgn > 0 else o < 0)), key=abs)
        y = np.array(x0)
        prev = 0.0
        for t in ts:
            y = flow(V, y, t - prev, cfg)
            out[t] = y
            prev = t
    return out


@dataclass
class GridCurve:
    """Discrete bi-time trajectory over a rectangle in the complex time plane."""

    t_nodes: np.ndarray
    s_nodes: np.ndarray
    values: np.ndarray  # (nt, ns, dim)
    z0: complex
    x0: np.ndarray
    diagnostics: dict

    @property
    def nt(self):
        return self.t_nodes.size

    @property
    def ns(self):
        return self.s_nodes.size

    def node_z(self, i, j):
        return complex(self.t_nodes[i], self.s_nodes[j])


def trajectory_grid(fields, x0, z0, t_range, s_range, nt, ns, cfg=FlowConfig()):
    """Fill a rectangular bi-time grid by flowing X in t and then J X in s.

    The anchor z0 must be a grid node.  Diagnostics recorded with the grid:

    * swap_defect: distance between the two sweep orders at the far corner;
    * energy_drift_R / energy_drift_I: max |H o gamma - H(x0)|;
    * cr_residual: max |d_s gamma - J(d_t gamma)| by grid central differences.
    """
    x0 = as_point(x0)
    z0 = complex(z0)
    t_nodes = np.linspace(t_range[0], t_range[1], nt)
    s_nodes = np.linspace(s_range[0], s_range[1], ns)
    i0 = int(np.argmin(np.abs(t_nodes - z0.real)))
    j0 = int(np.argmin(np.abs(s_nodes - z0.imag)))
    if abs(t_nodes[i0] - z0.real) > 1e-12 or abs(s_nodes[j0] - z0.imag) > 1e-12:
        raise ValueError("the anchor z0 must lie on a grid node")

    t_states = _flow_through_nodes(fields.X, x0, [t - t_nodes[i0] for t in t_nodes], cfg)
    values = np.empty((nt, ns, x0.size))
    for i, t in enumerate(t_nodes):
        col_anchor = t_states[t - t_nodes[i0]]
        s_states = _flow_through_nodes(fields.JX, col_anchor, [s - s_nodes[j0] for s in s_nodes], cfg)
        for j, s in enumerate(s_nodes):
            values[i, j] = s_states[s - s_nodes[j0]]

    far_t = t_nodes[-1] - t_nodes[i0]
    far_s = s_nodes[-1] - s_nodes[j0]
    swapped = flow(fields.X, flow(fields.JX, x0, far_s, cfg), far_t, cfg)
    swap_defect = float(np.max(np.abs(values[-1, -1] - swapped)))

    h_r0 = fields.model.H_R(x0)
    h_i0 = fields.H_I(x0)
    drift_r = max(abs(fields.model.H_R(values[i, j]) - h_r0) for i in range(nt) for j in range(ns))
    drift_i = max(abs(fields.H_I(values[i, j]) - h_i0) for i in range(nt) for j in range(ns))

    cr = 0.0
    cr_nodes = np.zeros((nt, ns))
    if nt > 2 and ns > 2:
        ht = t_nodes[1] - t_nodes[0]
        hs = s_nodes[1] - s_nodes[0]
        for i in range(1, nt - 1):
            for j in range(1, ns - 1):
                dt_g = (values[i + 1, j] - values[i - 1, j]) / (2.0 * ht)
                ds_g = (values[i, j + 1] - values[i, j - 1]) / (2.0 * hs)
                Jm = np.asarray(fields.model.J(values[i, j]), dtype=float)
                cr_nodes[i, j] = float(np.max(np.abs(ds_g - Jm @ dt_g)))
        cr = float(np.max(cr_nodes))

    return GridCurve(
        t_nodes=t_nodes,
        s_nodes=s_nodes,
        values=values,
        z0=z0,
        x0=np.array(x0),
        diagnostics={
            "swap_defect": swap_defect,
            "energy_drift_R": drift_r,
            "energy_drift_I": drift_i,
            "cr_residual": cr,
            "cr_nodes": cr_nodes,
        },
    )


def _combo_field(fields, a, b):
    def fn(p):
        return a * np.asarray(fields.X(p), dtype=float) + b * np.asarray(fields.JX(p), dtype=float)

    return VectorField(fn, fd=fields.X.fd, name="combo")


def tilted_flow(fields, x0, alpha, r, cfg=FlowConfig()):
    """Flow along cos(alpha) X + sin(alpha) J X for parameter r."""
    return flow(_combo_field(fields, np.cos(alpha), np.sin(alpha)), x0, r, cfg)


def flow_word(fields, x0, word, cfg=FlowConfig()):
    """Composition phi^X_{t_1} o phi^{JX}_{s_1} o ... o phi^{JX}_{s_n} (x0).

    The innermost factor phi^{JX}_{s_n} is applied first, i.e. the word is
    consumed right to left.
    """
    y = as_point(x0)
    for t_k, s_k in reversed(list(word)):
        y = flow(fields.JX, y, s_k, cfg)
        y = flow(fields.X, y, t_k, cfg)
    return y


def continue_along_path(fields, x0, path, cfg=FlowConfig()):
    """Analytic continuation along a polyline in the complex time plane.

    Integrates d gamma / du = Re(dz) X + Im(dz) J X across each segment; the
    endpoint depends on the path homotopy class around singular loci, which is
    exactly the monodromy this operation exposes.
    """
    nodes = [complex(z) for z in path]
    if len(nodes) < 2:
        return np.array(as_point(x0))
    y = as_point(x0)
    for z_a, z_b in zip(nodes[:-1], nodes[1:]):
        dz = z_b - z_a
        if dz == 0:
            raise ValueError("consecutive path nodes must be distinct")
        seg_cfg = FlowConfig(
            dt=cfg.dt / max(abs(dz), 1e-300),
            scheme=cfg.scheme,
            max_step_count=cfg.max_step_count,
            richardson=cfg.richardson,
        )
        y = flow(_combo_field(fields, dz.real, dz.imag), y, 1.0, seg_cfg)
    return y


def circle_path(center, radius, start, turns=1, n_segments=64):
    """Polyline approximating circles around a center, starting at ``start``.

    The start point must lie on the circle; the path closes back onto it.
    """
    center = complex(center)
    start = complex(start)
    if abs(abs(start - center) - radius) > 1e-9:
        raise ValueError("start point is not on the circle")
    theta0 = np.angle(start - center)
    total = int(round(n_segments * turns))
    thetas = theta0 + 2.0 * np.pi * turns * np.arange(total + 1) / total
    return [center + radius * np.exp(1j * th) for th in thetas]


def commutation_defect(fields, x0, t, s, cfg=FlowConfig()):
    """Distance between phi^X_t o phi^{JX}_s (x0) and phi^{JX}_s o phi^X_t (x0)."""
    a = flow(fields.X, flow(fields.JX, x0, s, cfg), t, cfg)
    b = flow(fields.JX, flow(fields.X, x0, t, cfg), s, cfg)
    return float(np.linalg.norm(a - b))
