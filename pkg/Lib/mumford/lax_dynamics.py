# lax_dynamics.py
# -*- coding: utf-8 -*-
#
# The python script in this file is part of mumford, a toolkit for Mumford systems
# on singular hyperelliptic curves and their generalized Jacobians.
#
# Copyright (C) 2024-2026 The mumford contributors
#
# This code is free software; you can redistribute it and/or modify it under
# the terms of the GNU General Public License as published by the Free Software
# Foundation; either version 2 of the License, or (at your option) any later
# version.
#
# You should have received a copy of the GNU General Public License along with
# this file; if not, write to the Free Software Foundation, Inc., 51 Franklin
# Street, Fifth Floor, Boston, MA  02110-1301, USA

# ----------------------------------------------------------------------------

"""
The Lax vector fields D_0, ..., D_{g-1} of the Mumford system, their numerical flows, and the diagnostics which
show that the flows are isospectral and linear on the generalized Jacobian.

For A = [[v, u], [w, -v]] the field D_i is the bracket [A, B_i] with B_i = [A / x^(i+1)]_+ - [[0, 0], [u_i, 0]],
where [.]_+ takes the polynomial part.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import constants
from .curve import CurveData
from .mumford_phase import MumfordMatrix, Tangent, matrix_to_divisor, moment
from .scalar_poly import Poly, Scalar, matrix_rank, poly_divrem

logger = logging.getLogger(__name__)


class StateExplosion(FloatingPointError):
    pass


class TrackingAmbiguity(ValueError):
    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


def _bracket(A: MumfordMatrix, Bu: Poly, Bv: Poly, Bw: Poly) -> Tangent:
    # [A, B] for trace-free A = [[v, u], [w, -v]] and B = [[Bv, Bu], [Bw, -Bv]]
    u, v, w = A.u, A.v, A.w
    return Tangent(du=2 * (v * Bu - u * Bv),
                   dv=u * Bw - Bu * w,
                   dw=2 * (w * Bv - v * Bw))


def vector_field(A: MumfordMatrix, i: int) -> Tangent:
    """
    The tangent vector D_i at A.

    :param A:
        Point of M_g
    :param i:
        Index in 0..g-1
    :return:
        Tangent
    """
    if not 0 <= i <= A.g - 1:
        raise IndexError(f"Field index {i} is outside 0..{A.g - 1}")
    Bu: Poly = A.u.shift_down(i + 1)
    Bv: Poly = A.v.shift_down(i + 1)
    Bw: Poly = A.w.shift_down(i + 1) - A.u[i]
    return _bracket(A, Bu, Bv, Bw)


def _divided_difference(p: Poly, t: Scalar) -> Poly:
    # (p(x) - p(t)) / (x - t)
    return poly_divrem(p - p(t), Poly((-t, 1), p.backend))[0]


def vector_field_at_parameter(A: MumfordMatrix, t: Scalar) -> Tangent:
    """
    The generating field [A(x), (A(x) - A(t)) / (x - t) - [[0, 0], [u(t), 0]]], equal to sum_i t^i D_i.
    """
    Bu: Poly = _divided_difference(A.u, t)
    Bv: Poly = _divided_difference(A.v, t)
    Bw: Poly = _divided_difference(A.w, t) - A.u(t)
    return _bracket(A, Bu, Bv, Bw)


def _rhs(y: np.ndarray, i: int, g: int) -> np.ndarray:
    A: MumfordMatrix = MumfordMatrix.from_free_coefficients([complex(c) for c in y], g, constants.backend_approx)
    return np.array(vector_field(A, i).free_coefficients(g), dtype=complex)


@dataclass
class Trajectory:
    times: List[float]
    states: List[MumfordMatrix]
    field_index: int
    step: float

    def __len__(self) -> int:
        return len(self.states)


def flow_rk4(A0: MumfordMatrix, i: int, t_end: float, dt: float) -> Trajectory:
    """
    Integrate the field D_i from A0 with the classical fourth-order Runge-Kutta scheme on the free coefficients.

    :param A0:
        Initial state; converted to the approximate backend
    :param i:
        Index of the field
    :param t_end:
        Final time
    :param dt:
        Fixed step
    :return:
        Trajectory with ceil(t_end / dt) + 1 states
    """
    if dt <= 0 or t_end < dt:
        raise ValueError(f"Need dt > 0 and t_end >= dt, got dt={dt}, t_end={t_end}")
    if not 0 <= i <= A0.g - 1:
        raise IndexError(f"Field index {i} is outside 0..{A0.g - 1}")
    g: int = A0.g
    steps: int = int(math.ceil(t_end / dt - 1e-9))

    y: np.ndarray = np.array(A0.to_approx().free_coefficients(), dtype=complex)
    times: List[float] = [0.]
    states: List[MumfordMatrix] = [A0.to_approx()]
    for step in range(1, steps + 1):
        k1 = _rhs(y, i, g)
        k2 = _rhs(y + 0.5 * dt * k1, i, g)
        k3 = _rhs(y + 0.5 * dt * k2, i, g)
        k4 = _rhs(y + dt * k3, i, g)
        y = y + dt / 6. * (k1 + 2. * k2 + 2. * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > constants.explosion_guard:
            raise StateExplosion(f"State exceeded {constants.explosion_guard:.0e} at t = {step * dt:.6g}")
        times.append(step * dt)
        states.append(MumfordMatrix.from_free_coefficients(list(y), g, constants.backend_approx))
    logger.info(f"Integrated D_{i} over [0, {times[-1]:.6g}] in {steps} steps")
    return Trajectory(times=times, states=states, field_index=i, step=dt)


def isospectral_drift(traj: Trajectory, h: Poly) -> float:
    """
    Largest coefficient deviation of moment(A(t)) from h along the trajectory.
    """
    target: Poly = h.to_approx()
    drift: float = 0.
    for state in traj.states:
        diff: Poly = moment(state.to_approx()) - target
        drift = max(drift, diff.norm())
    return drift


# ----------------------------------------------------------------------------
# Linearization
# ----------------------------------------------------------------------------

def invariant_ladder(c: CurveData) -> List[Tuple[str, Poly]]:
    """
    The numerators R of the invariant differentials R(x) dx / (P(x) z): the partial products of the linear factors
    of P, 1, (x - a_1), ..., P, followed by P x^j for 1 <= j <= g' - 1. All have degree at most g - 1, and there
    are g of them; the last one has degree g - 1.
    """
    backend: str = constants.backend_approx
    ladder: List[Tuple[str, Poly]] = [("1", Poly.one(backend))]
    current: Poly = Poly.one(backend)
    label: str = ""
    for item in c.branch_points:
        for _ in range(item.ell):
            current = current * Poly((-complex(item.a), 1), backend)
            label += f"(x-{item.a})"
            if current.degree <= c.g - 1:
                ladder.append((label, current))
    P: Poly = c.P.to_approx()
    for j in range(1, c.gprime):
        ladder.append((f"P*x^{j}", P * Poly.monomial(j, 1, backend)))
    return ladder


@dataclass
class LinearizationReport:
    """
    Finite-difference sums sum_k R(x_k) dx_k / (P(x_k) z_k) / dt along a trajectory, one series per invariant
    differential, with the value each one should take.
    """
    field_index: int
    labels: List[str]
    degrees: List[int]
    expected: List[complex]
    sums: List[List[complex]] = field(default_factory=list)

    @property
    def top_index(self) -> int:
        return len(self.labels) - 1

    def deviations(self) -> List[float]:
        return [max((abs(s - e) for s in series), default=0.) for series, e in zip(self.sums, self.expected)]

    def top_sign_constant(self) -> bool:
        series: List[complex] = self.sums[self.top_index] if self.sums else []
        if not self.expected or self.expected[self.top_index] == 0:
            return True
        return all(np.sign(s.real) == np.sign(series[0].real) for s in series) if series else True

    def passed(self, tol: float = 1e-3) -> bool:
        return all(dev <= tol for dev in self.deviations()) and self.top_sign_constant()

    def as_dict(self) -> dict:
        return {
            "field": self.field_index,
            "differentials": [{"R": label, "degree": degree, "expected": [e.real, e.imag],
                               "max_deviation": dev,
                               "sums": [[s.real, s.imag] for s in series]}
                              for label, degree, e, dev, series in zip(self.labels, self.degrees, self.expected,
                                                                      self.deviations(), self.sums)],
            "top_sign_constant": bool(self.top_sign_constant()),
        }


def _track(previous: np.ndarray, current: np.ndarray, step: int) -> np.ndarray:
    """
    Reorder current so that its entries follow the entries of previous.
    """
    cost = np.abs(previous[:, None] - current[None, :])
    rows, cols = linear_sum_assignment(cost)
    ordered: np.ndarray = current[cols[np.argsort(rows)]]
    displacement: float = float(np.max(np.abs(ordered - previous))) if len(previous) else 0.
    if len(current) > 1:
        gaps = np.abs(current[:, None] - current[None, :]) + np.eye(len(current)) * np.inf
        if float(np.min(gaps)) < constants.tracking_safety * displacement:
            raise TrackingAmbiguity("Two roots of u are too close to be told apart", step)
    return ordered


def linearization_report(traj: Trajectory, c: CurveData) -> LinearizationReport:
    """
    Follow the divisor points along a trajectory and compute the differential sums per step.

    Under D_i the sum for R(x) dx / (P z) equals -2 [x^i] R: zero for every member of the family except the
    top one under D_{g-1}, whose sum is -2.
    """
    ladder: List[Tuple[str, Poly]] = invariant_ladder(c)
    i: int = traj.field_index
    report = LinearizationReport(field_index=i,
                                 labels=[label for label, _ in ladder],
                                 degrees=[int(R.degree) for _, R in ladder],
                                 expected=[-2 * complex(R[i]) for _, R in ladder],
                                 sums=[[] for _ in ladder])

    xs_prev: Optional[np.ndarray] = None
    values_prev: Optional[np.ndarray] = None
    for step, state in enumerate(traj.states):
        points = matrix_to_divisor(state, c, tol=1e-7)
        xs: np.ndarray = np.array([complex(p.x) for p in points], dtype=complex)
        if xs_prev is not None:
            xs = _track(xs_prev, xs, step)
        v: Poly = state.v.to_approx()
        # R(x) / (P(x) z) = R(x) / v(x) at the divisor points
        values: np.ndarray = np.array([[R(x) / v(x) for x in xs] for _, R in ladder], dtype=complex)
        if xs_prev is not None:
            dx: np.ndarray = (xs - xs_prev) / traj.step
            averaged: np.ndarray = 0.5 * (values + values_prev)
            for index in range(len(ladder)):
                report.sums[index].append(complex(np.sum(averaged[index] * dx)))
        xs_prev, values_prev = xs, values
    return report


def field_rank(A: MumfordMatrix, tol: Optional[float] = None) -> int:
    """
    Rank of the span of D_0, ..., D_{g-1} at A.
    """
    rows: List[List[Scalar]] = [vector_field(A, i).free_coefficients(A.g) for i in range(A.g)]
    return matrix_rank(rows, 3 * A.g + 1, A.backend, tol if tol is not None else constants.rank_rtol)


def commutation_defect(A: MumfordMatrix, i: int, j: int, s: float, dt: float) -> float:
    """
    Flow D_i then D_j for time s, and D_j then D_i; the largest coordinate difference of the two end states.
    """
    first: MumfordMatrix = flow_rk4(flow_rk4(A, i, s, dt).states[-1], j, s, dt).states[-1]
    second: MumfordMatrix = flow_rk4(flow_rk4(A, j, s, dt).states[-1], i, s, dt).states[-1]
    a: np.ndarray = np.array(first.free_coefficients(), dtype=complex)
    b: np.ndarray = np.array(second.free_coefficients(), dtype=complex)
    return float(np.max(np.abs(a - b)))


def trajectory_from_states(states: Sequence[MumfordMatrix], times: Sequence[float], field_index: int
                           ) -> Trajectory:
    step: float = float(times[1] - times[0]) if len(times) > 1 else 0.
    return Trajectory(times=list(times), states=list(states), field_index=field_index, step=step)
