# codec.py
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
Text encodings shared by the command-line tool.

Scalars are written as "p/q" strings when exact and as [re, im] pairs when approximate. Polynomials are ascending
coefficient lists; matrices are {g, u, v, w}; divisors are lists of {x, z, mult} with x = "inf" for the point at
infinity; classes are {u, v, jets}. Trajectories are written as CSV, one row per time step.
"""

import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import constants
from .curve import CurveData, PointOnCPrime
from .gen_jacobian import DivisorOnCPrime, GJClass, JetRecord
from .lax_dynamics import Trajectory, trajectory_from_states
from .mumford_phase import MumfordMatrix, moment
from .scalar_poly import Poly, Series, parse_scalar, scalar_to_json

logger = logging.getLogger(__name__)

# Sentinel for the point at infinity in divisor JSON
infinity_token: str = "inf"


def load_json_argument(value: str) -> Any:
    """
    Decode a command-line argument which is inline JSON, the name of a JSON file, or - for standard input.
    """
    if value == "-":
        return json.load(sys.stdin)
    path: Path = Path(value)
    if not value.lstrip().startswith(("[", "{")) and path.is_file():
        with open(path) as f_in:
            return json.load(f_in)
    return json.loads(value)


# Polynomials and matrices

def poly_to_json(p: Poly) -> List:
    return [scalar_to_json(c) for c in p.coeffs]


def poly_from_json(obj: Sequence, backend: Optional[str] = None) -> Poly:
    if not isinstance(obj, (list, tuple)):
        raise ValueError(f"A polynomial is a list of coefficients, got <{obj!r}>")
    p: Poly = Poly([parse_scalar(c) for c in obj])
    return p if backend is None else p.to_backend(backend)


def matrix_to_json(A: MumfordMatrix) -> Dict[str, Any]:
    return {"g": A.g, "u": poly_to_json(A.u), "v": poly_to_json(A.v), "w": poly_to_json(A.w)}


def matrix_from_json(obj: Dict[str, Any]) -> MumfordMatrix:
    u, v, w = (poly_from_json(obj[key]) for key in ("u", "v", "w"))
    backend: str = constants.backend_approx if constants.backend_approx in (u.backend, v.backend, w.backend) \
        else constants.backend_exact
    return MumfordMatrix(u=u.to_backend(backend), v=v.to_backend(backend), w=w.to_backend(backend), g=int(obj["g"]))


# Points and divisors

def point_to_json(p: PointOnCPrime) -> Dict[str, Any]:
    if p.is_infinity:
        return {"x": infinity_token, "z": infinity_token}
    return {"x": scalar_to_json(p.x), "z": scalar_to_json(p.z)}


def point_from_json(obj: Dict[str, Any]) -> PointOnCPrime:
    if obj["x"] == infinity_token:
        return PointOnCPrime.infinity()
    return PointOnCPrime(parse_scalar(obj["x"]), parse_scalar(obj["z"]))


def divisor_to_json(D: DivisorOnCPrime) -> List[Dict[str, Any]]:
    return [dict(point_to_json(p), mult=m) for p, m in D.terms]


def divisor_from_json(obj: Sequence[Dict[str, Any]]) -> DivisorOnCPrime:
    terms = []
    for item in obj:
        multiplicity = item.get("mult", 1)
        if not isinstance(multiplicity, int) or isinstance(multiplicity, bool):
            raise ValueError(f"Multiplicities must be integers, got <{multiplicity!r}>")
        terms.append((point_from_json(item), multiplicity))
    return DivisorOnCPrime.of(terms)


# Classes

def class_to_json(cls: GJClass, c: CurveData) -> Dict[str, Any]:
    return {
        "u": poly_to_json(cls.reduced_u),
        "v": poly_to_json(cls.reduced_v),
        "jets": [{"point": point_to_json(item.point), "coeffs": [scalar_to_json(x) for x in series.coeffs]}
                 for item, series in zip(c.modulus, cls.jet.series)],
    }


def class_from_json(obj: Dict[str, Any], c: CurveData) -> GJClass:
    jets: List[Dict[str, Any]] = obj.get("jets", [])
    if len(jets) != len(c.modulus):
        raise ValueError(f"Expected {len(c.modulus)} jets, got {len(jets)}")
    series: List[Series] = []
    for item, jet in zip(c.modulus, jets):
        if not point_from_json(jet["point"]).close(item.point, 1e-6):
            raise ValueError(f"Jet at {jet['point']} does not match the modulus point {item.point}")
        coeffs = [complex(parse_scalar(x)) for x in jet["coeffs"]]
        if len(coeffs) != item.multiplicity:
            raise ValueError(f"Jet at {item.point} needs {item.multiplicity} coefficients, got {len(coeffs)}")
        series.append(Series(coeffs, 0, constants.backend_approx))
    u, v = poly_from_json(obj["u"]), poly_from_json(obj["v"])
    if u.backend != v.backend:
        u, v = u.to_approx(), v.to_approx()
    return GJClass(reduced_u=u, reduced_v=v, jet=JetRecord(tuple(series)))


def curve_to_json(c: CurveData) -> Dict[str, Any]:
    return {
        "h": poly_to_json(c.h),
        "g": c.g,
        "P": poly_to_json(c.P),
        "hprime": poly_to_json(c.hprime),
        "gprime": c.gprime,
        "n": c.n,
        "k": c.k,
        "d": c.d,
        "delta": c.delta,
        "pi": c.pi,
        "singular_points": [{"a": scalar_to_json(item.a), "ell": item.ell, "kind": item.kind,
                             "b": None if item.b is None else scalar_to_json(item.b)}
                            for item in c.branch_points],
        "modulus": [{"point": point_to_json(item.point), "multiplicity": item.multiplicity,
                     "local_param": item.local_param}
                    for item in c.modulus],
    }


# Reports

def write_json(document: Dict[str, Any], path: Optional[Path] = None) -> None:
    text: str = json.dumps(document, indent=2, sort_keys=True)
    if path is None:
        sys.stdout.write(text + "\n")
        return
    logging.info(f"Creating file <{path}>")
    with open(path, "w") as f_out:
        f_out.write(text + "\n")


# Trajectories

def _state_drift(A: MumfordMatrix, h: Poly) -> float:
    diff: Poly = moment(A.to_approx()) - h.to_approx()
    return max((abs(c) for c in diff.coeffs), default=0.)


def trajectory_columns(g: int) -> List[str]:
    names: List[str] = [f"u{i}" for i in range(g)] + [f"v{i}" for i in range(g)] + [f"w{i}" for i in range(g + 1)]
    return ["t"] + [f"{part}_{name}" for name in names for part in ("re", "im")] + ["drift"]


def write_trajectory_csv(traj: Trajectory, h: Poly, path: Optional[Path] = None) -> None:
    """
    Write one row per state: the time, the real and imaginary parts of the free coefficients, the moment drift.
    """
    g: int = traj.states[0].g
    f_out = sys.stdout if path is None else open(path, "w", newline="")
    if path is not None:
        logging.info(f"Creating file <{path}>")
    try:
        writer = csv.writer(f_out)
        writer.writerow(["# field", traj.field_index])
        writer.writerow(trajectory_columns(g))
        for t, state in zip(traj.times, traj.states):
            values: List[float] = []
            for value in state.free_coefficients():
                value = complex(value)
                values.extend([value.real, value.imag])
            writer.writerow([repr(t)] + [repr(v) for v in values] + [repr(_state_drift(state, h))])
    finally:
        if path is not None:
            f_out.close()


def read_trajectory_csv(path: Path) -> Trajectory:
    """
    Rebuild a trajectory from the CSV written by write_trajectory_csv.
    """
    with open(path, newline="") as f_in:
        reader = csv.reader(f_in)
        header: List[str] = next(reader)
        if not header or header[0] != "# field":
            raise ValueError(f"<{path}> is not a trajectory file")
        field_index: int = int(header[1])
        columns: List[str] = next(reader)
        g: int = (len(columns) - 2) // 6
        if trajectory_columns(g) != columns:
            raise ValueError(f"Unexpected trajectory columns in <{path}>")
        times: List[float] = []
        states: List[MumfordMatrix] = []
        for row in reader:
            if not row:
                continue
            numbers: List[float] = [float(x) for x in row]
            times.append(numbers[0])
            parts: List[float] = numbers[1:-1]
            values: List[complex] = [complex(parts[2 * j], parts[2 * j + 1]) for j in range(len(parts) // 2)]
            states.append(MumfordMatrix.from_free_coefficients(values, g, constants.backend_approx))
    if not states:
        raise ValueError(f"<{path}> holds no states")
    return trajectory_from_states(states, times, field_index)
