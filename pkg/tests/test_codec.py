# test_codec.py
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

# ----------------------------------------------------------------------------

import io
import json
from fractions import Fraction

import pytest

from mumford.codec import (class_from_json, class_to_json, curve_to_json, divisor_from_json, divisor_to_json,
                           load_json_argument, matrix_from_json, matrix_to_json, poly_from_json, poly_to_json,
                           read_trajectory_csv, trajectory_columns, write_json, write_trajectory_csv)
from mumford.curve import PointOnCPrime
from mumford.gen_jacobian import DivisorOnCPrime, class_eq, theta
from mumford.lax_dynamics import flow_rk4

from conftest import exact_poly


def test_polynomials():
    p = poly_from_json(["1/2", 3, [0., 1.]])
    assert p.backend == "approx"
    assert poly_to_json(poly_from_json(["1/2", 3])) == ["1/2", "3"]
    with pytest.raises(ValueError):
        poly_from_json({"u": [1]})


def test_matrix(e1):
    doc = matrix_to_json(e1)
    assert doc == {"g": 1, "u": ["-2", "1"], "v": ["2"], "w": ["2", "1", "1"]}
    assert matrix_from_json(json.loads(json.dumps(doc))) == e1


def test_divisors():
    D = divisor_from_json([{"x": 5, "z": 2}, {"x": "inf", "z": "inf", "mult": -1}])
    assert D.degree == 0
    assert D.multiplicity(PointOnCPrime(Fraction(5), Fraction(2))) == 1
    assert divisor_to_json(D)[1] == {"x": "inf", "z": "inf", "mult": -1}
    with pytest.raises(ValueError):
        divisor_from_json([{"x": 5, "z": 2, "mult": 1.5}])


def test_classes(node):
    cls = theta(DivisorOnCPrime.of([(PointOnCPrime(Fraction(10), Fraction(3)), 1)]), node)
    doc = json.loads(json.dumps(class_to_json(cls, node)))
    assert len(doc["jets"]) == 2
    assert class_eq(class_from_json(doc, node), cls, node)
    doc["jets"] = doc["jets"][:1]
    with pytest.raises(ValueError):
        class_from_json(doc, node)


def test_curve_document(corpus):
    doc = curve_to_json(corpus["cusp_node"])
    assert (doc["g"], doc["gprime"], doc["n"], doc["k"], doc["d"], doc["delta"], doc["pi"]) == (2, 0, 2, 2, 1, 2, 2)
    assert [item["kind"] for item in doc["singular_points"]] == ["branch", "split"]
    assert [item["multiplicity"] for item in doc["modulus"]] == [2, 1, 1]


def test_json_arguments(tmp_path, monkeypatch):
    assert load_json_argument("[0, 0, 1]") == [0, 0, 1]
    path = tmp_path / "h.json"
    path.write_text("[0, 0, -1, 1]")
    assert load_json_argument(str(path)) == [0, 0, -1, 1]
    monkeypatch.setattr("sys.stdin", io.StringIO('{"g": 1}'))
    assert load_json_argument("-") == {"g": 1}
    with pytest.raises(json.JSONDecodeError):
        load_json_argument("not json")


def test_write_json(tmp_path, capsys):
    write_json({"b": 1, "a": [1, 2]})
    assert json.loads(capsys.readouterr().out) == {"a": [1, 2], "b": 1}
    path = tmp_path / "report.json"
    write_json({"passed": True}, path)
    assert json.loads(path.read_text()) == {"passed": True}


def test_trajectory_file(tmp_path, node, e1):
    traj = flow_rk4(e1, 0, 0.01, 1e-3)
    path = tmp_path / "traj.csv"
    write_trajectory_csv(traj, node.h, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# field,0"
    assert lines[1].split(",") == trajectory_columns(1)
    back = read_trajectory_csv(path)
    assert back.field_index == 0
    assert back.step == pytest.approx(1e-3)
    assert len(back) == len(traj)
    assert all(a.close(b, 1e-12) for a, b in zip(back.states, traj.states))


def test_trajectory_file_is_checked(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,u0\n0,1\n")
    with pytest.raises(ValueError):
        read_trajectory_csv(path)


def test_exact_polynomials_survive(e1):
    assert matrix_from_json(matrix_to_json(e1)).u == exact_poly(-2, 1)
