# conftest.py
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

"""
Shared fixtures: the reference curves and the worked matrix on the node.
"""

from fractions import Fraction
from typing import Dict

import pytest

from mumford import constants
from mumford.curve import CurveData, analyze_curve
from mumford.mumford_phase import MumfordMatrix
from mumford.scalar_poly import Poly


def exact_poly(*coeffs) -> Poly:
    return Poly([Fraction(c) for c in coeffs])


@pytest.fixture(scope="session")
def corpus() -> Dict[str, CurveData]:
    return {name: analyze_curve(exact_poly(*coeffs)) for name, coeffs in constants.corpus.items()}


@pytest.fixture(scope="session")
def node(corpus) -> CurveData:
    return corpus["node"]


@pytest.fixture(scope="session")
def cusp(corpus) -> CurveData:
    return corpus["cusp"]


@pytest.fixture
def e1() -> MumfordMatrix:
    # On y^2 = x^2 (x - 1)
    return MumfordMatrix(u=exact_poly(-2, 1), v=exact_poly(2), w=exact_poly(2, 1, 1), g=1)
