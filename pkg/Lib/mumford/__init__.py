# __init__.py
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
Mumford systems on singular hyperelliptic curves y^2 = h(x), and the generalized Jacobians of their spectral curves.
"""

from .curve import CurveData, ModulusPoint, PointOnCPrime, analyze_curve, local_expansion
from .gen_jacobian import (DivisorOnCPrime, GJClass, JetRecord, RationalFunctionRep, class_add, class_eq,
                           class_neg, divisor_of, identity, is_m_equivalent, jet_at, kernel_structure, phi_map,
                           phi_map_direct, tau, theta)
from .lax_dynamics import flow_rk4, isospectral_drift, linearization_report, vector_field
from .mumford_phase import (MumfordMatrix, divisor_to_matrix, gcd_structure, in_fiber, matrix_to_divisor, moment,
                            sample_fiber, stratum_index)
from .riemann_roch import im_space, lm_space, riemann_roch_check
from .scalar_poly import Poly, Series
