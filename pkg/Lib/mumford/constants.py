# constants.py
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
The file contains global settings for the mumford toolkit.
"""

from typing import Dict, List, Tuple

# Scalar backends
backend_exact: str = "exact"
backend_approx: str = "approx"

# Default tolerance for approximate comparisons, overridden by MUMFORD_TOL
default_tolerance: float = 1e-9
tolerance_env_var: str = "MUMFORD_TOL"

# |h'(a)| between tau and this multiple of tau is reported as ambiguous
gray_zone_factor: float = 10.

# Largest truncation order accepted by local expansions
max_expansion_order: int = 64

# Relative distance under which a numerical root snaps to an exact rational root
rational_root_match: float = 1e-7

# Relative tolerance for comparing jet invariants built from complex arithmetic
jet_rtol: float = 1e-6

# Relative singular value threshold for numerical ranks and null spaces
rank_rtol: float = 1e-8

# Flow integration
explosion_guard: float = 1e12
tracking_safety: float = 10.

# Sheet selection in the direct form of Phi needs this ratio between |F| on both sheets
branch_selection_ratio: float = 1e3

# Fiber sampler: grid step and half-width of the square [-5, 5]^2, retry bound
sampler_grid_step: int = 8
sampler_half_width: int = 5
sampler_max_retries: int = 200

# Exact sampler coefficients are p/q with |p| <= sampler_height and 1 <= q <= sampler_denominator
sampler_height: int = 24
sampler_denominator: int = 8

# Desk-scale cap on |deg D| for Riemann-Roch spaces
max_rr_degree: int = 20

# Reference curves as ascending integer coefficient lists
corpus: Dict[str, List[int]] = {
    "cusp": [0, 0, 0, 1],  # x^3
    "node": [0, 0, -1, 1],  # x^2 (x-1)
    "cusp_node": [0, 0, 0, 1, -2, 1],  # x^3 (x-1)^2
    "two_nodes": [0, 0, -5, 11, -7, 1],  # x^2 (x-1)^2 (x-5)
    "node_genus_two": [0, 0, -6, 11, -6, 1],  # x^2 (x-1)(x-2)(x-3)
    "smooth": [0, -1, 0, 1],  # x (x-1)(x+1)
}

# Expected (k - d, n - k + d) kernel ranks for the reference curves
corpus_kernel_ranks: Dict[str, Tuple[int, int]] = {
    "cusp": (0, 1),
    "node": (1, 0),
    "cusp_node": (1, 1),
    "two_nodes": (2, 0),
    "node_genus_two": (1, 0),
    "smooth": (0, 0),
}
