# settings.py
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
Run-time settings: the working tolerance, the run configuration embedded in every report, and the command-line
flags which are shared between all the sub-commands.
"""

import argparse
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from . import constants


def tolerance(override: Optional[float] = None) -> float:
    """
    Resolve the tolerance used for approximate comparisons.

    :param override:
        Explicit value supplied by a call site. Takes precedence over everything else.
    :return:
        The override if given, else the value of the MUMFORD_TOL environment variable, else the default.
    """
    if override is not None:
        if override <= 0:
            raise ValueError(f"Tolerance must be positive, got {override}")
        return float(override)

    raw: Optional[str] = os.environ.get(constants.tolerance_env_var)
    if raw is None or raw.strip() == "":
        return constants.default_tolerance

    try:
        value: float = float(raw)
    except ValueError:
        raise ValueError(f"{constants.tolerance_env_var}=<{raw}> is not a number")
    if value <= 0:
        raise ValueError(f"{constants.tolerance_env_var} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """
    The command and flags of one invocation of the command-line tool. Every report embeds it, so that a run can
    be reproduced from its output alone.
    """
    command: str
    seed: int = 0
    tolerance: float = constants.default_tolerance
    backend: str = constants.backend_exact
    output: Optional[Path] = None
    options: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = asdict(self)
        out["output"] = None if self.output is None else str(self.output)
        return out


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """
    Install the flags which every sub-command accepts.

    :param parser:
        The (sub-)parser to extend.
    :return:
        None
    """
    parser.add_argument('--seed', dest='seed', type=int, default=0,
                        help="Seed for every random draw made by the command.")
    parser.add_argument('--tol', dest='tol', type=float, default=None,
                        help="Tolerance for approximate comparisons (default: $MUMFORD_TOL or 1e-9).")
    parser.add_argument('--backend', dest='backend',
                        choices=[constants.backend_exact, constants.backend_approx],
                        default=constants.backend_exact,
                        help="Scalar backend for polynomial arithmetic.")
    parser.add_argument('--out', dest='out', type=Path, default=None,
                        help="Filename for output. Reports go to stdout when omitted.")
    parser.add_argument('--verbose', dest='verbose', action='store_true',
                        help="Log progress information.")


def run_config_from_args(args: argparse.Namespace, **options: Any) -> RunConfig:
    """
    Build the run configuration of a parsed command line.

    :param args:
        Parsed arguments, as returned by the parser built in __main__.
    :param options:
        Command-specific values to record alongside the shared flags.
    :return:
        RunConfig
    """
    command: str = " ".join(part for part in [getattr(args, "command", None),
                                               getattr(args, "action", None)] if part)
    return RunConfig(
        command=command,
        seed=args.seed,
        tolerance=tolerance(args.tol),
        backend=args.backend,
        output=args.out,
        options=options,
    )
