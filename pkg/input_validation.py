#!/usr/bin/env python3
"""
Parsing and validation of command-line values.
Every failure raises InputError with a message fit for the terminal.
"""

import re
from typing import List, Optional, Tuple

import numpy as np

from bd_states import BDState
from exceptions import DomainError, InputError
from lqcc import AXES

PLANE_PATTERN = re.compile(r'^\s*(t?[123]|[xyz])\s*=\s*(\S+)\s*$', re.IGNORECASE)
PLANE_AXES = {'t1': 0, 't2': 1, 't3': 2, '1': 0, '2': 1, '3': 2, 'x': 0, 'y': 1, 'z': 2}


class InputValidator:
    """Turn raw flag strings into validated domain values."""

    @staticmethod
    def parse_floats(text: str, count: int, name: str) -> List[float]:
        """Parse exactly `count` comma-separated reals."""
        parts = [part.strip() for part in text.split(',')]
        if len(parts) != count:
            raise InputError(f"--{name} expects {count} comma-separated numbers, got {len(parts)}")
        try:
            values = [float(part) for part in parts]
        except ValueError:
            raise InputError(f"--{name} contains a value that is not a number: {text!r}")
        if not all(np.isfinite(values)):
            raise InputError(f"--{name} contains a non-finite value: {text!r}")
        return values

    @staticmethod
    def parse_state(p: Optional[str] = None, t: Optional[str] = None) -> BDState:
        """Build a BD state from exactly one of --p (4 values) or --t (3 values)."""
        if (p is None) == (t is None):
            raise InputError("Give exactly one of --p or --t")
        if p is not None:
            return BDState.from_probs(InputValidator.parse_floats(p, 4, 'p'))
        try:
            return BDState.from_t(InputValidator.parse_floats(t, 3, 't'))
        except DomainError as e:
            raise InputError(str(e))

    @staticmethod
    def parse_axis(text: str) -> Tuple[float, float, float]:
        """'x', 'y', 'z' or 'ux,uy,uz' (normalized) to a unit 3-vector."""
        key = text.strip().lower()
        if key in AXES:
            return AXES[key]
        vector = np.array(InputValidator.parse_floats(text, 3, 'axis'))
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise InputError("Axis vector must be non-zero")
        return tuple(float(x) for x in vector / norm)

    @staticmethod
    def parse_plane(text: str) -> Tuple[int, float]:
        """'t3=0' (also '3=0' or 'z=0') to (axis index, offset)."""
        match = PLANE_PATTERN.match(text)
        if not match:
            raise InputError(f"--plane expects axis=value such as t3=0, got {text!r}")
        axis, value = match.groups()
        try:
            offset = float(value)
        except ValueError:
            raise InputError(f"--plane offset is not a number: {value!r}")
        return PLANE_AXES[axis.lower()], offset

    @staticmethod
    def validate_grid(n: int) -> int:
        """Check the points-per-axis count of a geometry grid."""
        if n < 2:
            raise InputError(f"--grid must be at least 2, got {n}")
        return n
