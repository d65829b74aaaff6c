"""Numerical tolerances used across the analysis pipeline.

Every field can be overridden from the command line (``--tol-land`` ...) or
through ``CRC_*`` environment variables; see :func:`Tolerances.from_env`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_PREFIX = "CRC_"


@dataclass(frozen=True)
class Tolerances:
    mult: float = 1e-9  # root clustering, relative to the root scale
    class_: float = 1e-10  # |Re lambda| <= class_*|lambda| -> center
    geom: float = 1e-9  # collinearity of three centers / three nodes
    sing: float = 1e-12  # minimum distance to a factor center in integral evaluation
    seed: float = 1e-6  # separatrix seed distance in chart units
    land: float = 1e-4  # landing ball around finite equilibria and saddle-connection check
    t_max: float = 1e3  # rescaled time budget per trace
    max_steps: int = 200_000
    rtol: float = 1e-10  # adaptive RK relative tolerance for tracing
    v_max: float = 0.5  # chart validity bound
    n_max: int = 64  # denominator bound for commensurability detection

    def replace(self, **changes) -> "Tolerances":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    @classmethod
    def from_env(cls, environ=None) -> "Tolerances":
        environ = os.environ if environ is None else environ
        changes = {}
        for f in fields(cls):
            key = ENV_PREFIX + env_name(f.name)
            if key in environ:
                kind = int if f.type in ("int", int) else float
                changes[f.name] = kind(float(environ[key])) if kind is int else float(environ[key])
        return cls(**changes)


def env_name(field_name: str) -> str:
    """``class_`` -> ``TOL_CLASS``, ``t_max`` -> ``T_MAX``."""
    name = field_name.rstrip("_").upper()
    if name in {"MULT", "CLASS", "GEOM", "SING", "SEED", "LAND"}:
        return "TOL_" + name
    return name


DEFAULT = Tolerances()
