"""Numeric tolerances shared by the package.

Every value can be overridden through an ``OCTANORM_TOL_<NAME>`` environment
variable, e.g. ``OCTANORM_TOL_SPHERE=1e-8``.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    sphere: float = 1e-9  # |N(v) - 1| accepted as "on the unit sphere"
    bisection: float = 1e-12  # final bracket width of every bisection
    golden: float = 1e-10  # final bracket width of golden-section search
    verdict: float = 1e-9  # numeric property checkers
    active: float = 1e-12  # relative slack when picking active polygon faces

    @classmethod
    def from_env(cls, environ=None) -> "Tolerances":
        environ = os.environ if environ is None else environ
        kwargs = {}
        for f in dataclasses.fields(cls):
            raw = environ.get(f"OCTANORM_TOL_{f.name.upper()}")
            if raw is not None:
                kwargs[f.name] = float(raw)
        return cls(**kwargs)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


TOL = Tolerances.from_env()
