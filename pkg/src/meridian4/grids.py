"""Rectangular parameter grids for sweeps and reports."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Grid2"]


@dataclass(frozen=True)
class Grid2:
    """Uniform (u, v) grid; mesh() returns broadcast-ready axes."""

    u_min: float
    u_max: float
    nu: int
    v_min: float
    v_max: float
    nv: int

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise ValueError("grid needs at least 2 points per axis")

    def u_points(self) -> np.ndarray:
        return np.linspace(self.u_min, self.u_max, self.nu)

    def v_points(self) -> np.ndarray:
        return np.linspace(self.v_min, self.v_max, self.nv)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return self.u_points()[:, None], self.v_points()[None, :]

    def to_json(self) -> dict:
        return {"u_min": self.u_min, "u_max": self.u_max, "nu": self.nu,
                "v_min": self.v_min, "v_max": self.v_max, "nv": self.nv}

    @classmethod
    def from_json(cls, d: dict) -> "Grid2":
        return cls(u_min=float(d["u_min"]), u_max=float(d["u_max"]),
                   nu=int(d["nu"]), v_min=float(d["v_min"]),
                   v_max=float(d["v_max"]), nv=int(d["nv"]))
