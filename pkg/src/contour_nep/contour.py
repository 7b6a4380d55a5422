"""Closed contours, trapezoid nodes and interior tests."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

TWO_PI = 2.0 * np.pi

# relative distance below which a point counts as lying on the curve
ON_CURVE_RTOL = 1e-9
N_WIND = 64


class QuadratureNodes(NamedTuple):
    t: np.ndarray
    z: np.ndarray
    dz: np.ndarray

    @property
    def count(self) -> int:
        return len(self.t)


@dataclass(frozen=True)
class Contour:
    """A 2 pi-periodic parameterized closed curve.

    Use :meth:`circle`, :meth:`ellipse` or :meth:`custom` to build one.
    """

    kind: str
    phi: Callable[[np.ndarray], np.ndarray]
    dphi: Callable[[np.ndarray], np.ndarray]
    center: complex = 0.0
    radius: Optional[float] = None
    semi_axes: Optional[tuple] = None

    @classmethod
    def circle(cls, center=0.0, radius=1.0) -> "Contour":
        center = complex(center)
        radius = float(radius)
        if not radius > 0:
            raise ValueError("circle radius must be positive")
        return cls(
            "circle",
            lambda t: center + radius * np.exp(1j * np.asarray(t)),
            lambda t: 1j * radius * np.exp(1j * np.asarray(t)),
            center=center,
            radius=radius,
        )

    @classmethod
    def ellipse(cls, center=0.0, a=1.0, b=1.0) -> "Contour":
        center = complex(center)
        a, b = float(a), float(b)
        if not (a > 0 and b > 0):
            raise ValueError("ellipse semi-axes must be positive")
        return cls(
            "ellipse",
            lambda t: center + a * np.cos(t) + 1j * b * np.sin(t),
            lambda t: -a * np.sin(t) + 1j * b * np.cos(t),
            center=center,
            semi_axes=(a, b),
        )

    @classmethod
    def custom(cls, phi, dphi, center=0.0) -> "Contour":
        """A user curve; must be positively oriented and 2 pi-periodic."""
        return cls("custom", phi, dphi, center=complex(center))

    @property
    def scale(self) -> float:
        """Characteristic size of the curve (radius or larger semi-axis)."""
        if self.kind == "circle":
            return self.radius
        if self.kind == "ellipse":
            return max(self.semi_axes)
        z = np.asarray(self.phi(np.linspace(0, TWO_PI, 256, endpoint=False)))
        return float(np.max(np.abs(z - self.center)))

    def nodes(self, N: int) -> QuadratureNodes:
        if N < 1:
            raise ValueError(f"node count must be positive, got {N}")
        t = TWO_PI * np.arange(N) / N
        return QuadratureNodes(t, np.asarray(self.phi(t), dtype=complex), np.asarray(self.dphi(t), dtype=complex))

    def distance(self, z, samples: int = 4096) -> float:
        """Distance from z to the curve (exact for circles, sampled and locally refined otherwise)."""
        if self.kind == "circle":
            return abs(abs(z - self.center) - self.radius)
        t = np.linspace(0, TWO_PI, samples, endpoint=False)
        d = np.abs(self.phi(t) - z)
        i = int(np.argmin(d))
        # Gauss-Newton on the foot point, seeded by the nearest sample
        s, best = t[i], d[i]
        for _ in range(20):
            w, dw = self.phi(s) - z, self.dphi(s)
            s = s - np.real(np.conj(w) * dw) / abs(dw) ** 2
            best = min(best, abs(self.phi(s) - z))
        return float(best)

    def winding_number(self, z, n_wind: int = N_WIND, max_nodes: int = 1 << 16) -> int:
        """Trapezoid approximation of (1/2 pi i) \\oint dw / (w - z), rounded.

        The node count doubles from ``n_wind`` until the sum is near an integer.
        """
        n = n_wind
        while True:
            nd = self.nodes(n)
            w = np.sum(nd.dz / (nd.z - z)) / (1j * n)
            k = round(w.real)
            if abs(w - k) < 0.05 or n >= max_nodes:
                return int(k)
            n *= 2

    def contains(self, z, rtol: float = ON_CURVE_RTOL) -> bool:
        """True iff z is strictly inside, points within ``rtol`` of the curve count as outside."""
        z = complex(z)
        if self.kind == "circle":
            return abs(z - self.center) < self.radius * (1.0 - rtol)
        if self.kind == "ellipse":
            a, b = self.semi_axes
            d = z - self.center
            r = np.hypot(d.real / a, d.imag / b)
            return bool(r < 1.0 - rtol)
        if self.distance(z) <= rtol * self.scale:
            return False
        return self.winding_number(z) != 0

    def to_dict(self) -> dict:
        if self.kind == "circle":
            return {"kind": "circle", "center": [self.center.real, self.center.imag], "radius": self.radius}
        if self.kind == "ellipse":
            return {
                "kind": "ellipse",
                "center": [self.center.real, self.center.imag],
                "semi_axes": list(self.semi_axes),
            }
        raise ValueError("custom contours are not serializable")


def nodes(contour: Contour, N: int) -> QuadratureNodes:
    return contour.nodes(N)


def contains(contour: Contour, z) -> bool:
    return contour.contains(z)
