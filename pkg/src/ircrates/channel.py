"""Core data model for the two-user Gaussian interference relay channel.

A channel instance collects the eight complex link gains, the three transmit
powers and the three noise variances of the network

    Y_1 = h11 X_1 + h21 X_2 + hr1 X_r + Z_1
    Y_2 = h22 X_2 + h12 X_1 + hr2 X_r + Z_2
    Y_r = h1r X_1 + h2r X_2 + Z_r

(the relay never hears itself).  Gains produced from geometry are real and
nonnegative (pure path loss), but the type stores complex values so that
hand-specified instances with phases work everywhere: every formula in the
protocol modules only uses Re(.) and |.|.

All rates are in bits per channel use, matching capacity(x) = log2(1 + x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

__all__ = [
    "ChannelInstance",
    "NodeLayout",
    "RatePair",
    "capacity",
    "path_loss_gain",
    "layout_to_channel",
]


def capacity(x):
    """Shannon capacity of a complex AWGN channel at SINR ``x``, in bits.

    Accepts a scalar or a numpy array.  Negative or non-finite input is a
    domain error (an SINR is a ratio of powers).
    """
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise ValueError(f"SINR must be finite and >= 0, got {x!r}")
    out = np.log2(1.0 + x)
    return float(out) if out.ndim == 0 else out


def path_loss_gain(distance: float, d0: float, gamma: float) -> float:
    """Gain magnitude |h| = (d / d0)^(-gamma/2) of a link of length ``distance``."""
    if d0 <= 0:
        raise ValueError(f"reference distance must be positive, got {d0}")
    if distance <= 0:
        raise ValueError(f"link distance must be positive, got {distance}")
    return (distance / d0) ** (-gamma / 2.0)


@dataclass(frozen=True)
class ChannelInstance:
    """One fixed realization of the Gaussian interference relay channel."""

    h11: complex
    h12: complex
    h21: complex
    h22: complex
    h1r: complex
    h2r: complex
    hr1: complex
    hr2: complex
    P1: float
    P2: float
    Pr: float
    N1: float
    N2: float
    Nr: float

    def __post_init__(self):
        for name in ("P1", "P2", "Pr", "N1", "N2", "Nr"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v}")
        for name in ("h11", "h12", "h21", "h22", "h1r", "h2r", "hr1", "hr2"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite, got {v}")

    # -- index-based accessors (user in {1, 2}) --------------------------------

    def P(self, i: int) -> float:
        return (self.P1, self.P2)[_idx(i)]

    def N(self, i: int) -> float:
        return (self.N1, self.N2)[_idx(i)]

    def rho(self, i: int) -> float:
        """Transmit SNR P_i / N_i of user i."""
        return self.P(i) / self.N(i)

    def h_direct(self, i: int) -> complex:
        """Gain of the S_i -> D_i link."""
        return complex((self.h11, self.h22)[_idx(i)])

    def h_cross(self, i: int) -> complex:
        """Gain of the interfering S_j -> D_i link (j = other user)."""
        return complex((self.h21, self.h12)[_idx(i)])

    def h_to_relay(self, i: int) -> complex:
        """Gain of the S_i -> relay link."""
        return complex((self.h1r, self.h2r)[_idx(i)])

    def h_from_relay(self, i: int) -> complex:
        """Gain of the relay -> D_i link."""
        return complex((self.hr1, self.hr2)[_idx(i)])

    def scaled(self, factor: float) -> "ChannelInstance":
        """All powers and noise variances multiplied by ``factor``."""
        return replace(
            self,
            P1=self.P1 * factor, P2=self.P2 * factor, Pr=self.Pr * factor,
            N1=self.N1 * factor, N2=self.N2 * factor, Nr=self.Nr * factor,
        )


def _idx(i: int) -> int:
    if i not in (1, 2):
        raise ValueError(f"user index must be 1 or 2, got {i}")
    return i - 1


def other(i: int) -> int:
    """The other user's index."""
    return 2 if _idx(i) == 0 else 1


@dataclass(frozen=True)
class NodeLayout:
    """Planar positions of the four terminals plus the 3-D relay position.

    The four terminals sit in the z = 0 plane; the relay is lifted to
    z = epsilon so that relay-link distances never vanish when the relay
    passes over a terminal.
    """

    s1: Tuple[float, float]
    s2: Tuple[float, float]
    d1: Tuple[float, float]
    d2: Tuple[float, float]
    relay: Tuple[float, float, float]
    d0: float = 5.0
    gamma: float = 2.0
    epsilon: float = 0.1

    def __post_init__(self):
        if self.d0 <= 0:
            raise ValueError(f"d0 must be > 0, got {self.d0}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if len(self.relay) != 3:
            raise ValueError("relay position must be (x, y, z)")
        if abs(self.relay[2] - self.epsilon) > 1e-12 * max(1.0, self.epsilon):
            raise ValueError(
                f"relay z-coordinate {self.relay[2]} must equal epsilon {self.epsilon}"
            )

    def with_relay_at(self, x: float, y: float) -> "NodeLayout":
        return replace(self, relay=(x, y, self.epsilon))

    def distances(self) -> dict:
        """All eight link distances, keyed like the corresponding gains."""
        s1, s2 = np.asarray(self.s1), np.asarray(self.s2)
        d1, d2 = np.asarray(self.d1), np.asarray(self.d2)
        r = np.asarray(self.relay)

        def planar(a, b):
            return float(np.hypot(*(a - b)))

        def to_relay(a):
            return float(np.sqrt(np.sum((np.append(a, 0.0) - r) ** 2)))

        return {
            "h11": planar(s1, d1), "h12": planar(s1, d2),
            "h21": planar(s2, d1), "h22": planar(s2, d2),
            "h1r": to_relay(s1), "h2r": to_relay(s2),
            "hr1": to_relay(d1), "hr2": to_relay(d2),
        }


def layout_to_channel(
    layout: NodeLayout,
    P1: float, P2: float, Pr: float,
    N1: float, N2: float, Nr: float,
) -> ChannelInstance:
    """Map geometry to a channel instance through the path-loss model.

    Every gain magnitude is (d / d0)^(-gamma/2) for the Euclidean distance of
    its link; relay links pick up the epsilon lift automatically because the
    relay lives off the terminal plane.  Phases are zero under this model.
    """
    gains = {}
    for key, d in layout.distances().items():
        if d <= 0:
            raise ValueError(
                f"link {key} has zero length; separate the nodes or set epsilon > 0"
            )
        gains[key] = complex(path_loss_gain(d, layout.d0, layout.gamma))
    return ChannelInstance(P1=P1, P2=P2, Pr=Pr, N1=N1, N2=N2, Nr=Nr, **gains)


@dataclass(frozen=True)
class RatePair:
    """An achievable (R1, R2) point, in bits per channel use."""

    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError(f"rates must be nonnegative, got {self}")

    @property
    def sum(self) -> float:
        return self.r1 + self.r2
