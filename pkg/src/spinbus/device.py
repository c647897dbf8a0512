"""Device-level parameter calculator for the resonator-bus coupling scheme.

Maps transmission-line geometry (length, inductance per unit length,
dot separation, resonator frequency) to the zero-point current scale,
the qubit-resonator coupling g, and the asymmetric compensation field
that switches a qubit off the bus. Purely algebraic and SI throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import ModelParams, chi
from .errors import InvalidGeometryError

__all__ = [
    "HBAR",
    "MU_B",
    "MU_0",
    "DeviceGeometry",
    "RegimeReport",
    "current_amplitude",
    "coupling_g",
    "switch_field",
    "regime_check",
    "DEFAULT_GEOMETRY",
]

# CODATA 2018
HBAR = 1.054571817e-34   # J s
MU_B = 9.2740100783e-24  # J/T
MU_0 = 1.25663706212e-6  # N/A^2

DISPERSIVE_MIN = 5.0
RWA_MIN = 10.0


@dataclass(frozen=True)
class DeviceGeometry:
    """Resonator and dot geometry, SI units.

    r: dot separation within a double dot (m); L: resonator length (m);
    l: inductance per unit length (H/m); omega_r: resonator angular
    frequency (rad/s); delta_BN_z: nuclear-field gradient (T); dB_z:
    applied asymmetric-field difference (T). The per-qubit current sign
    (-1)^(j-1) is not geometry and lives with the dynamics.
    """

    r: float
    L: float
    l: float
    omega_r: float
    delta_BN_z: float = 0.0
    dB_z: float = 0.0
    g_B: float = 2.0
    hbar: float = HBAR
    mu_B: float = MU_B
    mu_0: float = MU_0

    def __post_init__(self):
        for name in ("r", "L", "l", "omega_r"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvalidGeometryError(f"{name} must be positive, got {v!r}")


# documentation defaults; not measured values
DEFAULT_GEOMETRY = DeviceGeometry(r=1e-7, L=0.01, l=4e-7, omega_r=2 * math.pi * 6e9)


def current_amplitude(geo: DeviceGeometry) -> float:
    """Zero-point current scale sqrt(hbar omega_r / (L l)) in ampere."""
    return math.sqrt(geo.hbar * geo.omega_r / (geo.L * geo.l))


def coupling_g(geo: DeviceGeometry) -> float:
    """Qubit-resonator coupling g_B mu_B mu_0 / (8 hbar pi r) * I_amp, rad/s."""
    return geo.g_B * geo.mu_B * geo.mu_0 / (8.0 * geo.hbar * math.pi * geo.r) * current_amplitude(geo)


def switch_field(geo: DeviceGeometry, I: float) -> float:
    """Compensation field -(dBN_z + mu_0 I / (4 pi r)).

    Adding this asymmetric-field difference makes the total gradient at
    the double dot vanish, turning the qubit-resonator coupling off.
    """
    return -(geo.delta_BN_z + geo.mu_0 * I / (4.0 * math.pi * geo.r))


@dataclass(frozen=True)
class RegimeReport:
    dispersive_ratios: tuple[float, float]
    rwa_ratios: tuple[float, float]
    dispersive_ok: bool
    rwa_ok: bool
    chi: float


def regime_check(
    mp: ModelParams,
    dispersive_min: float = DISPERSIVE_MIN,
    rwa_min: float = RWA_MIN,
) -> RegimeReport:
    """Validity ratios |delta_j|/g and (omega_j + omega_r)/|delta_j|.

    The dispersive flag requires both detuning ratios to reach
    dispersive_min; the rotating-wave flag requires both frequency-sum
    ratios to reach rwa_min. g = 0 (coupling switched off) passes with
    infinite ratio.
    """
    disp = []
    rwa = []
    for om, d in ((mp.omega1, mp.delta1), (mp.omega2, mp.delta2)):
        disp.append(abs(d) / abs(mp.g) if mp.g != 0 else math.inf)
        rwa.append((om + mp.omega_r) / abs(d) if d != 0 else math.inf)
    return RegimeReport(
        dispersive_ratios=(disp[0], disp[1]),
        rwa_ratios=(rwa[0], rwa[1]),
        dispersive_ok=min(disp) >= dispersive_min,
        rwa_ok=min(rwa) >= rwa_min,
        chi=chi(mp.g, mp.delta1, mp.delta2),
    )
