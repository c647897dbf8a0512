"""Two-qubit X states and coherent-state photon distributions.

Basis order everywhere is (|S>|S>, |S>|T>, |T>|S>, |T>|T>) for the two
qubits; |S> is index 0 of each qubit. All density matrices are plain
4x4 complex numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PhysicalityError, TruncationError

__all__ = [
    "XStateParams",
    "CoherentState",
    "ValidationReport",
    "make_x_state",
    "validate_density",
    "coherent_amplitudes",
    "coherent_state_fixed",
    "x_eigenvalues_t0",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIG_FLOOR = -1e-10


@dataclass(frozen=True)
class XStateParams:
    """Correlation coefficients (c1, c2, c3) of the three-parameter X family.

    The state is (I + sum_i c_i sigma_i x sigma_i)/4, which has maximally
    mixed single-qubit marginals for every admissible triple.
    """

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            v = getattr(self, name)
            if not np.isfinite(v) or abs(v) > 1.0:
                raise PhysicalityError(f"{name} = {v!r} outside [-1, 1]")

    def eigenvalues(self) -> tuple[float, float, float, float]:
        """Spectrum of the t=0 state: (1-c3 +/- |c1+c2|)/4, (1+c3 +/- |c1-c2|)/4."""
        s, d = abs(self.c1 + self.c2), abs(self.c1 - self.c2)
        return (
            (1 - self.c3 + s) / 4,
            (1 - self.c3 - s) / 4,
            (1 + self.c3 + d) / 4,
            (1 + self.c3 - d) / 4,
        )

    def is_physical(self, tol: float = EIG_FLOOR) -> bool:
        return min(self.eigenvalues()) >= tol


@dataclass(frozen=True)
class CoherentState:
    """Truncated coherent state |alpha> with amplitudes a_n up to n_max."""

    alpha: complex
    n_max: int
    amplitudes: np.ndarray = field(repr=False)

    @property
    def tail(self) -> float:
        """Probability weight beyond the truncation, 1 - sum |a_n|^2."""
        return max(0.0, 1.0 - float(np.vdot(self.amplitudes, self.amplitudes).real))

    def photon_probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity_defect <= HERMITICITY_TOL
            and self.trace_defect <= TRACE_TOL
            and self.min_eigenvalue >= EIG_FLOOR
        )


def make_x_state(p: XStateParams) -> np.ndarray:
    """Build the X-state density matrix of the triple (c1, c2, c3).

    Diagonal (1+c3, 1-c3, 1-c3, 1+c3)/4, outer anti-diagonal corners
    (c1-c2)/4, inner anti-diagonal (c1+c2)/4. Raises PhysicalityError
    when the triple has an eigenvalue below the positivity floor.
    """
    if not p.is_physical():
        raise PhysicalityError(
            f"(c1,c2,c3)=({p.c1},{p.c2},{p.c3}) has eigenvalues "
            f"{p.eigenvalues()}; minimum below {EIG_FLOOR}"
        )
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = (1 + p.c3) / 4
    rho[1, 1] = rho[2, 2] = (1 - p.c3) / 4
    rho[0, 3] = rho[3, 0] = (p.c1 - p.c2) / 4
    rho[1, 2] = rho[2, 1] = (p.c1 + p.c2) / 4
    return rho


def validate_density(rho: np.ndarray) -> ValidationReport:
    """Report Hermiticity defect, trace defect and minimum eigenvalue.

    Report-style: never raises; check ``.ok`` for the combined verdict.
    """
    rho = np.asarray(rho)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho) - 1.0))
    # eigvalsh needs an exactly Hermitian input; symmetrize first
    sym = (rho + rho.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    return ValidationReport(herm, trace, min_eig)


def coherent_amplitudes(
    alpha: complex, tail_tol: float = 1e-12, n_cap: int = 512
) -> CoherentState:
    """Truncated coherent-state amplitudes a_n = e^{-|a|^2/2} a^n / sqrt(n!).

    Uses the multiplicative recurrence a_{n+1} = a_n alpha / sqrt(n+1)
    (factorials overflow near n = 170) and picks the smallest n_max whose
    truncation tail 1 - sum |a_n|^2 is at most ``tail_tol``.

    Raises
    ------
    TruncationError
        If the tail bound is not reachable within ``n_cap`` levels.
    """
    if tail_tol <= 0:
        raise ValueError("tail_tol must be positive")
    alpha = complex(alpha)
    amps = [np.exp(-abs(alpha) ** 2 / 2)]
    acc = abs(amps[0]) ** 2
    n = 0
    while 1.0 - acc > tail_tol:
        if n >= n_cap:
            raise TruncationError(
                f"coherent tail still {1.0 - acc:.3e} at n_max = {n_cap}"
            )
        amps.append(amps[-1] * alpha / np.sqrt(n + 1))
        acc += abs(amps[-1]) ** 2
        n += 1
    return CoherentState(alpha, n, np.asarray(amps, dtype=complex))


def coherent_state_fixed(alpha: complex, n_max: int) -> CoherentState:
    """Coherent-state amplitudes truncated at a caller-chosen n_max.

    No tail requirement is enforced here; consumers that need a bounded
    tail (the evolution engines) check it themselves.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    alpha = complex(alpha)
    amps = np.empty(n_max + 1, dtype=complex)
    amps[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(n_max):
        amps[n + 1] = amps[n] * alpha / np.sqrt(n + 1)
    return CoherentState(alpha, n_max, amps)


def x_eigenvalues_t0(p: XStateParams) -> tuple[float, float, float, float]:
    return p.eigenvalues()
