"""Time evolution of the two-qubit state under three engines.

Engines:

* ``closed``: analytic evolution of the X family. Only the outer corner
  rho_14 moves; its coefficient is
  c0(t) = (c1-c2) e^{2i(omega+g^2/delta)t} exp[-|alpha|^2 (1-e^{4ig^2 t/delta})],
  so |c0| collapses and revives with period T = pi delta / (2 g^2).
* ``effective``: exact eigen-decomposition of the dispersive Hamiltonian on
  qubits (x) Fock space, block diagonal in photon number.
* ``jaynes_cummings``: exact eigen-decomposition of the two-qubit
  Jaynes-Cummings model with alternating coupling signs, block diagonal in
  the conserved total excitation number.

All engines propagate with rho(t) = e^{+iHt} rho e^{-iHt} (the adjoint
ordering; it fixes the sign of the rotating corner phase and is a pure
convention for |c0|, concurrence and discord). hbar = 1 throughout. The
reduced two-qubit state is unchanged by rotating the traced-out resonator
frame, so effective and Jaynes-Cummings outputs are directly comparable.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateError,
    DimensionMismatchError,
    NonIdenticalQubitsError,
    TruncationError,
    ZeroDetuningError,
)
from .qstate import CoherentState, XStateParams, make_x_state

__all__ = [
    "ModelParams",
    "Eigensystem",
    "chi",
    "omega_eff",
    "eigensystem",
    "propagator",
    "kappa_eta",
    "evolve_x_closed",
    "closed_c0",
    "closed_abs_c0",
    "evolve_full",
    "evolve_full_series",
    "partial_trace_resonator",
    "period_closed",
]

ENGINES = ("effective", "jaynes_cummings")
TAIL_BOUND = 1e-12
DISPERSIVE_MIN_RATIO = 5.0


@dataclass(frozen=True)
class ModelParams:
    """Frequencies of the qubit-resonator model, all in units of 1/time.

    delta_j = omega_j - omega_r must be nonzero; below |delta_j| >= 5|g|
    the dispersive treatment is dubious and construction warns.
    """

    omega_r: float
    omega1: float
    omega2: float
    g: float

    def __post_init__(self):
        for j, d in ((1, self.delta1), (2, self.delta2)):
            if d == 0.0:
                raise ZeroDetuningError(f"delta{j} = 0")
        if self.g != 0.0 and not self.dispersive_ok:
            warnings.warn(
                f"|delta|/g ratios {abs(self.delta1) / abs(self.g):.3g}, "
                f"{abs(self.delta2) / abs(self.g):.3g} below "
                f"{DISPERSIVE_MIN_RATIO}; dispersive expressions inaccurate",
                stacklevel=2,
            )

    @property
    def delta1(self) -> float:
        return self.omega1 - self.omega_r

    @property
    def delta2(self) -> float:
        return self.omega2 - self.omega_r

    @property
    def identical(self) -> bool:
        return self.omega1 == self.omega2

    @property
    def dispersive_ok(self) -> bool:
        if self.g == 0.0:
            return True
        r = DISPERSIVE_MIN_RATIO * abs(self.g)
        return abs(self.delta1) >= r and abs(self.delta2) >= r

    @classmethod
    def from_scaled(cls, g: float, delta: float, omega: float | None = None):
        """Identical-qubit scenario from (g, delta) alone, scaled units.

        ``omega`` defaults to 10*delta, comfortably dispersive and far from
        the resonator; the reduced dynamics does not depend on it.
        """
        if omega is None:
            omega = 10.0 * delta
        return cls(omega_r=omega - delta, omega1=omega, omega2=omega, g=g)


def chi(g: float, delta1: float, delta2: float) -> float:
    """Resonator-mediated swap rate g^2 (d1 + d2) / (2 d1 d2)."""
    if delta1 == 0.0 or delta2 == 0.0:
        raise ZeroDetuningError("chi undefined at zero detuning")
    return g * g * (delta1 + delta2) / (2.0 * delta1 * delta2)


def omega_eff(omega: float, g: float, delta: float, n: int) -> float:
    """Stark-shifted half-splitting (omega + 2 g^2/delta (n + 1/2)) / 2.

    This Omega multiplies sigma_z directly (the 1/2 lives inside).
    """
    if delta == 0.0:
        raise ZeroDetuningError("omega_eff undefined at zero detuning")
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    return 0.5 * (omega + 2.0 * g * g / delta * (n + 0.5))


@dataclass(frozen=True)
class Eigensystem:
    """Energies and mixing angle of the dispersive 4x4 block.

    E1 = -E4 = Omega1 + Omega2, E2 = -E3 = sqrt((Omega1-Omega2)^2 + chi^2);
    theta obeys sin(theta) = -chi/E2, cos(theta) = (Omega1-Omega2)/E2.
    """

    E1: float
    E2: float
    E3: float
    E4: float
    theta: float


def eigensystem(Omega1: float, Omega2: float, chi_val: float) -> Eigensystem:
    """Diagonalize the block Hamiltonian given the two Omegas and chi.

    Raises DegenerateError when E2 = 0 (Omega1 = Omega2 and chi = 0): the
    mixing angle is then undefined and the central propagator block is the
    identity limit.
    """
    d = Omega1 - Omega2
    E2 = np.hypot(d, chi_val)
    if E2 == 0.0:
        raise DegenerateError("E2 = 0: mixing angle undefined")
    theta = float(np.arctan2(-chi_val, d))
    E1 = Omega1 + Omega2
    return Eigensystem(E1=E1, E2=float(E2), E3=-float(E2), E4=-E1, theta=theta)


def kappa_eta(es: Eigensystem, t: float) -> tuple[complex, complex]:
    diff = np.exp(-1j * es.E2 * t) - np.exp(-1j * es.E3 * t)
    half = es.theta / 2.0
    return diff * np.sin(half) * np.cos(half), diff * np.sin(half) ** 2


def propagator(es: Eigensystem, t: float) -> np.ndarray:
    """4x4 unitary exp(-iHt) of the block Hamiltonian."""
    kap, eta = kappa_eta(es, t)
    U = np.zeros((4, 4), dtype=complex)
    U[0, 0] = np.exp(-1j * es.E1 * t)
    U[3, 3] = np.exp(-1j * es.E4 * t)
    U[1, 1] = np.exp(-1j * es.E2 * t) - eta
    U[2, 2] = np.exp(-1j * es.E3 * t) + eta
    U[1, 2] = U[2, 1] = kap
    return U


def _require_identical(mp: ModelParams):
    if not (mp.omega1 == mp.omega2 and mp.delta1 == mp.delta2):
        raise NonIdenticalQubitsError(
            "closed-form evolution requires identical qubits"
        )


def closed_c0(p: XStateParams, alpha: complex, mp: ModelParams, t) -> np.ndarray:
    """Corner coefficient c0(t) of the analytically evolved X state."""
    _require_identical(mp)
    t = np.asarray(t, dtype=float)
    g, delta, omega = mp.g, mp.delta1, mp.omega1
    phase = np.exp(2j * (omega + g * g / delta) * t)
    damp = np.exp(-abs(alpha) ** 2 * (1.0 - np.exp(4j * g * g * t / delta)))
    return (p.c1 - p.c2) * phase * damp


def closed_abs_c0(p: XStateParams, alpha: complex, mp: ModelParams, t) -> np.ndarray:
    """|c0(t)| = |c1-c2| exp[-|alpha|^2 (1 - cos(4 g^2 t / delta))]."""
    _require_identical(mp)
    t = np.asarray(t, dtype=float)
    g, delta = mp.g, mp.delta1
    return abs(p.c1 - p.c2) * np.exp(
        -abs(alpha) ** 2 * (1.0 - np.cos(4.0 * g * g * t / delta))
    )


def period_closed(g: float, delta: float) -> float:
    """Collapse-revival period pi*delta/(2 g^2) of |c0|."""
    return np.pi * delta / (2.0 * g * g)


def evolve_x_closed(
    p: XStateParams, alpha: complex, mp: ModelParams, t: float
) -> np.ndarray:
    """Analytic X-family state at time t (identical qubits only).

    Diagonal and central anti-diagonal entries keep their t=0 values;
    only the outer corner carries c0(t)/4.
    """
    rho = make_x_state(p)
    c0 = complex(closed_c0(p, alpha, mp, float(t)))
    rho[0, 3] = c0 / 4.0
    rho[3, 0] = np.conj(c0) / 4.0
    return rho


# ---------------------------------------------------------------------------
# Fock-space engines. Hamiltonians are assembled block by block (photon
# number for the dispersive engine, total excitation number for the JC
# engine), diagonalized exactly, and the initial product state rho0 (x)
# |alpha><alpha| is evolved through its pure-state decomposition.
# ---------------------------------------------------------------------------


def _blocks_effective(mp: ModelParams, n_max: int):
    chi_val = chi(mp.g, mp.delta1, mp.delta2)
    nm = n_max + 1
    for n in range(nm):
        O1 = omega_eff(mp.omega1, mp.g, mp.delta1, n)
        O2 = omega_eff(mp.omega2, mp.g, mp.delta2, n)
        H = np.array(
            [
                [O1 + O2, 0.0, 0.0, 0.0],
                [0.0, O1 - O2, -chi_val, 0.0],
                [0.0, -chi_val, -O1 + O2, 0.0],
                [0.0, 0.0, 0.0, -O1 - O2],
            ]
        )
        idx = np.array([q * nm + n for q in range(4)])
        yield idx, H


def _blocks_jc(mp: ModelParams, n_max: int):
    # conserved N_exc = a^dag a + sum_j |S><S|_j ; qubit-pair excitation
    # counts are SS:2, ST:1, TS:1, TT:0
    nm = n_max + 1
    g1, g2 = mp.g, -mp.g  # alternating signs at the two current antinodes
    half = {0: (mp.omega1 + mp.omega2) / 2, 1: (mp.omega1 - mp.omega2) / 2,
            2: (mp.omega2 - mp.omega1) / 2, 3: -(mp.omega1 + mp.omega2) / 2}
    exc = {0: 2, 1: 1, 2: 1, 3: 0}
    for m in range(n_max + 3):
        members = []
        for q in range(4):
            n = m - exc[q]
            if 0 <= n <= n_max:
                members.append((q, n))
        if not members:
            continue
        k = len(members)
        H = np.zeros((k, k))
        pos = {qn: i for i, qn in enumerate(members)}
        for (q, n), i in pos.items():
            H[i, i] = mp.omega_r * n + half[q]
        # a sigma+^j couples (lower qubit, n) -> (raised qubit, n-1)
        hops = [((2, 0), g1), ((3, 1), g1), ((1, 0), g2), ((3, 2), g2)]
        for (qlo, qhi), gj in hops:
            for (q, n), i in pos.items():
                if q == qlo and (qhi, n - 1) in pos:
                    j = pos[(qhi, n - 1)]
                    H[i, j] += gj * np.sqrt(n)
                    H[j, i] += gj * np.sqrt(n)
        idx = np.array([q * nm + n for q, n in members])
        yield idx, H


def _eig_blockwise(blocks, dim: int) -> tuple[np.ndarray, np.ndarray]:
    w = np.zeros(dim)
    V = np.zeros((dim, dim), dtype=complex)
    col = 0
    for idx, H in blocks:
        ew, ev = np.linalg.eigh(H)
        k = len(idx)
        w[col : col + k] = ew
        V[np.ix_(idx, np.arange(col, col + k))] = ev
        col += k
    if col != dim:
        raise DimensionMismatchError(f"blocks cover {col} of {dim} states")
    return w, V


def partial_trace_resonator(big: np.ndarray) -> np.ndarray:
    """Trace out the resonator: rho_ij = sum_n big[(i,n),(j,n)].

    Input dimension must be 4*(n_max+1) with the qubit-pair index major.
    """
    big = np.asarray(big)
    if big.ndim != 2 or big.shape[0] != big.shape[1] or big.shape[0] % 4:
        raise DimensionMismatchError(f"bad joint-state shape {big.shape}")
    nm = big.shape[0] // 4
    return np.einsum("injn->ij", big.reshape(4, nm, 4, nm))


def evolve_full_series(
    rho0: np.ndarray,
    cs: CoherentState,
    mp: ModelParams,
    times: np.ndarray,
    engine: str = "effective",
) -> np.ndarray:
    """Reduced two-qubit states at all ``times`` (shape (T, 4, 4)).

    Evolves rho0 (x) |alpha><alpha| by exact diagonalization and traces
    out the resonator. The initial state is expanded in its (at most
    four) eigenvectors so the cost is a few matrix-vector products per
    time sample.
    """
    if engine in ("jc", "jaynes-cummings"):
        engine = "jaynes_cummings"
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    if cs.tail > TAIL_BOUND:
        raise TruncationError(
            f"coherent tail {cs.tail:.3e} exceeds {TAIL_BOUND}; raise n_max"
        )
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (4, 4):
        raise DimensionMismatchError(f"initial state shape {rho0.shape}")
    nm = cs.n_max + 1
    dim = 4 * nm
    blocks = (
        _blocks_effective(mp, cs.n_max)
        if engine == "effective"
        else _blocks_jc(mp, cs.n_max)
    )
    w, V = _eig_blockwise(blocks, dim)
    lam, vec = np.linalg.eigh((rho0 + rho0.conj().T) / 2)
    keep = lam > 1e-14
    lam, vec = lam[keep], vec[:, keep]
    times = np.asarray(times, dtype=float)
    phases = np.exp(1j * np.outer(times, w))  # e^{+iHt} convention
    out = np.zeros((len(times), 4, 4), dtype=complex)
    for k in range(vec.shape[1]):
        psi = np.kron(vec[:, k], cs.amplitudes)
        coeff = V.conj().T @ psi
        psit = (phases * coeff) @ V.T
        qblocks = psit.reshape(len(times), 4, nm)
        out += lam[k] * np.einsum("tin,tjn->tij", qblocks, qblocks.conj())
    return out


def evolve_full(
    rho0: np.ndarray,
    cs: CoherentState,
    mp: ModelParams,
    t: float,
    engine: str = "effective",
) -> np.ndarray:
    """Single-time variant of :func:`evolve_full_series`."""
    return evolve_full_series(rho0, cs, mp, np.array([float(t)]), engine)[0]
