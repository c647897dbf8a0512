"""Concurrence, mutual information, classical correlation and discord.

Fast paths cover the evolved X family (diagonal (1+c3, 1-c3, 1-c3, 1+c3)/4,
central coherence (c1+c2)/4, corner coherence c0/4); brute-force routes
(spin-flip concurrence, projective-measurement optimization) work on any
two-qubit density matrix and double as oracles for the fast paths.

Entropies are base 2 with 0 log 0 = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    DomainError,
    GridTooCoarse,
    NotXStateError,
    PhysicalityError,
)

__all__ = [
    "CorrelationSample",
    "MeasurementAngles",
    "concurrence_x",
    "concurrence_general",
    "x_eigenvalues",
    "mutual_information_x",
    "classical_correlation_x",
    "classical_correlation_bruteforce",
    "discord",
    "binary_entropy_f",
    "project_to_x",
    "sample_from_state",
    "x_series",
]

X_STRUCTURE_TOL = 1e-12
MARGINAL_TOL = 1e-9
EIG_CLIP = 1e-10

_X_MASK = np.zeros((4, 4), dtype=bool)
for _i, _j in ((0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)):
    _X_MASK[_i, _j] = True


@dataclass(frozen=True)
class MeasurementAngles:
    """Projective-measurement direction (varphi in [0, pi/2], phi in [0, 2pi])."""

    varphi: float
    phi: float


@dataclass(frozen=True)
class CorrelationSample:
    """All correlation quantities at one time point."""

    t: float
    concurrence: float
    discord: float
    mutual_info: float
    classical_corr: float
    abs_c0: float
    gamma: float

    def check(self, tol: float = 1e-12) -> bool:
        return (
            abs(self.discord - (self.mutual_info - self.classical_corr)) <= tol
            and self.discord >= -1e-9
            and 0.0 <= self.concurrence <= 1.0 + 1e-12
        )


def _entropy_terms(lams) -> float:
    out = 0.0
    for lam in np.atleast_1d(lams):
        if lam < -EIG_CLIP:
            raise PhysicalityError(f"eigenvalue {lam} below clip floor")
        lam = min(max(lam, 0.0), 1.0)
        if lam > 0.0:
            out += lam * np.log2(lam)
    return out


def _require_x(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise NotXStateError(f"shape {rho.shape} is not 4x4")
    worst = float(np.max(np.abs(rho[_X_MASK])))
    if worst > X_STRUCTURE_TOL:
        raise NotXStateError(f"non-X entries up to {worst:.3e}")
    return rho


def _x_coefficients(rho: np.ndarray) -> tuple[float, float, float]:
    """(c3, |c1+c2|, |c0|) of an evolved X state with mixed marginals."""
    rho = _require_x(rho)
    d11, d22, d33, d44 = (rho[i, i].real for i in range(4))
    if abs(d11 - d44) > MARGINAL_TOL or abs(d22 - d33) > MARGINAL_TOL:
        raise NotXStateError(
            "diagonal not of the maximally-mixed-marginal form "
            f"(|rho11-rho44|={abs(d11 - d44):.2e})"
        )
    c3 = float((d11 + d44) - (d22 + d33))
    return c3, float(4 * abs(rho[1, 2])), float(4 * abs(rho[0, 3]))


def concurrence_x(rho: np.ndarray) -> float:
    """Concurrence 2 max{0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44)}.

    Requires X structure (non-X entries below 1e-12).
    """
    rho = _require_x(rho)
    L1 = abs(rho[0, 3]) - np.sqrt(max(rho[1, 1].real, 0.0) * max(rho[2, 2].real, 0.0))
    L2 = abs(rho[1, 2]) - np.sqrt(max(rho[0, 0].real, 0.0) * max(rho[3, 3].real, 0.0))
    return float(2.0 * max(0.0, L1, L2))


_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def _sqrtm_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def concurrence_general(rho: np.ndarray) -> float:
    """Spin-flip concurrence of an arbitrary two-qubit density matrix.

    Computed as max(0, s1 - s2 - s3 - s4) from the singular values of
    sqrt(rho) sqrt(rho_tilde) with rho_tilde = (sy x sy) rho* (sy x sy).
    The singular values equal the square roots of the eigenvalues of
    rho rho_tilde; the singular-value form avoids the precision loss of
    square-rooting near-zero eigenvalues.
    """
    rho = np.asarray(rho, dtype=complex)
    rho = (rho + rho.conj().T) / 2
    tilde = _SYSY @ rho.conj() @ _SYSY
    sv = np.linalg.svd(_sqrtm_psd(rho) @ _sqrtm_psd(tilde), compute_uv=False)
    return float(max(0.0, 2.0 * sv.max() - sv.sum()))


def x_eigenvalues(rho: np.ndarray) -> tuple[float, float, float, float]:
    """Spectrum of an evolved X state from its coefficients.

    (1-c3 +/- |c1+c2|)/4 and (1+c3 +/- |c0|)/4; always sums to 1.
    """
    c3, s, b = _x_coefficients(rho)
    lams = ((1 - c3 + s) / 4, (1 - c3 - s) / 4, (1 + c3 + b) / 4, (1 + c3 - b) / 4)
    for lam in lams:
        if lam < -EIG_CLIP:
            raise PhysicalityError(f"X eigenvalue {lam} negative beyond tolerance")
    return lams


def mutual_information_x(rho: np.ndarray) -> float:
    """Quantum mutual information 2 + sum_i lambda_i log2 lambda_i.

    Both marginals of this family are I/2, hence the constant 2.
    """
    return 2.0 + _entropy_terms(x_eigenvalues(rho))


def binary_entropy_f(Gamma: float) -> float:
    """f(G) = H2((1+G)/2): conditional entropy after a projective measurement."""
    if not -1e-12 <= Gamma <= 1.0 + 1e-12:
        raise DomainError(f"Gamma = {Gamma} outside [0, 1]")
    Gamma = min(max(Gamma, 0.0), 1.0)
    return -_entropy_terms([(1 + Gamma) / 2, (1 - Gamma) / 2])


def classical_correlation_x(rho: np.ndarray) -> tuple[float, float]:
    """Maximal classical correlation of the X family, with its gamma.

    gamma = max(|c3|, (|c1+c2| + |c0|)/2) and the correlation is
    sum_m (1+(-1)^m gamma)/2 log2[1+(-1)^m gamma], i.e. 1 - f(gamma).
    Returns (classical_correlation, gamma).
    """
    c3, s, b = _x_coefficients(rho)
    gamma = max(abs(c3), (s + b) / 2.0)
    cc = 0.0
    for m in (1, 2):
        gm = 1.0 + (-1) ** m * gamma
        if gm > 0.0:
            cc += gm / 2.0 * np.log2(gm)
    return float(cc), float(gamma)


def discord(rho: np.ndarray) -> float:
    """Quantum discord: mutual information minus maximal classical correlation."""
    return mutual_information_x(rho) - classical_correlation_x(rho)[0]


# ---------------------------------------------------------------------------
# Brute-force measurement optimization. The integrand is evaluated from
# explicit projectors and conditional states (mode "general"), or from the
# X-structure expression Gamma(varphi, phi) (mode "x"); the two agree on
# X states and are tested against each other, never merged.
# ---------------------------------------------------------------------------


def _measurement_vectors(varphi, phi):
    varphi = np.atleast_1d(np.asarray(varphi, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    par = np.stack([np.cos(varphi) * np.ones_like(phi),
                    np.exp(1j * phi) * np.sin(varphi)])
    perp = np.stack([np.exp(-1j * phi) * np.sin(varphi),
                     -np.cos(varphi) * np.ones_like(phi)])
    return par, perp


def _avg_conditional_entropy_general(rho4, varphi, phi, measured: str):
    """Sum_k p_k S(conditional state) for projectors along (varphi, phi).

    Vectorized over angle arrays; ``measured`` selects the qubit the
    projector acts on ("B" leaves conditional states on A).
    """
    par, perp = _measurement_vectors(varphi, phi)
    out = np.zeros(par.shape[1])
    for vec in (par, perp):
        if measured == "B":
            sub = np.einsum("bg,ibjc,cg->gij", vec.conj(), rho4, vec)
        else:
            sub = np.einsum("bg,bicj,cg->gij", vec.conj(), rho4, vec)
        p = (sub[:, 0, 0] + sub[:, 1, 1]).real
        det = (sub[:, 0, 0] * sub[:, 1, 1] - sub[:, 0, 1] * sub[:, 1, 0]).real
        disc = np.sqrt(np.clip(p * p - 4.0 * det, 0.0, None))
        lam1 = np.clip((p + disc) / 2.0, 0.0, None)
        lam2 = np.clip((p - disc) / 2.0, 0.0, None)
        safe_p = np.where(p > 1e-15, p, 1.0)
        ent = np.zeros_like(p)
        for lam in (lam1, lam2):
            frac = lam / safe_p
            ent -= np.where(lam > 1e-15, lam * np.log2(np.where(frac > 0, frac, 1.0)), 0.0)
        out += np.where(p > 1e-15, ent, 0.0)
    return out


def _avg_conditional_entropy_x(rho, varphi, phi):
    """X-structure form: both conditional entropies equal f(Gamma)."""
    rho = _require_x(rho)
    c3 = float((rho[0, 0] + rho[3, 3] - rho[1, 1] - rho[2, 2]).real)
    center = 4.0 * complex(rho[1, 2])
    corner = 4.0 * complex(rho[0, 3])
    varphi = np.atleast_1d(np.asarray(varphi, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    eps = center * np.exp(-1j * phi) + corner * np.exp(1j * phi)
    Gamma = np.sqrt(
        c3 * c3 * np.cos(2 * varphi) ** 2
        + np.abs(eps) ** 2 / 4.0 * np.sin(2 * varphi) ** 2
    )
    Gamma = np.clip(Gamma, 0.0, 1.0)
    ent = np.zeros_like(Gamma)
    for sign in (1.0, -1.0):
        q = (1.0 + sign * Gamma) / 2.0
        ent -= np.where(q > 1e-15, q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return ent


def classical_correlation_bruteforce(
    rho: np.ndarray,
    grid_n: int = 64,
    refine_iters: int = 12,
    measured: str = "B",
    mode: str = "general",
) -> tuple[float, MeasurementAngles]:
    """Maximize S(rho_kept) - sum_k p_k S(rho_kept^(k)) over projective angles.

    Coarse grid_n x grid_n scan over (varphi in [0, pi/2], phi in [0, 2pi]),
    then deterministic coordinate descent (bounded scalar minimization,
    xatol 1e-10) from the best cell. Grid ties resolve to the smallest
    (varphi, phi) in lexicographic order.

    mode "general" uses explicit projectors and works for any density
    matrix; mode "x" uses the X-structure integrand and requires it.
    """
    if grid_n < 8:
        raise GridTooCoarse(f"grid_n = {grid_n} < 8")
    if measured not in ("A", "B"):
        raise ValueError("measured must be 'A' or 'B'")
    rho = np.asarray(rho, dtype=complex)
    rho4 = rho.reshape(2, 2, 2, 2)
    kept = np.einsum("ibjb->ij", rho4) if measured == "B" else np.einsum("bibj->ij", rho4)
    S_kept = -_entropy_terms(np.linalg.eigvalsh(kept))

    if mode == "general":
        def cond(varphi, phi):
            return _avg_conditional_entropy_general(rho4, varphi, phi, measured)
    elif mode == "x":
        def cond(varphi, phi):
            return _avg_conditional_entropy_x(rho, varphi, phi)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    vs = np.linspace(0.0, np.pi / 2, grid_n)
    ps = np.linspace(0.0, 2 * np.pi, grid_n)
    VV, PP = np.meshgrid(vs, ps, indexing="ij")
    ce = cond(VV.ravel(), PP.ravel())
    k = int(np.argmin(ce))  # row-major: first hit = smallest (varphi, phi)
    varphi, phi = float(VV.ravel()[k]), float(PP.ravel()[k])
    dv, dp = vs[1] - vs[0], ps[1] - ps[0]
    for _ in range(refine_iters):
        r1 = minimize_scalar(
            lambda x: float(cond(x, phi)[0]),
            bounds=(max(0.0, varphi - dv), min(np.pi / 2, varphi + dv)),
            method="bounded",
            options={"xatol": 1e-10},
        )
        varphi = float(r1.x)
        r2 = minimize_scalar(
            lambda x: float(cond(varphi, x)[0]),
            bounds=(max(0.0, phi - dp), min(2 * np.pi, phi + dp)),
            method="bounded",
            options={"xatol": 1e-10},
        )
        phi = float(r2.x)
    best = S_kept - float(cond(varphi, phi)[0])
    return best, MeasurementAngles(varphi, phi)


# ---------------------------------------------------------------------------
# Pipeline helpers.
# ---------------------------------------------------------------------------


def project_to_x(rho: np.ndarray) -> tuple[np.ndarray, float]:
    """Nearest maximally-mixed-marginal X state, plus the projection defect.

    Averages the two diagonal pairs, keeps the two anti-diagonal
    coherences, zeroes everything else. The defect is the largest
    entrywise change; exact X inputs return defect 0.
    """
    rho = np.asarray(rho, dtype=complex)
    rho = (rho + rho.conj().T) / 2
    out = np.zeros_like(rho)
    out[0, 0] = out[3, 3] = (rho[0, 0].real + rho[3, 3].real) / 2
    out[1, 1] = out[2, 2] = (rho[1, 1].real + rho[2, 2].real) / 2
    out[0, 3] = rho[0, 3]
    out[3, 0] = rho[3, 0]
    out[1, 2] = rho[1, 2]
    out[2, 1] = rho[2, 1]
    tr = np.trace(out).real
    if tr > 0:
        out /= tr
    defect = float(np.max(np.abs(out - rho)))
    return out, defect


def sample_from_state(t: float, rho: np.ndarray) -> tuple[CorrelationSample, float]:
    """CorrelationSample for an arbitrary two-qubit state.

    Concurrence comes from the exact state (X fast path when the
    structure allows, spin-flip otherwise); discord-side quantities come
    from the X projection. Returns (sample, projection defect).
    """
    rho = np.asarray(rho, dtype=complex)
    xrho, defect = project_to_x(rho)
    if defect <= X_STRUCTURE_TOL:
        conc = concurrence_x(xrho)
    else:
        conc = concurrence_general(rho)
    I = mutual_information_x(xrho)
    cc, gamma = classical_correlation_x(xrho)
    sample = CorrelationSample(
        t=float(t),
        concurrence=conc,
        discord=I - cc,
        mutual_info=I,
        classical_corr=cc,
        abs_c0=float(4 * abs(xrho[0, 3])),
        gamma=gamma,
    )
    return sample, defect


def x_series(c3: float, s: float, absc0: np.ndarray):
    """Vectorized correlation curves for an X family with fixed c3, |c1+c2|.

    Parameters
    ----------
    c3 : diagonal coefficient
    s : |c1 + c2|
    absc0 : array of corner magnitudes over time

    Returns a dict with arrays C, D, I, CC, gamma.
    """
    absc0 = np.asarray(absc0, dtype=float)
    L1 = (absc0 - abs(1 - c3)) / 4.0
    L2 = (s - abs(1 + c3)) / 4.0
    C = 2.0 * np.maximum(0.0, np.maximum(L1, L2))
    lam = np.stack(
        [
            np.full_like(absc0, (1 - c3 + s) / 4.0),
            np.full_like(absc0, (1 - c3 - s) / 4.0),
            (1 + c3 + absc0) / 4.0,
            (1 + c3 - absc0) / 4.0,
        ]
    )
    lam = np.clip(lam, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = np.where(lam > 0, lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0)
    I = 2.0 + ent.sum(axis=0)
    gamma = np.maximum(abs(c3), (s + absc0) / 2.0)
    CC = np.zeros_like(gamma)
    for m in (1, 2):
        gm = 1.0 + (-1) ** m * gamma
        CC += np.where(gm > 0, gm / 2.0 * np.log2(np.where(gm > 0, gm, 1.0)), 0.0)
    return {"C": C, "D": I - CC, "I": I, "CC": CC, "gamma": gamma}
