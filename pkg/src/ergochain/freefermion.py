"""Block energetics of the critical free-fermion chain.

The chain is the homogeneous open hopping model

    H = -t * sum_{i=1}^{N-1} (c+_i c_{i+1} + c+_{i+1} c_i),

half filled (N even), with block A the first ``ell`` sites.  Everything
reduces to one-body linear algebra:

* chain modes are eigenpairs of the negated hopping matrix, with exact
  single-particle energies ``-2 t cos(k pi / (N+1))``;
* the ground-state correlation matrix is ``C_ij = sum_occ U_ki U_kj`` over
  the N/2 negative modes;
* block occupations are eigenvalues of the leading ``ell x ell`` corner of
  ``C``; they fix the block entropy, the single-body entanglement energies
  ``log((1-nu)/nu)``, and the block's passive (bound) energy.

The passive energy pairs occupations in descending order with block mode
energies in ascending order — the mode-by-mode analogue of reordering a
passive state's populations.  ``manybody_passive_oracle`` cross-checks that
pairing against brute-force passivization over all 2^ell Fock states.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numkern
from .errors import DegeneracyError, InputError, SizeError

OCC_FLOOR = 1e-300
OCC_CEIL = 1.0 - 1e-16
GAP_LEVELS = 8
ORACLE_MAX_SITES = 14


@dataclass(frozen=True)
class ChainSpec:
    """Open homogeneous chain of ``n`` sites with a block of ``ell`` sites.

    ``ell`` defaults to the half chain.  ``n`` must be even (half filling)
    and ``hopping`` positive.
    """

    n: int
    ell: int | None = None
    hopping: float = 1.0

    def __post_init__(self):
        if self.ell is None:
            object.__setattr__(self, "ell", self.n // 2)
        if not isinstance(self.n, int) or self.n < 2 or self.n % 2:
            raise InputError(f"chain size must be an even integer >= 2, got {self.n}")
        if not isinstance(self.ell, int) or not 1 <= self.ell <= self.n - 1:
            raise InputError(f"block size must satisfy 1 <= ell <= n-1, got {self.ell}")
        if not np.isfinite(self.hopping) or self.hopping <= 0:
            raise InputError(f"hopping amplitude must be positive, got {self.hopping}")


@dataclass(frozen=True)
class SpectralData:
    """Single-body entanglement data of one block.

    occupations    eigenvalues of the block correlation matrix, descending,
                   clamped to (0, 1)
    ent_energies   log((1 - nu)/nu), ascending
    entropy        block von Neumann entropy in nats
    gap            least-squares slope of ent_energies vs level index over
                   the min(8, ell) levels nearest zero; 0.0 for ell = 1
    """

    occupations: np.ndarray
    ent_energies: np.ndarray
    entropy: float
    gap: float


@dataclass(frozen=True)
class EnergyDecomposition:
    """Block energy split E_A = E_A0 + W + Q with bookkeeping fields.

    ``delta_e`` is defined as ``w + q`` so the identity holds bit-exactly.
    ``w_frac``/``q_frac`` are fractions of ``delta_e`` (both 0.0 when the
    excess is below 1e-12).  ``zero_modes`` counts block single-particle
    energies within 1e-12 of zero (1 for odd ``ell``).
    """

    n: int
    ell: int
    e_a: float
    e_tilde: float
    e_a0: float
    delta_e: float
    w: float
    q: float
    w_frac: float
    q_frac: float
    s: float
    ent_gap: float
    zero_modes: int
    spectral: SpectralData = field(repr=False)


def hopping_matrix(n: int, amplitude: float = 1.0) -> np.ndarray:
    """Tridiagonal hopping matrix of the open n-site chain."""
    if n < 1:
        raise InputError(f"chain size must be positive, got {n}")
    j = np.zeros((n, n))
    idx = np.arange(n - 1)
    j[idx, idx + 1] = amplitude
    j[idx + 1, idx] = amplitude
    return j


def single_body_modes(spec: ChainSpec) -> numkern.EigenSystem:
    """Eigen-decomposition of -J for the full chain (energies ascending)."""
    return numkern.eigh(-hopping_matrix(spec.n, spec.hopping))


def block_mode_energies(ell: int, amplitude: float = 1.0) -> np.ndarray:
    """Single-particle energies of an isolated ell-site block, ascending.

    Uses the closed form -2 t cos(p pi/(ell+1)), built from the negative
    half and mirrored so the particle-hole antisymmetry
    ``eps[p] == -eps[ell+1-p]`` holds exactly (bitwise), with an exact zero
    mode for odd ``ell``.
    """
    if ell < 1:
        raise InputError(f"block size must be positive, got {ell}")
    p = np.arange(1, ell + 1)
    eps = -2.0 * amplitude * np.cos(p * np.pi / (ell + 1))
    half = ell // 2
    eps[ell - half:] = -eps[:half][::-1]
    if ell % 2:
        eps[half] = 0.0
    return eps


def chain_state(spec: ChainSpec) -> tuple[float, np.ndarray]:
    """Ground energy and correlation matrix from one diagonalization.

    Raises DegeneracyError if a chain mode sits at the Fermi level (within
    1e-12), which would make the half-filled ground state ambiguous; for
    the even-N open chain this cannot happen, so it guards corrupted input.
    """
    es = single_body_modes(spec)
    if float(np.abs(es.values).min()) < 1e-12:
        raise DegeneracyError(
            f"zero-energy chain mode at N={spec.n}: half filling is ambiguous")
    occ = es.vectors[:, : spec.n // 2]
    energy = float(np.sum(es.values[: spec.n // 2]))
    c = occ @ occ.T
    c = 0.5 * (c + c.T)
    return energy, c


def ground_energy(spec: ChainSpec) -> float:
    """Half-filled ground-state energy (sum of negative mode energies)."""
    return chain_state(spec)[0]


def correlation_matrix(spec: ChainSpec) -> np.ndarray:
    """Ground-state two-point function C_ij = <c+_i c_j>, exactly symmetric."""
    return chain_state(spec)[1]


def block_spectral(c: np.ndarray, ell: int) -> SpectralData:
    """Entanglement occupations, energies, entropy and gap of a block.

    ``c`` is the full correlation matrix; the block is its leading
    ``ell x ell`` corner.  Accepts real-symmetric or complex-Hermitian
    input (evolved blocks are complex).  Occupations are clamped into
    (0, 1) before the logarithms so the 0*log(0) limits are handled.
    """
    c = np.asarray(c)
    if not np.issubdtype(c.dtype, np.complexfloating):
        c = c.astype(float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise InputError(f"correlation matrix must be square, got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise InputError("correlation matrix must be finite")
    if not 1 <= ell <= c.shape[0]:
        raise InputError(f"block size must satisfy 1 <= ell <= {c.shape[0]}, got {ell}")
    nu = np.linalg.eigvalsh(c[:ell, :ell])
    if nu.min() < -1e-8 or nu.max() > 1.0 + 1e-8:
        raise InputError("correlation matrix has occupations outside [0, 1]")
    nu = np.clip(nu, OCC_FLOOR, OCC_CEIL)[::-1]  # descending
    ent = np.log((1.0 - nu) / nu)                # ascending
    entropy = float(-np.sum(nu * np.log(nu) + (1.0 - nu) * np.log1p(-nu)))
    return SpectralData(occupations=nu, ent_energies=ent,
                        entropy=entropy, gap=_level_slope(ent))


def _level_slope(ent: np.ndarray) -> float:
    """Slope of the entanglement energies vs level index near zero energy."""
    ell = ent.size
    if ell < 2:
        return 0.0
    m = min(GAP_LEVELS, ell)
    idx = np.sort(np.argsort(np.abs(ent), kind="stable")[:m])
    slope, _ = np.polyfit(idx.astype(float), ent[idx], 1)
    return float(slope)


def block_energies(spec: ChainSpec, c: np.ndarray) -> EnergyDecomposition:
    """Split the block energy into ground, bound and extractable parts.

    * ``e_a``     block energy in the chain ground state,
                  ``-sum_ij J_ij C_ij`` over the block;
    * ``e_tilde`` passive energy: occupations (descending) paired with
                  block mode energies (ascending);
    * ``e_a0``    isolated-block ground energy (negative modes filled);
    * ``w``       ergotropy ``e_a - e_tilde`` (unitarily extractable);
    * ``q``       bound energy ``e_tilde - e_a0`` (held by entanglement).
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (spec.n, spec.n):
        raise InputError(
            f"correlation matrix shape {c.shape} does not match N={spec.n}")
    if abs(float(np.trace(c)) - spec.n / 2) > 1e-9:
        raise InputError("correlation matrix is not half filled")
    sd = block_spectral(c, spec.ell)
    eps = block_mode_energies(spec.ell, spec.hopping)
    zero_modes = int(np.count_nonzero(np.abs(eps) < 1e-12))
    e_a0 = float(np.sum(eps[eps < -1e-12]))
    block = c[: spec.ell, : spec.ell]
    e_a = float(-np.sum(hopping_matrix(spec.ell, spec.hopping) * block))
    e_tilde = float(sd.occupations @ eps)
    w = e_a - e_tilde
    q = e_tilde - e_a0
    delta = w + q
    if delta > 1e-12:
        w_frac, q_frac = w / delta, q / delta
    else:
        w_frac = q_frac = 0.0
    return EnergyDecomposition(
        n=spec.n, ell=spec.ell, e_a=e_a, e_tilde=e_tilde, e_a0=e_a0,
        delta_e=delta, w=w, q=q, w_frac=w_frac, q_frac=q_frac,
        s=sd.entropy, ent_gap=sd.gap, zero_modes=zero_modes, spectral=sd)


def decompose(spec: ChainSpec) -> EnergyDecomposition:
    """Full pipeline: diagonalize the chain, then decompose the block energy."""
    return block_energies(spec, correlation_matrix(spec))


def manybody_passive_oracle(sd: SpectralData, eps: np.ndarray) -> float:
    """Brute-force passive energy over all 2^ell Fock states.

    Builds every product-state probability from the occupations and every
    subset energy from ``eps``, sorts probabilities descending against
    energies ascending, and contracts.  Independent of how the inputs were
    paired.  This optimizes over all permutations of the full spectrum, so
    it is a lower bound on the mode-paired passive energy; the difference
    quantifies what mode-preserving (Gaussian) reordering leaves behind.
    Limited to ``ell <= 14`` (2^ell states).
    """
    eps = np.asarray(eps, dtype=float)
    ell = eps.size
    if ell != sd.occupations.size:
        raise InputError(
            f"mode count mismatch: {sd.occupations.size} occupations, {ell} energies")
    if ell > ORACLE_MAX_SITES:
        raise SizeError(f"oracle supports ell <= {ORACLE_MAX_SITES}, got {ell}")
    probs = np.ones(1)
    energies = np.zeros(1)
    for nu, e in zip(sd.occupations, eps):
        probs = np.concatenate([probs * (1.0 - nu), probs * nu])
        energies = np.concatenate([energies, energies + e])
    return float(np.sort(probs)[::-1] @ np.sort(energies))


def evolve_block(c_block: np.ndarray, t: float, amplitude: float = 1.0) -> np.ndarray:
    """Heisenberg evolution of a block correlation matrix under the block's
    own hopping Hamiltonian: C(t) = U C U+, U = exp(i h t), h = -J_block.

    Unitary by construction, so the occupation spectrum (hence entropy and
    bound energy) is conserved; only the block energy's off-diagonal
    structure moves.  Returns a complex matrix.
    """
    c = np.asarray(c_block)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise InputError(f"block matrix must be square, got {c.shape}")
    if not np.isfinite(t):
        raise InputError(f"time must be finite, got {t}")
    if float(np.abs(c - c.conj().T).max()) > 1e-10:
        raise InputError("block correlation matrix must be Hermitian")
    es = numkern.eigh(-hopping_matrix(c.shape[0], amplitude))
    u = (es.vectors * np.exp(1j * es.values * t)) @ es.vectors.T
    return u @ c @ u.conj().T


def block_energy_of(c_block: np.ndarray, amplitude: float = 1.0) -> float:
    """Block energy -sum_ij J_ij C_ij for a (possibly evolved) block matrix."""
    c = np.asarray(c_block)
    h = -hopping_matrix(c.shape[0], amplitude)
    return float(np.real(np.sum(h * c)))
