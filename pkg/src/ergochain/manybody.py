"""Exact diagonalization of small critical spin chains and the block
energy decomposition of their ground states.

Two open-boundary models, both in Pauli-matrix units:

* ``ising``        critical transverse-field chain
                   H = -sum_i sz_i sz_{i+1} - gamma * sum_i sx_i
                   (gamma = 1 is the critical point);
* ``heisenberg``   antiferromagnetic exchange chain
                   H = sum_i sigma_i . sigma_{i+1}
                   (two-site singlet at -3).

Basis states are integers whose most significant bit is site 0, so the
left block of ``ell`` sites is the slow index of a ``(2^ell, 2^(N-ell))``
reshape of the wavefunction.  The exchange chain conserves total Sz and is
solved in the half-filling sector.  Hamiltonians are applied matrix-free
with vectorized bit operations; dense matrices are assembled only up to
``DENSE_CUTOFF`` states, beyond which a seeded Lanczos solver takes over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numkern
from .errors import DegeneracyError, InputError, SizeError

ISING = "ising"
HEISENBERG = "heisenberg"

DENSE_CUTOFF = 4096
SUBSYSTEM_MAX_DIM = 16384
INTERACTION_MAX_SITES = 14
SCHMIDT_CUTOFF = 1e-14
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SpinModel:
    """A finite open spin chain: ``kind`` is ``"ising"`` or ``"heisenberg"``.

    ``gamma`` is the transverse field of the ising chain and must stay at
    its default for the exchange chain.  Size caps keep the half-filling
    sector (exchange) and the full space (ising) within exact-diagonalization
    reach: ising 2..20, heisenberg even 2..24.
    """

    kind: str
    n: int
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in (ISING, HEISENBERG):
            raise InputError(f"unknown model kind {self.kind!r}")
        if not isinstance(self.n, int):
            raise InputError(f"chain size must be an integer, got {self.n!r}")
        if self.kind == ISING:
            if not 2 <= self.n <= 20:
                raise InputError(f"ising chain supports 2 <= N <= 20, got {self.n}")
            if not np.isfinite(self.gamma) or self.gamma < 0:
                raise InputError(f"transverse field must be >= 0, got {self.gamma}")
        else:
            if not 2 <= self.n <= 24 or self.n % 2:
                raise InputError(
                    f"exchange chain supports even 2 <= N <= 24, got {self.n}")
            if self.gamma != 1.0:
                raise InputError("the exchange chain takes no transverse field")


@dataclass(frozen=True)
class SectorBasis:
    """Ordered list of basis states; ``n_up`` is None for the full space."""

    n: int
    states: np.ndarray
    n_up: int | None = None

    @property
    def size(self) -> int:
        return self.states.size


@dataclass(frozen=True)
class GroundState:
    energy: float
    gap: float
    vector: np.ndarray = field(repr=False)
    basis: SectorBasis = field(repr=False)


@dataclass(frozen=True)
class SchmidtData:
    """Half-chain Schmidt probabilities (descending, truncated at 1e-14)."""

    probabilities: np.ndarray
    chi: int


@dataclass(frozen=True)
class ManyBodyDecomposition:
    """Ground-state block energy split for the left half chain.

    Mirrors the free-fermion decomposition: ``delta_e`` is defined as
    ``w + q`` (bit-exact identity), ``ent_gap`` is the entanglement-spectrum
    gap ``log(p0/p1)`` (0.0 when chi = 1), and ``e_ab`` is the energy on the
    single bond crossing the cut.
    """

    n: int
    ell: int
    energy: float
    gap: float
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
    chi: int
    e_ab: float


@dataclass(frozen=True)
class InteractionCheck:
    """Bond-energy bookkeeping across half-block passivization.

    ``e_ab``/``e_ab_passive`` are the crossing-bond energies before and
    after the block unitary that maps Schmidt vectors onto ordered
    eigenvectors of the block Hamiltonian; ``w`` is the block ergotropy.
    ``schmidt_degenerate`` flags Schmidt probabilities closer than 1e-12,
    where the passivizing unitary is not unique.
    """

    e_ab: float
    e_ab_passive: float
    w: float
    schmidt_degenerate: bool


def full_basis(n: int) -> SectorBasis:
    """All 2^n states in ascending order."""
    if not 1 <= n <= 24:
        raise InputError(f"full basis supports 1 <= n <= 24, got {n}")
    return SectorBasis(n=n, states=np.arange(2 ** n, dtype=np.int64))


def sz_sector_basis(n: int, n_up: int) -> SectorBasis:
    """States with exactly ``n_up`` raised bits, ascending."""
    if not 1 <= n <= 24:
        raise InputError(f"sector basis supports 1 <= n <= 24, got {n}")
    if not 0 <= n_up <= n:
        raise InputError(f"n_up must lie in [0, {n}], got {n_up}")
    states = np.arange(2 ** n, dtype=np.int64)
    states = states[np.bitwise_count(states) == n_up]
    return SectorBasis(n=n, states=states, n_up=n_up)


def _apply_terms(kind: str, gamma: float, n: int, states: np.ndarray,
                 v: np.ndarray, bonds, fields) -> np.ndarray:
    """Apply selected Hamiltonian terms to ``v`` (1D vector or 2D column
    stack) in the basis ``states`` (ascending).  ``bonds`` are left sites i
    of couplings (i, i+1); ``fields`` are transverse-field sites (ising
    only).  Sector-breaking terms must map within the basis."""
    v = np.asarray(v)
    out = np.zeros(v.shape, dtype=np.result_type(v.dtype, float))
    col = (slice(None),) + (np.newaxis,) * (v.ndim - 1)
    is_full = states.size == (1 << n)  # then position == state, skip the search
    diag = np.zeros(states.size)
    if kind == ISING:
        for i in bonds:
            anti = ((states >> (n - 1 - i)) ^ (states >> (n - 2 - i))) & 1
            diag -= 1.0 - 2.0 * anti
        out += diag[col] * v
        for i in fields:
            flipped = states ^ (np.int64(1) << (n - 1 - i))
            pos = flipped if is_full else np.searchsorted(states, flipped)
            out -= gamma * v[pos]
    else:
        for i in bonds:
            anti = (((states >> (n - 1 - i)) ^ (states >> (n - 2 - i))) & 1).astype(bool)
            diag += np.where(anti, -1.0, 1.0)
            mask = (np.int64(1) << (n - 1 - i)) | (np.int64(1) << (n - 2 - i))
            flipped = states[anti] ^ mask
            pos = flipped if is_full else np.searchsorted(states, flipped)
            out[anti] += 2.0 * v[pos]
        out += diag[col] * v
        if fields:
            raise InputError("the exchange chain has no transverse-field terms")
    return out


def apply_hamiltonian(model: SpinModel, basis: SectorBasis, v: np.ndarray) -> np.ndarray:
    """Matrix-free H v for the full model Hamiltonian in ``basis``."""
    if basis.n != model.n:
        raise InputError(f"basis is for {basis.n} sites, model has {model.n}")
    v = np.asarray(v)
    if v.shape[0] != basis.size:
        raise InputError(
            f"vector length {v.shape[0]} does not match basis size {basis.size}")
    if model.kind == ISING and basis.n_up is not None:
        raise InputError("the ising chain does not conserve Sz; use the full basis")
    bonds = range(model.n - 1)
    fields = range(model.n) if model.kind == ISING else ()
    return _apply_terms(model.kind, model.gamma, model.n, basis.states, v, bonds, fields)


def dense_hamiltonian(model: SpinModel, basis: SectorBasis) -> np.ndarray:
    """Dense Hamiltonian matrix; refuses bases above ``DENSE_CUTOFF``."""
    if basis.size > DENSE_CUTOFF:
        raise SizeError(
            f"dense assembly supports at most {DENSE_CUTOFF} states, got {basis.size}")
    return apply_hamiltonian(model, basis, np.eye(basis.size))


def _ground_basis(model: SpinModel) -> SectorBasis:
    if model.kind == HEISENBERG:
        return sz_sector_basis(model.n, model.n // 2)
    return full_basis(model.n)


def _compiled_applier(model: SpinModel, basis: SectorBasis):
    """Closure computing H v with all index arrays precomputed.

    Equivalent to :func:`apply_hamiltonian` but amortizes the bit fiddling
    and sorted-position lookups across the many products a Lanczos run
    needs.
    """
    states, n = basis.states, model.n
    is_full = states.size == (1 << n)
    diag = np.zeros(states.size)
    if model.kind == ISING:
        for i in range(n - 1):
            anti = ((states >> (n - 1 - i)) ^ (states >> (n - 2 - i))) & 1
            diag -= 1.0 - 2.0 * anti
        perms = []
        for i in range(n):
            flipped = states ^ (np.int64(1) << (n - 1 - i))
            perms.append(flipped if is_full else np.searchsorted(states, flipped))
        gamma = model.gamma

        def apply(v: np.ndarray) -> np.ndarray:
            out = diag * v
            for perm in perms:
                out -= gamma * v[perm]
            return out
    else:
        hops = []
        for i in range(n - 1):
            anti = (((states >> (n - 1 - i)) ^ (states >> (n - 2 - i))) & 1).astype(bool)
            diag += np.where(anti, -1.0, 1.0)
            mask = (np.int64(1) << (n - 1 - i)) | (np.int64(1) << (n - 2 - i))
            flipped = states[anti] ^ mask
            here = np.nonzero(anti)[0]
            there = flipped if is_full else np.searchsorted(states, flipped)
            hops.append((here, there))

        def apply(v: np.ndarray) -> np.ndarray:
            out = diag * v
            for here, there in hops:
                out[here] += 2.0 * v[there]
            return out

    return apply


def _norm_bound(model: SpinModel) -> float:
    if model.kind == ISING:
        return (model.n - 1) + model.gamma * model.n
    return 3.0 * (model.n - 1)


def ground_state(model: SpinModel, seed: int = 42) -> GroundState:
    """Ground energy, gap to the first excited level, and eigenvector.

    Dense diagonalization up to ``DENSE_CUTOFF`` basis states; otherwise a
    seeded Lanczos run for the ground pair and a second, deflated run
    (ground projector shifted above the spectrum) for the gap.  Raises
    DegeneracyError when the gap falls below 1e-10 — e.g. the ising chain
    at gamma = 0 — since the decomposition is then ill-defined.
    """
    basis = _ground_basis(model)
    dim = basis.size
    if dim <= DENSE_CUTOFF:
        vals, vec = numkern.lowest_pair(dense_hamiltonian(model, basis))
        e0, e1 = float(vals[0]), float(vals[1])
    else:
        apply = _compiled_applier(model, basis)
        e0, vec = numkern.lanczos_ground(
            numkern.LinearOperator(dim, apply), seed=seed)
        shift = 2.0 * _norm_bound(model) + 1.0

        def deflated(x, _v0=vec):
            return apply(x) + shift * (_v0 @ x) * _v0

        e1, _ = numkern.lanczos_ground(
            numkern.LinearOperator(dim, deflated), seed=seed + 1)
    gap = e1 - e0
    if not np.isfinite(gap) or gap < DEGENERACY_TOL:
        raise DegeneracyError(
            f"ground state of {model.kind} N={model.n} is degenerate "
            f"(gap {gap:.3e}); block decomposition is ill-defined")
    return GroundState(energy=e0, gap=gap, vector=vec, basis=basis)


def subsystem_spectrum(model: SpinModel, ell: int) -> np.ndarray:
    """Full ascending spectrum (2^ell values) of an isolated ell-site block.

    The block Hamiltonian keeps every term acting inside the first ``ell``
    sites: bonds 0..ell-2 plus, for the ising chain, all ell field terms.
    The exchange block is diagonalized sector by sector.
    """
    if not isinstance(ell, int) or ell < 1:
        raise InputError(f"block size must be a positive integer, got {ell}")
    if ell > model.n // 2 + 2:
        raise InputError(
            f"block size {ell} exceeds half the chain (+2) for N={model.n}")
    if 2 ** ell > SUBSYSTEM_MAX_DIM:
        raise SizeError(
            f"subsystem spectrum supports 2^ell <= {SUBSYSTEM_MAX_DIM}, got ell={ell}")
    bonds = range(ell - 1)
    if model.kind == ISING:
        states = np.arange(2 ** ell, dtype=np.int64)
        h = _apply_terms(ISING, model.gamma, ell, states,
                         np.eye(states.size), bonds, range(ell))
        return np.linalg.eigvalsh(h)
    levels = []
    for n_up in range(ell + 1):
        states = np.arange(2 ** ell, dtype=np.int64)
        states = states[np.bitwise_count(states) == n_up]
        h = _apply_terms(HEISENBERG, 1.0, ell, states,
                         np.eye(states.size), bonds, ())
        levels.append(np.linalg.eigvalsh(h))
    return np.sort(np.concatenate(levels))


def _embedded_state(gs: GroundState) -> np.ndarray:
    psi = np.zeros(2 ** gs.basis.n)
    psi[gs.basis.states] = gs.vector
    return psi


def schmidt_spectrum(model: SpinModel, seed: int = 42) -> SchmidtData:
    """Half-chain Schmidt probabilities of the ground state."""
    if model.n % 2:
        raise InputError(f"half-chain split needs even N, got {model.n}")
    gs = ground_state(model, seed)
    ell = model.n // 2
    p = numkern.schmidt_values(_embedded_state(gs), 2 ** ell,
                               2 ** (model.n - ell), cutoff=SCHMIDT_CUTOFF)
    return SchmidtData(probabilities=p, chi=int(p.size))


def decomposition(model: SpinModel, seed: int = 42) -> ManyBodyDecomposition:
    """Energy decomposition of the left half chain in the ground state.

    The block energy ``e_a`` is the expectation of the block terms; the
    passive energy pairs Schmidt probabilities (descending) with the block
    spectrum (ascending); ``e_a0`` is the lowest block level.  Entropy and
    the entanglement-spectrum gap come from the same Schmidt probabilities.
    """
    if model.n % 2:
        raise InputError(f"half-chain decomposition needs even N, got {model.n}")
    n, ell = model.n, model.n // 2
    gs = ground_state(model, seed)
    p = numkern.schmidt_values(_embedded_state(gs), 2 ** ell, 2 ** (n - ell),
                               cutoff=SCHMIDT_CUTOFF)
    levels = subsystem_spectrum(model, ell)

    block_fields = range(ell) if model.kind == ISING else ()
    hv = _apply_terms(model.kind, model.gamma, n, gs.basis.states, gs.vector,
                      range(ell - 1), block_fields)
    e_a = float(gs.vector @ hv)
    e_tilde = float(p @ levels[: p.size])
    e_a0 = float(levels[0])
    w = e_a - e_tilde
    q = e_tilde - e_a0
    delta = w + q
    if delta > 1e-12:
        w_frac, q_frac = w / delta, q / delta
    else:
        w_frac = q_frac = 0.0

    bond_v = _apply_terms(model.kind, model.gamma, n, gs.basis.states,
                          gs.vector, [ell - 1], ())
    e_ab = float(gs.vector @ bond_v)
    s = float(-np.sum(p * np.log(p)))
    ent_gap = float(np.log(p[0] / p[1])) if p.size > 1 else 0.0
    return ManyBodyDecomposition(
        n=n, ell=ell, energy=gs.energy, gap=gs.gap, e_a=e_a, e_tilde=e_tilde,
        e_a0=e_a0, delta_e=delta, w=w, q=q, w_frac=w_frac, q_frac=q_frac,
        s=s, ent_gap=ent_gap, chi=int(p.size), e_ab=e_ab)


def interaction_check(model: SpinModel, seed: int = 42) -> InteractionCheck:
    """Verify bond-energy bookkeeping under explicit block passivization.

    Builds the block unitary that maps the kept Schmidt vectors of A onto
    the ordered eigenvectors of the block Hamiltonian (B untouched), then
    reports the crossing-bond energy before and after.  The variational
    principle forces ``e_ab_passive - e_ab >= w``; callers/tests assert it.
    Limited to N <= 14 since it works in the full 2^N space.
    """
    if model.n > INTERACTION_MAX_SITES:
        raise SizeError(
            f"interaction check supports N <= {INTERACTION_MAX_SITES}, got {model.n}")
    if model.n % 2:
        raise InputError(f"half-chain split needs even N, got {model.n}")
    n, ell = model.n, model.n // 2
    gs = ground_state(model, seed)
    psi = _embedded_state(gs)
    m = psi.reshape(2 ** ell, 2 ** (n - ell))
    u, sv, vt = np.linalg.svd(m, full_matrices=False)
    keep = sv * sv > SCHMIDT_CUTOFF
    sv, vt = sv[keep], vt[keep]
    p = sv * sv
    degenerate = bool(p.size > 1 and np.any(np.abs(np.diff(p)) < 1e-12))

    block_fields = range(ell) if model.kind == ISING else ()
    states_a = np.arange(2 ** ell, dtype=np.int64)
    h_a = _apply_terms(model.kind, model.gamma, ell, states_a,
                       np.eye(states_a.size), range(ell - 1), block_fields)
    es = numkern.eigh(h_a)
    m_passive = (es.vectors[:, : sv.size] * sv) @ vt

    full = np.arange(2 ** n, dtype=np.int64)
    bond = [ell - 1]

    def bond_energy(state_matrix):
        vec = state_matrix.reshape(-1)
        return float(vec @ _apply_terms(model.kind, model.gamma, n, full,
                                        vec, bond, ()))

    e_a = float(np.sum(m * (h_a @ m)))
    w = e_a - float(p @ es.values[: p.size])
    return InteractionCheck(e_ab=bond_energy(m), e_ab_passive=bond_energy(m_passive),
                            w=w, schmidt_degenerate=degenerate)
