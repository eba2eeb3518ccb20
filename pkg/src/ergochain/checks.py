"""Self-contained invariant suites behind the ``check`` CLI command.

Each suite exercises one slice of the physics and returns pass/fail results
with a short numeric detail (worst margin, max deviation, ...).  Suites are
deterministic given (n_max, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import freefermion as ff
from . import manybody as mb
from . import cftpredict as cp
from .errors import InputError

EVOLUTION_TIMES = 10
TRANSPOSITIONS = 100


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _result(suite, name, passed, detail):
    return CheckResult(suite=suite, name=name, passed=bool(passed), detail=detail)


def _ladder(n_max: int) -> list[int]:
    sizes = list(range(2, min(n_max, 16) + 1, 2))
    n = 32
    while n <= n_max:
        sizes.append(n)
        n *= 2
    return sizes


def suite_freefermion(n_max: int = 128, seed: int = 42) -> list[CheckResult]:
    """Half-chain decomposition invariants over a ladder of chain sizes."""
    out = []
    sizes = _ladder(n_max)
    worst_ord1 = worst_ord2 = worst_w = worst_q = np.inf
    worst_frac = worst_fill = worst_ph = worst_split = 0.0
    identity_ok = antisym_ok = True
    for n in sizes:
        spec = ff.ChainSpec(n)
        energy, c = ff.chain_state(spec)
        dec = ff.block_energies(spec, c)
        sd = dec.spectral
        eps = ff.block_mode_energies(spec.ell)
        worst_ord1 = min(worst_ord1, dec.e_a - dec.e_tilde)
        worst_ord2 = min(worst_ord2, dec.e_tilde - dec.e_a0)
        worst_w = min(worst_w, dec.w)
        worst_q = min(worst_q, dec.q)
        identity_ok &= dec.delta_e == dec.w + dec.q
        if dec.delta_e > 1e-12:
            worst_frac = max(worst_frac, abs(dec.w_frac + dec.q_frac - 1.0))
        worst_fill = max(worst_fill, abs(float(np.sum(sd.occupations)) - spec.ell / 2))
        worst_ph = max(worst_ph, float(
            np.max(np.abs(sd.occupations + sd.occupations[::-1] - 1.0))))
        antisym_ok &= bool(np.all(eps + eps[::-1] == 0.0))
        e_bond = -2.0 * float(c[spec.ell - 1, spec.ell])
        e_right = ff.block_energy_of(c[spec.ell:, spec.ell:])
        worst_split = max(worst_split, abs(dec.e_a + e_right + e_bond - energy))
    out.append(_result("freefermion", "energy-ordering",
                       worst_ord1 >= -1e-10 and worst_ord2 >= -1e-10,
                       f"min margins {worst_ord1:.3e}, {worst_ord2:.3e}"))
    out.append(_result("freefermion", "decomposition-identity", identity_ok,
                       "delta_E == W + Q bit-exact"))
    out.append(_result("freefermion", "positivity",
                       worst_w >= -1e-10 and worst_q >= -1e-10,
                       f"min W {worst_w:.3e}, min Q {worst_q:.3e}"))
    out.append(_result("freefermion", "fraction-identity", worst_frac <= 1e-12,
                       f"max |w_frac+q_frac-1| = {worst_frac:.3e}"))
    out.append(_result("freefermion", "half-filling", worst_fill <= 1e-8,
                       f"max |sum(nu) - ell/2| = {worst_fill:.3e}"))
    out.append(_result("freefermion", "particle-hole",
                       worst_ph <= 1e-8 and antisym_ok,
                       f"max |nu_k + nu_rev - 1| = {worst_ph:.3e}, "
                       f"mode antisymmetry exact: {antisym_ok}"))
    out.append(_result("freefermion", "split-bookkeeping", worst_split <= 1e-9,
                       f"max |E_A + E_B + E_AB - E| = {worst_split:.3e}"))

    # Pairing optimality: random transpositions never lower the passive energy.
    n = sizes[-1]
    spec = ff.ChainSpec(n)
    dec = ff.block_energies(spec, ff.correlation_matrix(spec))
    nu = dec.spectral.occupations.copy()
    eps = ff.block_mode_energies(spec.ell)
    base = float(nu @ eps)
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(TRANSPOSITIONS):
        i, j = rng.integers(0, nu.size, size=2)
        swapped = nu.copy()
        swapped[i], swapped[j] = swapped[j], swapped[i]
        worst = min(worst, float(swapped @ eps) - base)
    out.append(_result("freefermion", "pairing-optimality", worst >= -1e-12,
                       f"N={n}: min energy change over {TRANSPOSITIONS} "
                       f"transpositions = {worst:.3e}"))
    return out


def suite_oracle(n_max: int = 20, seed: int = 42) -> list[CheckResult]:
    """Mode-paired passive energy vs brute-force passivization over all
    2^ell Fock states: the oracle optimizes over more orderings, so it can
    only be lower."""
    del seed  # deterministic sweep
    violations = 0
    max_gap = 0.0
    cases = 0
    for n in range(2, min(n_max, 20) + 1, 2):
        spec_c = ff.correlation_matrix(ff.ChainSpec(n))
        for ell in range(1, min(10, n - 1) + 1):
            sd = ff.block_spectral(spec_c, ell)
            eps = ff.block_mode_energies(ell)
            gauss = float(sd.occupations @ eps)
            oracle = ff.manybody_passive_oracle(sd, eps)
            cases += 1
            if oracle > gauss + 1e-12:
                violations += 1
            max_gap = max(max_gap, gauss - oracle)
    return [_result("oracle", "oracle-bound", violations == 0,
                    f"{cases} cases, violations {violations}, "
                    f"max gap (gauss - oracle) = {max_gap:.3e}")]


def suite_interaction(n_max: int = 12, seed: int = 42) -> list[CheckResult]:
    """Bond-energy inequality across explicit passivization."""
    out = []
    for kind in (mb.ISING, mb.HEISENBERG):
        for n in range(2, min(n_max, mb.INTERACTION_MAX_SITES) + 1, 2):
            chk = mb.interaction_check(mb.SpinModel(kind, n), seed=seed)
            margin = chk.e_ab_passive - chk.e_ab - chk.w
            note = " (degenerate schmidt values)" if chk.schmidt_degenerate else ""
            out.append(_result(
                "interaction", f"{kind}-N{n}",
                margin >= -1e-9 and chk.w >= -1e-10,
                f"E_AB~ - E_AB - W = {margin:.3e}, W = {chk.w:.6g}{note}"))
    return out


def suite_time_evolution(n_max: int = 64, seed: int = 42) -> list[CheckResult]:
    """Unitary block evolution preserves spectrum, block energy and
    ergotropy (free fermions) and Schmidt probabilities (spin chains)."""
    out = []
    rng = np.random.default_rng(seed)

    n = max(4, min(n_max, 64) - (min(n_max, 64) % 2))
    spec = ff.ChainSpec(n)
    c = ff.correlation_matrix(spec)
    block = c[: spec.ell, : spec.ell]
    eps = ff.block_mode_energies(spec.ell)
    nu0 = np.sort(np.linalg.eigvalsh(block))
    e0 = ff.block_energy_of(block)
    w0 = e0 - float(nu0[::-1] @ eps)
    worst_spec = worst_e = worst_w = 0.0
    for t in rng.uniform(0.0, 20.0, size=EVOLUTION_TIMES):
        evolved = ff.evolve_block(block, float(t))
        nut = np.sort(np.linalg.eigvalsh(evolved))
        et = ff.block_energy_of(evolved)
        worst_spec = max(worst_spec, float(np.max(np.abs(nut - nu0))))
        worst_e = max(worst_e, abs(et - e0))
        worst_w = max(worst_w, abs((et - float(nut[::-1] @ eps)) - w0))
    out.append(_result("time-evolution", "freefermion-spectrum", worst_spec <= 1e-10,
                       f"N={n}: max occupation drift {worst_spec:.3e}"))
    out.append(_result("time-evolution", "freefermion-energy", worst_e <= 1e-9,
                       f"max |E_A(t) - E_A| = {worst_e:.3e}"))
    out.append(_result("time-evolution", "freefermion-ergotropy", worst_w <= 1e-9,
                       f"max |W(t) - W| = {worst_w:.3e}"))

    for kind in (mb.ISING, mb.HEISENBERG):
        n = min(8, n_max)
        if n < 4 or n % 2:
            continue
        model = mb.SpinModel(kind, n)
        gs = mb.ground_state(model, seed=seed)
        ell = n // 2
        psi = np.zeros(2 ** n)
        psi[gs.basis.states] = gs.vector
        m = psi.reshape(2 ** ell, 2 ** (n - ell))
        rho = m @ m.T
        states_a = np.arange(2 ** ell, dtype=np.int64)
        h_a = mb._apply_terms(kind, model.gamma, ell, states_a,
                              np.eye(2 ** ell), range(ell - 1),
                              range(ell) if kind == mb.ISING else ())
        lam, vec = np.linalg.eigh(h_a)
        p0 = np.sort(np.linalg.eigvalsh(rho))
        w0 = float(np.sum(rho * h_a)) - float(p0[::-1] @ lam)
        worst_spec = worst_w = 0.0
        for t in rng.uniform(0.0, 20.0, size=5):
            u = (vec * np.exp(-1j * lam * t)) @ vec.T
            rho_t = u @ rho @ u.conj().T
            pt = np.sort(np.linalg.eigvalsh(rho_t))
            et = float(np.real(np.sum(rho_t * h_a)))
            worst_spec = max(worst_spec, float(np.max(np.abs(pt - p0))))
            worst_w = max(worst_w, abs(et - float(pt[::-1] @ lam) - w0))
        out.append(_result("time-evolution", f"{kind}-schmidt", worst_spec <= 1e-10,
                           f"N={n}: max probability drift {worst_spec:.3e}"))
        out.append(_result("time-evolution", f"{kind}-ergotropy", worst_w <= 1e-9,
                           f"max |W(t) - W| = {worst_w:.3e}"))
    return out


def suite_manybody(n_max: int = 10, seed: int = 42) -> list[CheckResult]:
    """Decomposition invariants for both spin chains at small sizes."""
    out = []
    for kind, cap in ((mb.ISING, 10), (mb.HEISENBERG, 8)):
        worst_ord1 = worst_ord2 = worst_w = worst_q = np.inf
        worst_norm = worst_sides = 0.0
        identity_ok = True
        sizes = [n for n in range(2, min(n_max, cap) + 1, 2)]
        for n in sizes:
            model = mb.SpinModel(kind, n)
            dec = mb.decomposition(model, seed=seed)
            worst_ord1 = min(worst_ord1, dec.e_a - dec.e_tilde)
            worst_ord2 = min(worst_ord2, dec.e_tilde - dec.e_a0)
            worst_w = min(worst_w, dec.w)
            worst_q = min(worst_q, dec.q)
            identity_ok &= dec.delta_e == dec.w + dec.q

            gs = mb.ground_state(model, seed=seed)
            ell = n // 2
            psi = np.zeros(2 ** n)
            psi[gs.basis.states] = gs.vector
            m = psi.reshape(2 ** ell, 2 ** (n - ell))
            pa = np.linalg.eigvalsh(m @ m.T)
            pb = np.linalg.eigvalsh(m.T @ m)[-pa.size:]
            worst_norm = max(worst_norm, abs(float(np.sum(pa)) - 1.0))
            sa = float(-np.sum(pa[pa > 1e-14] * np.log(pa[pa > 1e-14])))
            sb = float(-np.sum(pb[pb > 1e-14] * np.log(pb[pb > 1e-14])))
            worst_sides = max(worst_sides, abs(sa - sb))
        label = f"{kind} N in {sizes}"
        out.append(_result("manybody", f"{kind}-ordering",
                           worst_ord1 >= -1e-10 and worst_ord2 >= -1e-10,
                           f"{label}: min margins {worst_ord1:.3e}, {worst_ord2:.3e}"))
        out.append(_result("manybody", f"{kind}-identity",
                           identity_ok and worst_w >= -1e-10 and worst_q >= -1e-10,
                           f"delta_E == W + Q bit-exact; min W {worst_w:.3e}, "
                           f"min Q {worst_q:.3e}"))
        out.append(_result("manybody", f"{kind}-schmidt-normalization",
                           worst_norm <= 1e-10,
                           f"max |sum(p) - 1| = {worst_norm:.3e}"))
        out.append(_result("manybody", f"{kind}-entropy-sides",
                           worst_sides <= 1e-10,
                           f"max |S_A - S_B| = {worst_sides:.3e}"))
    return out


def suite_predict(n_max: int = 4096, seed: int = 42) -> list[CheckResult]:
    """Internal consistency of the closed-form predictors."""
    del seed
    ns = [n for n in (4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096)
          if n <= max(n_max, 4)]
    identity = max(abs(cp.predict_delta_e(n) - cp.predict_w(n) - cp.predict_q(n))
                   for n in ns)
    consistency = max(abs(cp.predict_e_a(n) - cp.predict_e_a0(n) - cp.predict_delta_e(n))
                      for n in ns)
    finite = all(np.isfinite([cp.predict_e0(n), cp.predict_e_a(n), cp.predict_e_tilde(n),
                              cp.predict_entropy(n, n // 2), cp.predict_gap(n)]).all()
                 for n in ns)
    w_pos = all(cp.predict_w(n) > 0 for n in ns if n >= 16)
    product_drift = [abs(cp.gap_entropy_product(cp.predict_gap(n),
                                                cp.predict_entropy(n, n // 2))
                         - cp.GAP_ENTROPY_CONST) for n in ns]
    return [
        _result("predict", "family-identity", identity <= 1e-15,
                f"max |deltaE - W - Q| = {identity:.3e} over {len(ns)} sizes"),
        _result("predict", "expansion-consistency", consistency <= 1e-12,
                f"max |E_A - E_A0 - deltaE| = {consistency:.3e}"),
        _result("predict", "finite-values", finite, f"{len(ns)} sizes"),
        _result("predict", "ergotropy-positive", w_pos, "W(N) > 0 for N >= 16"),
        _result("predict", "gap-entropy-limit",
                product_drift[-1] < product_drift[0],
                f"|beta*S - pi^2/3| shrinks from {product_drift[0]:.3f} "
                f"to {product_drift[-1]:.3f}"),
    ]


SUITES = {
    "freefermion": suite_freefermion,
    "oracle": suite_oracle,
    "interaction": suite_interaction,
    "time-evolution": suite_time_evolution,
    "manybody": suite_manybody,
    "predict": suite_predict,
}


def run_suites(names=None, n_max: int | None = None, seed: int = 42) -> list[CheckResult]:
    """Run the named suites (all by default) with optional size override."""
    if names is None or "all" in names:
        names = list(SUITES)
    results = []
    for name in names:
        if name not in SUITES:
            raise InputError(f"unknown suite {name!r}; choose from "
                             f"{', '.join(sorted(SUITES))} or 'all'")
        fn = SUITES[name]
        results.extend(fn(seed=seed) if n_max is None else fn(n_max=n_max, seed=seed))
    return results
