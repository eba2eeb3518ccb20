"""Shared fixtures: session-scoped caches for the expensive diagonalizations.

Free-fermion chains and spin-chain ground states are needed by several test
modules (unit tests, CLI tests, acceptance gate).  Computing each (model, N)
once per session keeps the suite fast without weakening any individual test.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ergochain import freefermion as ff
from ergochain import manybody as mb

# Heavy numerical examples blow through hypothesis' default 200 ms deadline;
# determinism comes from our own seeding, so disable the wall-clock check.
settings.register_profile(
    "ergochain",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ergochain")


class FreeFermionCache:
    """Memoizes chain diagonalizations and block decompositions by (n, ell)."""

    def __init__(self) -> None:
        self._states: dict[int, tuple[float, np.ndarray]] = {}
        self._decs: dict[tuple[int, int], ff.EnergyDecomposition] = {}

    def state(self, n: int) -> tuple[float, np.ndarray]:
        if n not in self._states:
            self._states[n] = ff.chain_state(ff.ChainSpec(n))
        return self._states[n]

    def energy(self, n: int) -> float:
        return self.state(n)[0]

    def matrix(self, n: int) -> np.ndarray:
        return self.state(n)[1]

    def decomposition(self, n: int, ell: int | None = None) -> ff.EnergyDecomposition:
        spec = ff.ChainSpec(n, ell)
        key = (spec.n, spec.ell)
        if key not in self._decs:
            _, c = self.state(spec.n)
            self._decs[key] = ff.block_energies(spec, c)
        return self._decs[key]


class SpinCache:
    """Memoizes many-body decompositions by (kind, n)."""

    def __init__(self) -> None:
        self._decs: dict[tuple[str, int], mb.ManyBodyDecomposition] = {}

    def decomposition(self, kind: str, n: int) -> mb.ManyBodyDecomposition:
        key = (kind, n)
        if key not in self._decs:
            self._decs[key] = mb.decomposition(mb.SpinModel(kind, n))
        return self._decs[key]


@pytest.fixture(scope="session")
def ff_cache() -> FreeFermionCache:
    return FreeFermionCache()


@pytest.fixture(scope="session")
def spin_cache() -> SpinCache:
    return SpinCache()
