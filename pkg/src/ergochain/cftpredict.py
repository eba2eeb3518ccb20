"""Closed-form finite-size predictions for the critical hopping chain.

Casimir-type expansions for the half-filled open chain and its half-chain
block: ground and block energies carry a bulk term ``-c0 (N-1)``, a boundary
term ``-cB``, and a ``1/N`` correction fixed by the central charge ``c`` and
Fermi velocity ``v_F``.  The bound energy inherits an anomalous
``log^2(gamma N)/N`` correction from the entanglement gap, which links it to
the squared block entropy: ``Q * N ~ (6/pi) * S^2``.

All functions take an optional :class:`CftConstants`; the defaults are the
exact lattice values for the homogeneous hopping chain (``c0 = 2/pi``,
``cB = 4/pi - 1``, ``c = 1``, ``v_F = 2``) and the fitted non-universal scale
``log(gamma) = 2.3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError

#: predicted slope of Q*N against S^2
SQ_SLOPE = 6.0 / math.pi
#: predicted gap-entropy product beta * S
GAP_ENTROPY_CONST = math.pi ** 2 / 3.0


@dataclass(frozen=True)
class CftConstants:
    """Expansion constants: bulk c0, boundary cB, central charge c, Fermi
    velocity v_fermi, non-universal gap scale log_gamma and entropy offset
    c_prime."""

    c0: float = 2.0 / math.pi
    cb: float = 4.0 / math.pi - 1.0
    c: float = 1.0
    v_fermi: float = 2.0
    log_gamma: float = 2.3
    c_prime: float = 0.0

    def __post_init__(self):
        for name in ("c0", "cb", "c", "v_fermi"):
            val = getattr(self, name)
            if not math.isfinite(val) or val <= 0:
                raise InputError(f"constant {name} must be positive, got {val}")
        if not math.isfinite(self.log_gamma) or not math.isfinite(self.c_prime):
            raise InputError("log_gamma and c_prime must be finite")


DEFAULT = CftConstants()


def _check_chain(n: int):
    if not isinstance(n, int) or n < 2:
        raise InputError(f"chain size must be an integer >= 2, got {n}")


def _check_block_chain(n: int):
    if not isinstance(n, int) or n < 4 or n % 2:
        raise InputError(f"half-chain predictions need even N >= 4, got {n}")


def _log_sq(n: int, k: CftConstants) -> float:
    return (k.log_gamma + math.log(n)) ** 2


def predict_e0(n: int, k: CftConstants = DEFAULT) -> float:
    """Ground energy of the open chain: bulk + boundary + Casimir term."""
    _check_chain(n)
    return -k.c0 * (n - 1) - k.cb - k.c * math.pi * k.v_fermi / (24.0 * n)


def predict_e_a0(n: int, k: CftConstants = DEFAULT) -> float:
    """Ground energy of the isolated half chain of an N-site system."""
    _check_block_chain(n)
    return -k.c0 * (n / 2.0 - 1.0) - k.cb - k.c * math.pi * k.v_fermi / (12.0 * n)


def predict_e_a(n: int, k: CftConstants = DEFAULT) -> float:
    """Half-block energy inside the chain ground state.

    Half the chain energy minus the central-link correlation: one boundary
    instead of two, plus a shifted 1/N correction.
    """
    _check_block_chain(n)
    return (-k.c0 * (n / 2.0 - 1.0) - k.cb / 2.0
            - (k.c * math.pi * k.v_fermi / 48.0 + 0.5) / n)


def predict_q(n: int, k: CftConstants = DEFAULT) -> float:
    """Bound energy of the half block: log^2(gamma N) / (6 pi N)."""
    _check_block_chain(n)
    return _log_sq(n, k) / (6.0 * math.pi * n)


def predict_e_tilde(n: int, k: CftConstants = DEFAULT) -> float:
    """Passive energy of the half block: isolated ground energy plus Q."""
    return predict_e_a0(n, k) + predict_q(n, k)


def predict_delta_e(n: int, k: CftConstants = DEFAULT) -> float:
    """Excess energy of the half block: cB/2 + (c pi v_F/16 - 1/2)/N."""
    _check_block_chain(n)
    return k.cb / 2.0 + (k.c * math.pi * k.v_fermi / 16.0 - 0.5) / n


def predict_w(n: int, k: CftConstants = DEFAULT) -> float:
    """Ergotropy of the half block: excess minus bound energy."""
    return predict_delta_e(n, k) - predict_q(n, k)


def predict_entropy(n: int, ell: int, k: CftConstants = DEFAULT) -> float:
    """Block entropy (c/6) log((N/pi) sin(pi ell/N)) + c' for an open chain."""
    _check_chain(n)
    if not isinstance(ell, int) or not 1 <= ell <= n - 1:
        raise InputError(f"block size must satisfy 1 <= ell <= N-1, got {ell}")
    return (k.c / 6.0) * math.log((n / math.pi) * math.sin(math.pi * ell / n)) + k.c_prime


def predict_gap(n: int, k: CftConstants = DEFAULT) -> float:
    """Entanglement gap of the half block: 2 pi^2 / log(gamma N)."""
    _check_chain(n)
    denom = k.log_gamma + math.log(n)
    if denom <= 0:
        raise InputError(f"log(gamma N) must be positive, got {denom:.6g}")
    return 2.0 * math.pi ** 2 / denom


def gap_entropy_product(gap: float, entropy: float) -> float:
    """Product beta * S, predicted to approach pi^2/3 for large chains."""
    if not (math.isfinite(gap) and math.isfinite(entropy)):
        raise InputError("gap and entropy must be finite")
    return gap * entropy


def bound_from_entropy(entropy: float, n: int) -> float:
    """Bound energy predicted from the block entropy: Q = 6 S^2 / (pi N)."""
    _check_chain(n)
    if not math.isfinite(entropy) or entropy < 0:
        raise InputError(f"entropy must be non-negative, got {entropy}")
    return SQ_SLOPE * entropy ** 2 / n


def predict_central_link(site: int, n: int, k: CftConstants = DEFAULT) -> float:
    """Nearest-neighbour correlation <c+_site c_site+1> (1-based site).

    Bulk value -c0/2 with a finite-size correction alternating in the site
    index.
    """
    _check_chain(n)
    if not isinstance(site, int) or not 1 <= site <= n - 1:
        raise InputError(f"bond index must satisfy 1 <= site <= N-1, got {site}")
    sign = -1.0 if site % 2 else 1.0
    return (-k.c0 / 2.0 - math.pi / (24.0 * (n + 1) ** 2)
            + sign / (2.0 * (n + 1) * math.sin(math.pi * (site + 0.5) / (n + 1))))
