"""Ground-truth channel generation and effective-channel composition.

Each reflecting element behaves like a keyhole: the end-to-end matrix it
contributes is the rank-one outer product of its receive-side vector and its
transmit-side row, rotated by the element's controllable phase. The full
effective channel is the sum of those contributions, ``H @ Theta @ G``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the two cascaded links.

    ``H`` is Nr x N (element i in column i, the receive-side vector h^i);
    ``G`` is N x Nt (element i in row i, the transmit-side row g^i).
    """

    H: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        if self.H.ndim != 2 or self.G.ndim != 2:
            raise ValueError("H and G must be 2-D")
        if self.H.shape[1] != self.G.shape[0]:
            raise ValueError(
                f"element count mismatch: H has {self.H.shape[1]} columns, "
                f"G has {self.G.shape[0]} rows"
            )

    @property
    def nr(self) -> int:
        return self.H.shape[0]

    @property
    def nt(self) -> int:
        return self.G.shape[1]

    @property
    def n_elements(self) -> int:
        return self.H.shape[1]


@dataclass(frozen=True)
class RisConfig:
    """Per-element phase shifts plus an on/off mask (unit element gains).

    Active element i reflects with coefficient ``exp(1j * phases[i])``;
    inactive elements contribute exactly zero.
    """

    phases: np.ndarray
    active: np.ndarray = None

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64)
        active = self.active
        if active is None:
            active = np.ones(phases.shape, dtype=bool)
        active = np.asarray(active, dtype=bool)
        if phases.ndim != 1 or active.shape != phases.shape:
            raise ValueError("phases and active must be 1-D and equal length")
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "active", active)

    @classmethod
    def all_on(cls, n: int, phases=None) -> "RisConfig":
        if phases is None:
            phases = np.zeros(n)
        return cls(phases=np.asarray(phases, dtype=np.float64))

    @classmethod
    def for_group(cls, n: int, indices, phases=None) -> "RisConfig":
        """Config with only ``indices`` active (phases default to zero)."""
        full = np.zeros(n)
        if phases is not None:
            full[np.asarray(indices, dtype=int)] = phases
        mask = np.zeros(n, dtype=bool)
        mask[np.asarray(indices, dtype=int)] = True
        return cls(phases=full, active=mask)

    @property
    def n_elements(self) -> int:
        return self.phases.shape[0]

    @property
    def n_active(self) -> int:
        return int(np.count_nonzero(self.active))

    def active_indices(self) -> np.ndarray:
        return np.flatnonzero(self.active)

    def coefficients(self) -> np.ndarray:
        """Diagonal of the reflection matrix (zeros where inactive)."""
        return np.exp(1j * self.phases) * self.active


def draw_channels(nt: int, nr: int, n: int, seed) -> ChannelRealization:
    """Draw i.i.d. CN(0, 1) links from a seeded generator.

    CN(0, 1) is sampled as ``(x + 1j * y) / sqrt(2)`` with x, y standard
    normal. The same seed always returns the identical realization.
    """
    if nt < 1 or nr < 1 or n < 1:
        raise ValueError(f"dimensions must be >= 1, got nt={nt} nr={nr} n={n}")
    rng = np.random.default_rng(seed)
    H = (rng.standard_normal((nr, n)) + 1j * rng.standard_normal((nr, n))) / np.sqrt(2)
    G = (rng.standard_normal((n, nt)) + 1j * rng.standard_normal((n, nt))) / np.sqrt(2)
    return ChannelRealization(H=H, G=G)


def keyhole_channel(h, g, sigma_scs: float = 1.0) -> np.ndarray:
    """Rank-one channel ``h * sigma_scs * g`` of a single scatterer.

    ``sigma_scs`` in [0, 1] is the scattering cross-section. Entry (r, t)
    equals ``sigma_scs * h[r] * g[t]``.
    """
    if not 0.0 <= sigma_scs <= 1.0:
        raise ValueError(f"sigma_scs must lie in [0, 1], got {sigma_scs}")
    h = np.asarray(h, dtype=np.complex128).reshape(-1)
    g = np.asarray(g, dtype=np.complex128).reshape(-1)
    return sigma_scs * np.outer(h, g)


def effective_channel(realization: ChannelRealization, cfg: RisConfig) -> np.ndarray:
    """End-to-end Nr x Nt matrix ``H @ diag(coefficients) @ G``."""
    if cfg.n_elements != realization.n_elements:
        raise ValueError(
            f"config has {cfg.n_elements} elements, realization has "
            f"{realization.n_elements}"
        )
    coeffs = cfg.coefficients()
    return (realization.H * coeffs[np.newaxis, :]) @ realization.G
