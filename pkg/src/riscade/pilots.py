"""Pilot construction and RIS activation scheduling.

Pilots are scaled unitary DFT matrices, the canonical semi-unitary family:
``X @ X^H == power * I``. Elements are activated in stride-interleaved
subgroups of at most ``min(Nt, Nr)`` members so that every per-block
estimation problem stays full rank; the stride keeps group members
non-adjacent on the surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .channel import RisConfig

SEMI_UNITARY_TOL = 1e-9


@dataclass(frozen=True)
class PilotBlock:
    """Square pilot matrix X (Nt x Nt) with per-symbol average power."""

    X: np.ndarray
    power: float

    @property
    def nt(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True)
class SubgroupPlan:
    """Partition of element indices (0-based) into activation groups."""

    groups: tuple
    subgroup_size: int
    n_elements: int

    @property
    def num_groups(self) -> int:
        return len(self.groups)


def build_pilot(nt: int, power: float = 1.0) -> PilotBlock:
    """Semi-unitary pilot: sqrt(power) times the unitary DFT of size nt."""
    if nt < 1:
        raise ValueError(f"nt must be >= 1, got {nt}")
    if power <= 0:
        raise ValueError(f"power must be positive, got {power}")
    k = np.arange(nt)
    dft = np.exp(-2j * np.pi * np.outer(k, k) / nt) / np.sqrt(nt)
    return PilotBlock(X=np.sqrt(power) * dft, power=float(power))


def check_semi_unitary(pilot: PilotBlock, tol: float = SEMI_UNITARY_TOL) -> None:
    """Raise ValueError unless ``X X^H == power * I`` to relative tolerance."""
    x = pilot.X
    gram = x @ x.conj().T
    target = pilot.power * np.eye(x.shape[0])
    if np.linalg.norm(gram - target) > tol * np.linalg.norm(target):
        raise ValueError("pilot matrix is not semi-unitary for its declared power")


def subgroup_plan(n: int, nt: int, nr: int, subgroup_size: int | None = None) -> SubgroupPlan:
    """Stride-interleaved partition of ``n`` elements.

    Group size defaults to ``min(nt, nr)``, the most elements a single
    pilot block can separate. Group k holds indices k, k + m, k + 2m, ...
    with m the group count, so members of one group are never adjacent
    whenever there is more than one group.
    """
    if n < 1 or nt < 1 or nr < 1:
        raise ValueError(f"dimensions must be >= 1, got n={n} nt={nt} nr={nr}")
    size = min(nt, nr) if subgroup_size is None else subgroup_size
    if size < 1:
        raise ValueError(f"subgroup_size must be >= 1, got {size}")
    num_groups = ceil(n / size)
    groups = tuple(tuple(range(k, n, num_groups)) for k in range(num_groups))
    return SubgroupPlan(groups=groups, subgroup_size=size, n_elements=n)


def ris_schedule(plan: SubgroupPlan, seed=0, random_phases: bool = False):
    """One activation config per group.

    Group members are switched on with phase zero by default; with
    ``random_phases`` the active phases are drawn uniformly from [0, 2pi)
    by a generator seeded with ``seed`` (deterministic per seed).
    """
    rng = np.random.default_rng(seed) if random_phases else None
    configs = []
    for group in plan.groups:
        phases = None
        if random_phases:
            phases = rng.uniform(0.0, 2.0 * np.pi, size=len(group))
        configs.append(RisConfig.for_group(plan.n_elements, group, phases=phases))
    return configs


def lskrf_schedule(n: int, mode: str = "dft"):
    """Time-varying activation schedule for the Khatri-Rao baseline.

    Returns the N x N matrix of per-block reflection coefficients (row t =
    block t) and the matching configs. Two invertible schedules:

    * ``"dft"``        -- all elements on every block, DFT phases across
                          time; every block carries energy from all N
                          elements.
    * ``"sequential"`` -- one element on per block (identity coefficients);
                          each element is observed in exactly one block.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if mode == "dft":
        t = np.arange(n)
        theta = -2.0 * np.pi * np.outer(t, t) / n
        psi = np.exp(1j * theta)
        configs = [RisConfig.all_on(n, phases=theta[row]) for row in range(n)]
    elif mode == "sequential":
        psi = np.eye(n, dtype=np.complex128)
        configs = [RisConfig.for_group(n, [t]) for t in range(n)]
    else:
        raise ValueError(f"unknown schedule mode {mode!r}")
    return psi, configs
