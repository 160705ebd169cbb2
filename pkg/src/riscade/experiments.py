"""Seeded Monte Carlo sweeps over SNR, dimensions, and estimator.

Every trial is a pure function of a seed derived from
``(master_seed, snr value, estimator, trial index)``, so single trials can
be reproduced in isolation, records do not depend on the position of an SNR
in the sweep list, and aggregation in ascending trial order keeps aggregate
results bit-stable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import estimators as est
from .channel import RisConfig, draw_channels, effective_channel
from .metrics import aligned_nmse_columns, aligned_nmse_rows, nmse
from .pilots import build_pilot, lskrf_schedule, ris_schedule, subgroup_plan

ESTIMATORS = ("proposed", "enhanced", "lskrf", "effective_ls")


@dataclass(frozen=True)
class ExperimentConfig:
    nt: int
    nr: int
    n: int
    snr_db_list: tuple
    trials: int = 1000
    estimators: tuple = ("proposed",)
    master_seed: int = 0
    pilot_power: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "snr_db_list", tuple(float(s) for s in self.snr_db_list))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if self.nt < 1 or self.nr < 1 or self.n < 1:
            raise ValueError("dimensions must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.snr_db_list:
            raise ValueError("snr_db_list must not be empty")
        if not self.estimators:
            raise ValueError("estimator list must not be empty")
        for name in self.estimators:
            if name not in ESTIMATORS:
                raise ValueError(f"unknown estimator {name!r}; expected one of {ESTIMATORS}")
        if self.pilot_power <= 0:
            raise ValueError("pilot_power must be positive")


@dataclass(frozen=True)
class ExperimentRecord:
    """Aggregate of one (SNR, estimator) cell of the sweep."""

    nt: int
    nr: int
    n: int
    snr_db: float
    estimator: str
    trials: int
    slots: int
    nmse_total: float | None
    nmse_h_aligned: float | None
    nmse_g_aligned: float | None
    wall_s: float
    infeasible: bool = False


def trial_seed(master_seed: int, snr_db: float, estimator: str, trial: int) -> np.random.SeedSequence:
    """Deterministic per-trial seed; depends on the SNR value, not its position."""
    snr_bits = int(np.float64(snr_db).view(np.uint64))
    return np.random.SeedSequence(
        [int(master_seed), snr_bits, ESTIMATORS.index(estimator), int(trial)]
    )


def run_trial(nt, nr, n, estimator, snr_db, pilot_power, master_seed, trial):
    """One independent channel + noise realization, fully estimated.

    Returns ``(nmse_total, nmse_h, nmse_g, slots)``; the aligned link NMSEs
    are None for the estimator that never separates the links.
    """
    seed = trial_seed(master_seed, snr_db, estimator, trial)
    channel_seed, noise_seed = seed.spawn(2)
    noise_rng = np.random.default_rng(noise_seed)
    sigma2 = pilot_power / 10.0 ** (snr_db / 10.0)

    realization = draw_channels(nt, nr, n, channel_seed)
    pilot = build_pilot(nt, pilot_power)
    truth_cfg = RisConfig.all_on(n)
    h_t_true = effective_channel(realization, truth_cfg)

    if estimator == "effective_ls":
        obs = est.simulate_rx(h_t_true, pilot, sigma2, noise_rng)
        h_t_hat = est.estimate_effective_ls(obs, pilot)
        return nmse(h_t_hat, h_t_true), None, None, pilot.nt

    if estimator == "lskrf":
        # one block per element: Nt * N slots
        psi, configs = lskrf_schedule(n, mode="sequential")
        observations = [
            est.simulate_rx(effective_channel(realization, cfg), pilot, sigma2, noise_rng)
            for cfg in configs
        ]
        result = est.lskrf_baseline(observations, pilot, psi)
    else:
        plan = subgroup_plan(n, nt, nr)
        configs = ris_schedule(plan)
        group_data = [
            (est.simulate_rx(effective_channel(realization, cfg), pilot, sigma2, noise_rng), cfg)
            for cfg in configs
        ]
        if estimator == "proposed":
            result = est.estimate_separate(group_data, pilot, plan)
        else:
            obs_all = est.simulate_rx(h_t_true, pilot, sigma2, noise_rng)
            result = est.estimate_enhanced(group_data, (obs_all, truth_cfg), pilot, plan)

    return (
        nmse(result.H_T_hat, h_t_true),
        aligned_nmse_columns(result.H_hat, realization.H),
        aligned_nmse_rows(result.G_hat, realization.G),
        result.slots_used,
    )


def run_sweep(cfg: ExperimentConfig):
    """Monte Carlo records for every (SNR, estimator) pair of the config.

    Infeasible combinations produce a record flagged ``infeasible`` instead
    of aborting the remaining cells.
    """
    records = []
    for snr_db in cfg.snr_db_list:
        for estimator in cfg.estimators:
            start = time.perf_counter()
            totals, h_vals, g_vals = [], [], []
            slots = 0
            infeasible = False
            for trial in range(cfg.trials):
                try:
                    total, h_val, g_val, slots = run_trial(
                        cfg.nt, cfg.nr, cfg.n, estimator, snr_db,
                        cfg.pilot_power, cfg.master_seed, trial,
                    )
                except est.FeasibilityError:
                    infeasible = True
                    break
                totals.append(total)
                if h_val is not None:
                    h_vals.append(h_val)
                    g_vals.append(g_val)
            wall = time.perf_counter() - start
            records.append(
                ExperimentRecord(
                    nt=cfg.nt,
                    nr=cfg.nr,
                    n=cfg.n,
                    snr_db=snr_db,
                    estimator=estimator,
                    trials=cfg.trials,
                    slots=slots,
                    nmse_total=None if infeasible else float(np.mean(totals)),
                    nmse_h_aligned=float(np.mean(h_vals)) if h_vals and not infeasible else None,
                    nmse_g_aligned=float(np.mean(g_vals)) if g_vals and not infeasible else None,
                    wall_s=wall,
                    infeasible=infeasible,
                )
            )
    return records
