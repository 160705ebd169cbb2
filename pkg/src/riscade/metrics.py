"""NMSE scoring and pilot-overhead accounting."""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

SCHEMES = ("proposed", "enhanced", "lskrf")


@dataclass(frozen=True)
class OverheadReport:
    scheme: str
    nt: int
    nr: int
    n: int
    slots: int
    reduction_vs_lskrf: float


def _check_pair(a_hat, a):
    a_hat = np.asarray(a_hat, dtype=np.complex128)
    a = np.asarray(a, dtype=np.complex128)
    if a_hat.shape != a.shape:
        raise ValueError(f"shape mismatch: {a_hat.shape} vs {a.shape}")
    ref = np.linalg.norm(a)
    if ref == 0.0:
        raise ValueError("reference matrix is zero; NMSE undefined")
    return a_hat, a, ref


def nmse(a_hat, a) -> float:
    """``||A_hat - A||_F^2 / ||A||_F^2``."""
    a_hat, a, ref = _check_pair(a_hat, a)
    return float(np.linalg.norm(a_hat - a) ** 2 / ref**2)


def nmse_phase_aligned(a_hat, a) -> float:
    """NMSE minimized over a global unit-scalar rotation of the estimate.

    Separated link estimates are only defined up to ``e^{j alpha}`` per
    element, so raw NMSE would penalize an irrelevant phase. The optimal
    rotation has the closed form ``c = e^{j arg<A_hat, A>}`` (Frobenius
    inner product), giving
    ``(||A_hat||^2 + ||A||^2 - 2 |<A_hat, A>|) / ||A||^2``.
    """
    a_hat, a, ref = _check_pair(a_hat, a)
    inner = np.vdot(a_hat, a)
    value = (np.linalg.norm(a_hat) ** 2 + ref**2 - 2.0 * np.abs(inner)) / ref**2
    return float(max(value, 0.0))


def aligned_nmse_columns(a_hat, a) -> float:
    """Mean phase-aligned NMSE over matching columns (one link each)."""
    a_hat = np.asarray(a_hat)
    a = np.asarray(a)
    if a_hat.shape != a.shape:
        raise ValueError(f"shape mismatch: {a_hat.shape} vs {a.shape}")
    return float(
        np.mean([nmse_phase_aligned(a_hat[:, i], a[:, i]) for i in range(a.shape[1])])
    )


def aligned_nmse_rows(a_hat, a) -> float:
    """Mean phase-aligned NMSE over matching rows."""
    a_hat = np.asarray(a_hat)
    a = np.asarray(a)
    if a_hat.shape != a.shape:
        raise ValueError(f"shape mismatch: {a_hat.shape} vs {a.shape}")
    return float(
        np.mean([nmse_phase_aligned(a_hat[i, :], a[i, :]) for i in range(a.shape[0])])
    )


def scheme_slots(scheme: str, nt: int, nr: int, n: int) -> int:
    """Training slots each scheme needs for N elements.

    proposed : Nt * ceil(N / min(Nt, Nr))   -- one block per subgroup
    enhanced : Nt * (ceil(N / max(Nt, Nr)) + 1)
    lskrf    : Nt * N                        -- one block per element
    """
    if nt < 1 or nr < 1 or n < 1:
        raise ValueError(f"dimensions must be >= 1, got nt={nt} nr={nr} n={n}")
    if scheme == "proposed":
        return nt * ceil(n / min(nt, nr))
    if scheme == "enhanced":
        return nt * (ceil(n / max(nt, nr)) + 1)
    if scheme == "lskrf":
        return nt * n
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def overhead(scheme: str, nt: int, nr: int, n: int) -> OverheadReport:
    """Slot count and fractional reduction relative to the Khatri-Rao baseline."""
    slots = scheme_slots(scheme, nt, nr, n)
    slots_lskrf = scheme_slots("lskrf", nt, nr, n)
    return OverheadReport(
        scheme=scheme,
        nt=nt,
        nr=nr,
        n=n,
        slots=slots,
        reduction_vs_lskrf=1.0 - slots / slots_lskrf,
    )
