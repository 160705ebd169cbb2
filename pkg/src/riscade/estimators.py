"""Separate estimation of the two cascaded links from pilot observations.

The central routine, :func:`estimate_subgroup`, exploits the fact that with a
semi-unitary pilot the two Gram matrices of the received block,

* ``A = Y Y^H / power``           (receive side, Nr x Nr) and
* ``B = X Y^H Y X^H / power^2``   (transmit side, Nt x Nt),

share the squared singular values of the block's effective channel. The
eigenvectors of ``A`` recover the receive-side factor, those of ``B`` the
transmit-side factor, and the pilot-matched observation ``Y X^H / power``
fixes the relative phase between each eigenvector pair. Dividing out the
known element phases then yields per-element channel estimates up to the
inherent unit-scalar ambiguity. The additive noise terms that survive in the
Gram matrices are not subtracted; they are assumed small next to the signal
part, so eigenvalue estimates are merely clamped at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import RisConfig
from .linalg import hermitian_evd, numerical_rank
from .pilots import PilotBlock, SubgroupPlan, check_semi_unitary

EIGENVALUE_TIE_RTOL = 1e-8


class FeasibilityError(ValueError):
    """A subgroup asks for more separated links than one block can resolve."""


@dataclass(frozen=True)
class NoisyObservation:
    """Received pilot block ``Y = H_T X + N`` with its noise variance."""

    Y: np.ndarray
    noise_variance: float

    @property
    def nr(self) -> int:
        return self.Y.shape[0]

    @property
    def nt(self) -> int:
        return self.Y.shape[1]


@dataclass(frozen=True)
class SeparateEstimate:
    """Separated link estimates and the reconstructed effective channel.

    ``H_hat`` is Nr x N, ``G_hat`` is N x Nt; column/row i estimate element
    i's links up to a unit scalar each. ``per_group_eigenvalues`` holds the
    descending singular-value estimates per activation group. ``degraded``
    marks results that needed a rank-deficient pseudo-inverse fallback.
    """

    H_hat: np.ndarray
    G_hat: np.ndarray
    H_T_hat: np.ndarray
    per_group_eigenvalues: list = field(default_factory=list)
    slots_used: int = 0
    degraded: bool = False


def simulate_rx(h_t, pilot: PilotBlock, sigma2: float, seed=None) -> NoisyObservation:
    """Received block ``Y = H_T X + N`` with N i.i.d. CN(0, sigma2).

    ``sigma2 == 0`` returns the noise-free product exactly (no RNG draw).
    """
    h_t = np.asarray(h_t, dtype=np.complex128)
    if h_t.ndim != 2 or h_t.shape[1] != pilot.nt:
        raise ValueError(
            f"channel shape {h_t.shape} incompatible with pilot size {pilot.nt}"
        )
    if sigma2 < 0:
        raise ValueError(f"noise variance must be >= 0, got {sigma2}")
    y = h_t @ pilot.X
    if sigma2 > 0:
        rng = np.random.default_rng(seed)
        noise = rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape)
        y = y + np.sqrt(sigma2 / 2.0) * noise
    return NoisyObservation(Y=y, noise_variance=float(sigma2))


def _pair_eigenvectors(eig_a, u, eig_b, v, z, k):
    """Match the top-k eigenvectors of the two Gram matrices.

    Default pairing is by descending-eigenvalue rank. If either spectrum has
    a near-tie among the leading eigenvalues, rank order is ambiguous, so the
    pairing falls back to a greedy assignment maximizing ``|u^H Z v|``.
    Returns (u_k, v_k, eigenvalues_k) with columns already matched.
    """
    u_k = u[:, :k]
    eig_k = eig_a[:k]

    def has_tie(eig):
        top = eig[: min(k + 1, len(eig))]
        scale = max(abs(top[0]), 1e-300)
        return np.any(np.abs(np.diff(top)) <= EIGENVALUE_TIE_RTOL * scale)

    if not (has_tie(eig_a) or has_tie(eig_b)):
        return u_k, v[:, :k], eig_k

    scores = np.abs(u_k.conj().T @ z @ v[:, :k])  # k x k
    order = np.full(k, -1, dtype=int)
    free_rows = set(range(k))
    free_cols = set(range(k))
    for _ in range(k):
        best = max(
            ((scores[r, c], -r, -c, r, c) for r in free_rows for c in free_cols)
        )
        _, _, _, r, c = best
        order[r] = c
        free_rows.remove(r)
        free_cols.remove(c)
    return u_k, v[:, order], eig_k


def estimate_subgroup(obs: NoisyObservation, pilot: PilotBlock, cfg: RisConfig):
    """Separate the links of one activated subgroup from one pilot block.

    Returns ``(H_part, G_part, eigenvalues)`` where ``H_part`` is Nr x k,
    ``G_part`` is k x Nt and ``eigenvalues`` are the k descending
    singular-value estimates; ``H_part[:, m] * e^{j theta_m} @ G_part[m, :]``
    summed over m reconstructs the subgroup's effective channel.
    """
    k = cfg.n_active
    nr, nt = obs.Y.shape
    if nt != pilot.nt:
        raise ValueError(f"observation has {nt} columns, pilot is {pilot.nt} wide")
    if k > min(nt, nr):
        raise FeasibilityError(
            f"subgroup of {k} active elements exceeds min(Nt, Nr) = "
            f"{min(nt, nr)}; one block cannot separate more links than that"
        )
    check_semi_unitary(pilot)

    y = obs.Y
    p = pilot.power
    a = y @ y.conj().T / p
    b = pilot.X @ y.conj().T @ y @ pilot.X.conj().T / p**2
    evd_a = hermitian_evd(a)
    evd_b = hermitian_evd(b)
    z = y @ pilot.X.conj().T / p

    u_k, v_k, eig_k = _pair_eigenvectors(
        evd_a.eigenvalues, evd_a.eigenvectors,
        evd_b.eigenvalues, evd_b.eigenvectors,
        z, k,
    )

    # Each eigenvector is only defined up to a unit scalar; project through
    # the pilot-matched observation to recover the relative phase per pair.
    psi = np.angle(np.einsum("im,ij,jm->m", u_k.conj(), z, v_k))
    v_k = v_k * np.exp(-1j * psi)[np.newaxis, :]

    lambdas = np.sqrt(np.clip(eig_k, 0.0, None))
    theta = cfg.phases[cfg.active_indices()]
    h_part = u_k * (lambdas * np.exp(-1j * theta))[np.newaxis, :]
    g_part = v_k.conj().T
    return h_part, g_part, lambdas


def estimate_separate(group_data, pilot: PilotBlock, plan: SubgroupPlan) -> SeparateEstimate:
    """Run the subgroup estimator over a full activation schedule.

    ``group_data`` is one ``(NoisyObservation, RisConfig)`` pair per plan
    group, in plan order. Scatters the per-group factors into the global
    ``H_hat`` / ``G_hat`` and accumulates the reconstructed effective
    channel group by group.
    """
    if len(group_data) != plan.num_groups:
        raise ValueError(
            f"need {plan.num_groups} group observations, got {len(group_data)}"
        )
    n = plan.n_elements
    nr = group_data[0][0].nr
    nt = pilot.nt
    h_hat = np.zeros((nr, n), dtype=np.complex128)
    g_hat = np.zeros((n, nt), dtype=np.complex128)
    h_t_hat = np.zeros((nr, nt), dtype=np.complex128)
    eigenvalues = []
    for group, (obs, cfg) in zip(plan.groups, group_data):
        if not np.array_equal(cfg.active_indices(), np.asarray(group)):
            raise ValueError("config active set does not match its plan group")
        h_part, g_part, lam = estimate_subgroup(obs, pilot, cfg)
        idx = np.asarray(group)
        h_hat[:, idx] = h_part
        g_hat[idx, :] = g_part
        coeffs = cfg.coefficients()[idx]
        h_t_hat += (h_part * coeffs[np.newaxis, :]) @ g_part
        eigenvalues.append(lam)
    return SeparateEstimate(
        H_hat=h_hat,
        G_hat=g_hat,
        H_T_hat=h_t_hat,
        per_group_eigenvalues=eigenvalues,
        slots_used=nt * plan.num_groups,
    )


def estimate_effective_ls(obs: NoisyObservation, pilot: PilotBlock) -> np.ndarray:
    """Conventional one-shot estimate ``Y X^H / power`` of the whole channel."""
    if obs.nt != pilot.nt or pilot.X.shape[0] != pilot.X.shape[1]:
        raise ValueError("pilot must be square and match the observation width")
    check_semi_unitary(pilot)
    return obs.Y @ pilot.X.conj().T / pilot.power


def _estimate_h_only(obs: NoisyObservation, pilot: PilotBlock, cfg: RisConfig):
    """Receive-side factor from the ``Y Y^H`` Gram matrix alone."""
    k = cfg.n_active
    nr = obs.nr
    if k > nr:
        raise FeasibilityError(
            f"subgroup of {k} active elements exceeds Nr = {nr}; the "
            f"receive-side Gram matrix yields at most Nr eigenpairs"
        )
    check_semi_unitary(pilot)
    evd = hermitian_evd(obs.Y @ obs.Y.conj().T / pilot.power)
    lambdas = np.sqrt(np.clip(evd.eigenvalues[:k], 0.0, None))
    theta = cfg.phases[cfg.active_indices()]
    h_part = evd.eigenvectors[:, :k] * (lambdas * np.exp(-1j * theta))[np.newaxis, :]
    return h_part, lambdas


def estimate_enhanced(group_data, all_on, pilot: PilotBlock, plan: SubgroupPlan) -> SeparateEstimate:
    """Lower-overhead variant: estimate one side, solve for the other.

    Only the receive-side factor is extracted per subgroup. One extra
    all-elements-on block gives a conventional estimate of the effective
    channel, and the transmit-side factor is solved from
    ``G_hat = Theta^{-1} pinv(H_hat) H_T_hat``. When ``H_hat`` is not full
    column rank (always the case for N > Nr) the solve falls back to a
    tolerance-thresholded pseudo-inverse and the result is marked degraded.
    """
    if len(group_data) != plan.num_groups:
        raise ValueError(
            f"need {plan.num_groups} group observations, got {len(group_data)}"
        )
    obs_all, cfg_all = all_on
    if cfg_all.n_active != cfg_all.n_elements:
        raise ValueError("the extra observation needs every element active")
    n = plan.n_elements
    nr = obs_all.nr
    h_hat = np.zeros((nr, n), dtype=np.complex128)
    eigenvalues = []
    for group, (obs, cfg) in zip(plan.groups, group_data):
        if not np.array_equal(cfg.active_indices(), np.asarray(group)):
            raise ValueError("config active set does not match its plan group")
        h_part, lam = _estimate_h_only(obs, pilot, cfg)
        h_hat[:, np.asarray(group)] = h_part
        eigenvalues.append(lam)

    h_t_hat = estimate_effective_ls(obs_all, pilot)
    degraded = numerical_rank(h_hat) < n
    if degraded:
        g0 = np.linalg.pinv(h_hat) @ h_t_hat
    else:
        gram = h_hat.conj().T @ h_hat
        g0 = np.linalg.solve(gram, h_hat.conj().T @ h_t_hat)
    g_hat = cfg_all.coefficients().conj()[:, np.newaxis] * g0
    return SeparateEstimate(
        H_hat=h_hat,
        G_hat=g_hat,
        H_T_hat=h_t_hat,
        per_group_eigenvalues=eigenvalues,
        slots_used=pilot.nt * (plan.num_groups + 1),
        degraded=degraded,
    )


def lskrf_baseline(observations, pilot: PilotBlock, psi) -> SeparateEstimate:
    """Least-squares Khatri-Rao factorization over a time-varying schedule.

    Block t observes the channel under reflection coefficients ``psi[t]``,
    so the pilot-matched blocks satisfy
    ``vec(Z_t) = sum_i psi[t, i] vec(h^i g^i)``. Solving the linear system
    across all N blocks recovers every per-element dyad, and the dominant
    singular dyad of each unstacked matrix splits it into the two link
    vectors (balanced scaling ``sqrt(sigma_1)`` each).
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 2 or psi.shape[1] != psi.shape[0]:
        raise ValueError(f"schedule matrix must be square, got {psi.shape}")
    n = psi.shape[0]
    if len(observations) != n:
        raise ValueError(f"need {n} observations, got {len(observations)}")
    if numerical_rank(psi) < n:
        raise ValueError("schedule matrix is singular; blocks are not separable")
    check_semi_unitary(pilot)

    nr = observations[0].nr
    nt = pilot.nt
    z_stack = np.empty((nr * nt, n), dtype=np.complex128)
    for t, obs in enumerate(observations):
        z_stack[:, t] = (obs.Y @ pilot.X.conj().T / pilot.power).reshape(-1)

    # z_stack == K @ psi.T with K holding the vectorized dyads as columns.
    dyads = np.linalg.solve(psi, z_stack.T).T

    h_hat = np.empty((nr, n), dtype=np.complex128)
    g_hat = np.empty((n, nt), dtype=np.complex128)
    eigenvalues = []
    for i in range(n):
        d = dyads[:, i].reshape(nr, nt)
        u, s, vh = np.linalg.svd(d, full_matrices=False)
        scale = np.sqrt(s[0])
        h_hat[:, i] = scale * u[:, 0]
        g_hat[i, :] = scale * vh[0, :]
        eigenvalues.append(s[:1].copy())
    return SeparateEstimate(
        H_hat=h_hat,
        G_hat=g_hat,
        H_T_hat=h_hat @ g_hat,
        per_group_eigenvalues=eigenvalues,
        slots_used=nt * n,
    )
