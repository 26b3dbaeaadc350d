"""Measurement-angle optimization engine.

The average post-measurement entanglement is maximized over the ``2K`` real
angles of ``K`` independent single-qubit bases.  All restarts of the
derivative-free simplex search run in lockstep as one batched computation:
every simplex operation and every objective evaluation is vectorized over
the restart axis, which is what makes large Monte Carlo sweeps affordable
on a single core.

Objective values avoid per-branch normalization: with unnormalized branch
blocks ``B_k``, the average ``sum_k p_k E(B_k / p_k)`` reduces to

* pure pair branches:   ``2 * sum_k |det B_k|``         (B_k is 2x2),
* pure block branches:  ``2 * sum_k sqrt(det B_k B_k+)``  (Gram is 2x2),
* mixed branches:       ``2 * sum_k |sum of negative eigenvalues of B_k^PT|``,

because eigenvalues and determinants scale homogeneously with ``p_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .states import DensityMatrix, PureState

PAULI_ANGLES = {"z": (0.0, 0.0), "x": (np.pi / 2, 0.0), "y": (np.pi / 2, np.pi / 2)}

# below this, an optimum is reported as exactly 0 (branch states all product)
PRODUCT_FLOOR = 1e-9


@dataclass
class OptimizerConfig:
    """Multi-start search budget.

    ``restarts`` random starts are drawn from a Philox stream keyed by
    ``seed``; the three all-Pauli bases are always prepended as warm starts.
    """

    restarts: int = 24
    max_iterations: int = 400
    tolerance: float = 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 0 or self.max_iterations < 1:
            raise ValueError("restarts must be >= 0 and max_iterations >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    def scaled(self, restart_factor: int) -> "OptimizerConfig":
        return OptimizerConfig(
            restarts=self.restarts * restart_factor,
            max_iterations=self.max_iterations,
            tolerance=self.tolerance,
            seed=self.seed,
        )


def measurement_bases(angles: np.ndarray) -> np.ndarray:
    """Basis matrices for per-qubit angles.

    ``angles[..., 2j]`` is theta and ``angles[..., 2j+1]`` is phi of measured
    qubit j; returns shape ``(..., K, 2, 2)`` with rows indexed by outcome:
    row 0 = ``(cos(t/2), e^{i phi} sin(t/2))``, row 1 orthogonal.
    """
    th = angles[..., 0::2]
    ph = angles[..., 1::2]
    c, s = np.cos(th / 2), np.sin(th / 2)
    e = np.exp(1j * ph)
    U = np.empty(th.shape + (2, 2), dtype=np.complex128)
    U[..., 0, 0] = c
    U[..., 0, 1] = e * s
    U[..., 1, 0] = s
    U[..., 1, 1] = -e * c
    return U


def pauli_angle_vector(axes) -> np.ndarray:
    """Angle vector (theta1, phi1, ...) for a tuple of Pauli axes."""
    out = np.empty(2 * len(axes))
    for j, ax in enumerate(axes):
        out[2 * j], out[2 * j + 1] = PAULI_ANGLES[ax]
    return out


def _kron_rows(U: np.ndarray) -> np.ndarray:
    """Product of per-qubit bras: (..., K, 2, 2) -> (..., 2^K, 2^K)."""
    W = U[..., 0, :, :]
    for j in range(1, U.shape[-3]):
        V = U[..., j, :, :]
        W = np.einsum("...ab,...cd->...acbd", W, V)
        W = W.reshape(W.shape[:-4] + (W.shape[-4] * W.shape[-3], W.shape[-2] * W.shape[-1]))
    return W


def _check_measured(num_qubits: int, measured, keep):
    measured = tuple(sorted(measured))
    if len(set(measured)) != len(measured):
        raise ValueError("measured qubits repeat")
    for q in measured:
        if not 1 <= q <= num_qubits:
            raise ValueError(f"measured qubit {q} out of range 1..{num_qubits}")
    if set(measured) & set(keep):
        raise ValueError("measured set overlaps the kept qubits")
    if set(measured) | set(keep) != set(range(1, num_qubits + 1)):
        raise ValueError("measured and kept qubits must cover the register")
    return measured


class AverageEntanglementObjective:
    """Batched evaluator of the average entanglement after measuring a set.

    ``cut`` selects the entanglement target on the unmeasured qubits:
    ``"pair"`` scores the (hub, partner) two-qubit region, ``"block"``
    scores hub versus all remaining unmeasured qubits.  Instances are
    callable on angle arrays of shape ``(..., 2K)`` and return ``(...,)``.
    """

    def __init__(self, state, measured, hub: int, partner: int | None = None):
        n = state.num_qubits
        self.pure = isinstance(state, PureState)
        self.cut = "pair" if partner is not None else "block"
        if self.cut == "pair":
            keep = (hub, partner)
        else:
            keep = (hub,) + tuple(
                q for q in range(1, n + 1) if q != hub and q not in set(measured)
            )
        measured = _check_measured(n, measured, keep)
        self.num_measured = len(measured)
        self.d_keep = 2 ** len(keep)
        axes = tuple(q - 1 for q in measured)
        kaxes = tuple(q - 1 for q in keep)
        K = len(axes)
        if self.pure:
            t = state.tensor().transpose(axes + kaxes)
            self._psi = np.ascontiguousarray(t.reshape(2**K, self.d_keep))
        else:
            perm = axes + kaxes
            full = perm + tuple(a + n for a in perm)
            t = state.tensor().transpose(full)
            t = t.reshape(2**K, self.d_keep, 2**K, self.d_keep).transpose(0, 2, 1, 3)
            self._rho = np.ascontiguousarray(t)

    def __call__(self, angles: np.ndarray) -> np.ndarray:
        angles = np.asarray(angles, dtype=float)
        W = _kron_rows(np.conj(measurement_bases(angles)))
        if self.pure:
            B = np.einsum("...ks,sd->...kd", W, self._psi)
            if self.cut == "pair":
                b = B.reshape(B.shape[:-1] + (2, 2))
                dets = b[..., 0, 0] * b[..., 1, 1] - b[..., 0, 1] * b[..., 1, 0]
                return 2.0 * np.abs(dets).sum(axis=-1)
            b = B.reshape(B.shape[:-1] + (2, self.d_keep // 2))
            G = np.einsum("...ad,...bd->...ab", b, np.conj(b))
            det = (G[..., 0, 0] * G[..., 1, 1] - G[..., 0, 1] * G[..., 1, 0]).real
            return 2.0 * np.sqrt(np.clip(det, 0.0, None)).sum(axis=-1)
        blocks = np.einsum("...ks,...kt,stab->...kab", W, np.conj(W), self._rho)
        return 2.0 * _unnormalized_negativity_sum(blocks, self.cut, self.d_keep)


def _unnormalized_negativity_sum(blocks: np.ndarray, cut: str, d: int) -> np.ndarray:
    """Sum over branches of |negative part| of the partially transposed blocks.

    For the pair cut the second qubit is transposed; for the block cut, the
    hub (first) qubit.  Branch blocks need not be normalized.
    """
    lead = blocks.shape[:-2]
    if cut == "pair":
        pt = blocks.reshape(lead + (2, 2, 2, 2))
        pt = np.swapaxes(pt, -3, -1)  # transpose second-qubit indices
        pt = pt.reshape(lead + (4, 4))
    else:
        half = d // 2
        pt = blocks.reshape(lead + (2, half, 2, half))
        pt = np.swapaxes(pt, -4, -2)  # transpose hub indices
        pt = pt.reshape(lead + (d, d))
    w = np.linalg.eigvalsh(pt)
    return np.where(w < 0.0, -w, 0.0).sum(axis=(-1, -2))


def branch_blocks_at(state, measured, angles: np.ndarray):
    """Unnormalized branch data for one angle assignment.

    Returns ``(2^K, d_keep)`` branch vectors for pure inputs or
    ``(2^K, d_keep, d_keep)`` branch blocks for mixed ones, with kept
    qubits in ascending register order.
    """
    n = state.num_qubits
    measured = tuple(sorted(measured))
    keep = tuple(q for q in range(1, n + 1) if q not in set(measured))
    _check_measured(n, measured, keep)
    U = measurement_bases(np.asarray(angles, dtype=float))
    W = _kron_rows(np.conj(U))
    K = len(measured)
    axes = tuple(q - 1 for q in measured)
    kaxes = tuple(q - 1 for q in keep)
    d = 2 ** len(keep)
    if isinstance(state, PureState):
        psi = state.tensor().transpose(axes + kaxes).reshape(2**K, d)
        return W @ psi
    perm = axes + kaxes
    full = perm + tuple(a + n for a in perm)
    rho = state.tensor().transpose(full)
    rho = rho.reshape(2**K, d, 2**K, d).transpose(0, 2, 1, 3)
    return np.einsum("ks,kt,stab->kab", W, np.conj(W), rho)


@dataclass
class OptimizationResult:
    value: float
    angles: np.ndarray
    restarts: int
    iterations: int
    evaluations: int
    start_values: np.ndarray = field(repr=False, default=None)


def _initial_points(num_measured: int, config: OptimizerConfig) -> np.ndarray:
    K = num_measured
    pauli = np.array(
        [pauli_angle_vector((ax,) * K) for ax in ("z", "x", "y")]
    )
    if config.restarts == 0:
        return pauli
    g = np.random.Generator(np.random.Philox(np.uint64(config.seed)))
    # one row-major block so a longer restart list extends a shorter one
    rand = g.uniform(size=(config.restarts, 2 * K))
    rand[:, 0::2] *= np.pi
    rand[:, 1::2] *= 2 * np.pi
    return np.vstack([pauli, rand])


def _nelder_mead_batch(f, X0: np.ndarray, max_iter: int, fatol: float, step: float = 0.15):
    """Lockstep Nelder-Mead minimization over a batch of start points.

    Converged instances are compacted out of the working set; returns the
    per-start best points and values plus evaluation counters.
    """
    X0 = np.asarray(X0, dtype=float)
    R, n = X0.shape
    S = np.repeat(X0[:, None, :], n + 1, axis=1)
    for j in range(n):
        S[:, j + 1, j] += step
    F = f(S.reshape(-1, n)).reshape(R, n + 1)
    nev = R * (n + 1)
    xbest = X0.copy()
    fbest = np.full(R, np.inf)
    idx = np.arange(R)
    it = 0
    while it < max_iter and len(idx):
        it += 1
        order = np.argsort(F, axis=1)
        S = np.take_along_axis(S, order[:, :, None], axis=1)
        F = np.take_along_axis(F, order, axis=1)
        done = (F[:, -1] - F[:, 0]) <= fatol
        if done.any():
            for r in np.nonzero(done)[0]:
                o = idx[r]
                if F[r, 0] < fbest[o]:
                    fbest[o] = F[r, 0]
                    xbest[o] = S[r, 0]
            keep = ~done
            S, F, idx = S[keep], F[keep], idx[keep]
            if not len(idx):
                break
        cen = S[:, :-1, :].mean(axis=1)
        d = cen - S[:, -1, :]
        # reflection, expansion, outside and inside contraction candidates
        cand = np.stack([cen + d, cen + 2 * d, cen + 0.5 * d, cen - 0.5 * d], axis=1)
        fc = f(cand.reshape(-1, n)).reshape(-1, 4)
        nev += 4 * len(idx)
        fr, fe, fo, fi = fc[:, 0], fc[:, 1], fc[:, 2], fc[:, 3]
        newx = S[:, -1, :].copy()
        newf = F[:, -1].copy()
        m_exp_try = fr < F[:, 0]
        m_exp = m_exp_try & (fe < fr)
        m_expn = m_exp_try & ~(fe < fr)
        m_refl = ~m_exp_try & (fr < F[:, -2])
        m_cout_try = ~m_exp_try & ~m_refl & (fr < F[:, -1])
        m_cout = m_cout_try & (fo <= fr)
        m_cin_try = ~m_exp_try & ~m_refl & ~m_cout_try
        m_cin = m_cin_try & (fi < F[:, -1])
        shrink = (m_cout_try & ~m_cout) | (m_cin_try & ~m_cin)
        for mask, xx, ff in (
            (m_refl, cand[:, 0], fr),
            (m_exp, cand[:, 1], fe),
            (m_expn, cand[:, 0], fr),
            (m_cout, cand[:, 2], fo),
            (m_cin, cand[:, 3], fi),
        ):
            newx[mask] = xx[mask]
            newf[mask] = ff[mask]
        upd = ~shrink
        S[upd, -1, :] = newx[upd]
        F[upd, -1] = newf[upd]
        if shrink.any():
            sh = np.nonzero(shrink)[0]
            S[sh, 1:, :] = S[sh, :1, :] + 0.5 * (S[sh, 1:, :] - S[sh, :1, :])
            F[sh, 1:] = f(S[sh, 1:, :].reshape(-1, n)).reshape(len(sh), n)
            nev += len(sh) * n
    for r in range(len(idx)):  # flush instances stopped by the iteration cap
        o = idx[r]
        j = int(np.argmin(F[r]))
        if F[r, j] < fbest[o]:
            fbest[o] = F[r, j]
            xbest[o] = S[r, j]
    return xbest, fbest, nev, it


def maximize_average_entanglement(
    objective: AverageEntanglementObjective, config: OptimizerConfig
) -> OptimizationResult:
    """Multi-start maximization of a batched average-entanglement objective."""
    X0 = _initial_points(objective.num_measured, config)
    xb, fb, nev, it = _nelder_mead_batch(
        lambda X: -objective(X),
        X0,
        max_iter=config.max_iterations,
        fatol=config.tolerance,
    )
    best = int(np.argmin(fb))
    value = -float(fb[best])
    if value < PRODUCT_FLOOR:
        value = 0.0
    return OptimizationResult(
        value=value,
        angles=xb[best],
        restarts=len(X0),
        iterations=it,
        evaluations=nev,
        start_values=-fb,
    )
