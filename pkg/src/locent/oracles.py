"""Closed-form entanglement values and bound lines for the state families.

Every quantity follows the rescaled convention ``E = 2 * negativity``, so
the generalized-W and three-qubit W-class expressions carry a factor 2
relative to their bare-negativity forms; all bound slopes are ratios and
therefore convention independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .linalg import block_entanglement, pair_entanglement, to_density
from .noise import f_factor
from .states import DensityMatrix, PureState


def dicke_values(num_qubits: int, n_excited: int) -> tuple:
    """(E, F_i, F_S) of the N-qubit Dicke state, no auxiliary set.

    ``E = 2 sqrt(n (N-n)) / N``, ``F_i = 2 n (N-n) / (N (N-1))`` and
    ``F_S = sqrt(n (N-n)) E``.
    """
    N, n = num_qubits, n_excited
    if not 1 <= n <= N - 1:
        raise ValueError(f"excitations {n} out of range 1..{N - 1}")
    E = 2.0 * sqrt(n * (N - n)) / N
    F_i = 2.0 * n * (N - n) / (N * (N - 1))
    return E, F_i, sqrt(n * (N - n)) * E


def dicke_ble_sum(M: int, N: int, n_excited: int) -> float:
    """Block localizable entanglement of the M-qubit Dicke state, N kept.

    Hypergeometric average of single-sector block entanglements:
    ``(2 / (N C(M,n))) sum_l C(N,l) C(M-N,n-l) sqrt(l (N-l))``.
    """
    n = n_excited
    if not 1 <= N < M:
        raise ValueError(f"kept block N={N} must satisfy 1 <= N < M={M}")
    if not 0 <= n <= M:
        raise ValueError(f"excitations {n} out of range 0..{M}")
    lo, hi = max(0, n - M + N), min(n, N)
    total = sum(
        comb(N, l) * comb(M - N, n - l) * sqrt(l * (N - l)) for l in range(lo, hi + 1)
    )
    return 2.0 * total / (N * comb(M, n))


def dicke_rle_m(M: int, n_excited: int, N: int) -> tuple:
    """(F_i, F_S) of the M-qubit Dicke state with N useful qubits."""
    n = n_excited
    if not 1 <= N <= M:
        raise ValueError(f"N={N} out of range 1..{M}")
    if not 0 <= n <= M:
        raise ValueError(f"excitations {n} out of range 0..{M}")
    F_i = 2.0 * n * (M - n) / (M * (M - 1))
    return F_i, F_i * (N - 1)


def gghz_values(c0: complex, N: int, N0: int = 0) -> tuple:
    """(E or E_S, F_i, F_S) of the generalized GHZ state.

    The same expression ``2 |c0| sqrt(1 - |c0|^2)`` plays the role of E
    (N0 = 0) or of the block localizable entanglement (N0 > 0); the upper
    bound ``F_S = (N - 1) E`` is saturated either way.
    """
    if N < 2 or N0 < 0:
        raise ValueError("need N >= 2 useful qubits and N0 >= 0")
    a = abs(c0)
    if a > 1 + 1e-12:
        raise ValueError(f"|c0|={a} exceeds 1")
    E = 2.0 * a * sqrt(max(0.0, 1.0 - a * a))
    return E, E, (N - 1) * E


def gw_values(coeffs, n0: int = 0) -> tuple:
    """(E or E_S, F_S) of the generalized W state.

    ``coeffs`` spans the full register with the S qubits (hub first) ahead
    of the ``n0`` auxiliary ones.  ``E_S = 2 |c1| sqrt(1 - |c1|^2 -
    sum_{S0} |c_j|^2)`` and ``F_S = 2 |c1| sum_{i in S, i>1} |c_i|``.
    """
    c = np.abs(np.asarray(coeffs, dtype=np.complex128))
    if abs(float((c**2).sum()) - 1.0) > 1e-10:
        raise ValueError("coefficients must be normalized")
    M = len(c)
    if not 0 <= n0 <= M - 2:
        raise ValueError(f"auxiliary count {n0} out of range 0..{M - 2}")
    N = M - n0
    s0_weight = float((c[N:] ** 2).sum())
    E = 2.0 * c[0] * sqrt(max(0.0, 1.0 - c[0] ** 2 - s0_weight))
    F_S = 2.0 * c[0] * float(c[1:N].sum())
    return E, F_S


def gw_saturating_coeffs(N: int, c1: float, n0: int = 0, s0_coeffs=None) -> np.ndarray:
    """Coefficients of the family that saturates the gW upper bound.

    All partner amplitudes equal: ``|c_i|^2 = (1 - |c1|^2 - sum_S0) / (N-1)``.
    """
    s0 = np.asarray(s0_coeffs if s0_coeffs is not None else [], dtype=float)
    if len(s0) != n0:
        raise ValueError("need one auxiliary coefficient per S0 qubit")
    rest = 1.0 - c1**2 - float((s0**2).sum())
    if rest < -1e-12:
        raise ValueError("coefficients exceed normalization")
    ci = sqrt(max(0.0, rest) / (N - 1))
    return np.concatenate([[c1], np.full(N - 1, ci), s0])


def wclass3_values(coeffs) -> tuple:
    """(E, F_S) of a three-qubit W-class state ``(c0, c1, c2, c3)``.

    ``E = 2 |c1| sqrt(|c2|^2 + |c3|^2)`` and ``F_S = 2 |c1| (|c2| + |c3|)``.
    """
    c = np.abs(np.asarray(coeffs, dtype=np.complex128))
    if len(c) != 4:
        raise ValueError("need exactly 4 coefficients")
    if abs(float((c**2).sum()) - 1.0) > 1e-10:
        raise ValueError("coefficients must be normalized")
    E = 2.0 * c[1] * sqrt(c[2] ** 2 + c[3] ** 2)
    F_S = 2.0 * c[1] * (c[2] + c[3])
    return float(E), float(F_S)


def noisy_w_values(N: int, q: float, eta: float = 0.0, M: int | None = None) -> tuple:
    """(E or E_S, F_i, F_S) of the dephased W state.

    For the plain register (``M`` unset): ``E = 2 (1-f)^2 sqrt(N-1) / N``
    and ``F_i = 2 (1-f)^2 / N``.  With ``M`` set, the same forms divide by
    M instead, keeping the q -> 0 limit continuous with the noiseless
    M-qubit values.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    g = (1.0 - f_factor(q, eta)) ** 2
    denom = N if M is None else M
    if M is not None and M < N:
        raise ValueError(f"M={M} must be >= N={N}")
    E = 2.0 * g * sqrt(N - 1) / denom
    F_i = 2.0 * g / denom
    return E, F_i, (N - 1) * F_i


def noisy_gghz_values(c0: complex, N: int, q: float, eta: float = 0.0) -> tuple:
    """(E, F_i, F_S) of the dephased generalized GHZ state.

    The single coherence spans all N qubits, so it scales by ``(1-f)^N``
    and the upper-bound saturation ``F_S = (N-1) E`` survives the noise.
    """
    E0, _, _ = gghz_values(c0, N)
    E = E0 * abs(1.0 - f_factor(q, eta)) ** N
    return E, E, (N - 1) * E


def noisy_gghz_bound_check(c0: complex, N: int, q: float, eta: float = 0.0, atol: float = 1e-10) -> bool:
    """True when the noisy gGHZ closed forms still saturate the upper bound."""
    E, _, F_S = noisy_gghz_values(c0, N, q, eta)
    return abs(F_S - (N - 1) * E) <= atol


@dataclass(frozen=True)
class BoundLine:
    """One line ``F_S = slope * E`` bounding a family on the (E, F_S) plane."""

    slope: float
    kind: str  # 'upper' | 'lower'
    proposition_id: int
    family: str = ""
    context: str = ""

    def __post_init__(self):
        if self.kind not in ("upper", "lower"):
            raise ValueError("kind must be 'upper' or 'lower'")
        if self.slope <= 0:
            raise ValueError("slope must be positive")


def bound_lines(proposition_id: int, N: int) -> tuple:
    """Bound lines of one proposition at block size N.

    Upper slopes: N-1 for permutation-symmetric states (1, 2),
    sqrt(N-1) for generalized-W states (3, 5) and sqrt(2) for three-qubit
    W-class states (7).  Lower slopes are always 1 (4, 6, 8); the
    symmetric propositions carry the numerically observed lower line.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    p = proposition_id
    if p == 1:
        return (
            BoundLine(N - 1.0, "upper", 1, "symmetric", f"N={N}"),
            BoundLine(1.0, "lower", 1, "symmetric", f"N={N} (observed)"),
        )
    if p == 2:
        return (
            BoundLine(N - 1.0, "upper", 2, "symmetric", f"N={N}, S0 nonempty"),
            BoundLine(1.0, "lower", 2, "symmetric", f"N={N}, S0 nonempty (observed)"),
        )
    if p == 3:
        return (BoundLine(sqrt(N - 1.0), "upper", 3, "gw", f"N={N}"),)
    if p == 4:
        return (BoundLine(1.0, "lower", 4, "gw", f"N={N}"),)
    if p == 5:
        return (BoundLine(sqrt(N - 1.0), "upper", 5, "gw", f"N={N}, S0 nonempty"),)
    if p == 6:
        return (BoundLine(1.0, "lower", 6, "gw", f"N={N}, S0 nonempty"),)
    if p == 7:
        if N != 3:
            raise ValueError("proposition 7 is a three-qubit statement")
        return (BoundLine(sqrt(2.0), "upper", 7, "w_class_3q", "N=3"),)
    if p == 8:
        if N != 3:
            raise ValueError("proposition 8 is a three-qubit statement")
        return (BoundLine(1.0, "lower", 8, "w_class_3q", "N=3"),)
    raise ValueError(f"unknown proposition id {proposition_id}")


def monogamy_score(state, hub: int = 1) -> float:
    """Block entanglement minus the summed partial-trace pair entanglements.

    Non-negative scores mark monogamous states; the N-qubit GHZ state
    saturates the maximum of 1.
    """
    n = state.num_qubits
    if n < 2:
        raise ValueError("need at least two qubits")
    E = block_entanglement(state, hub=hub)
    rho = to_density(state) if isinstance(state, PureState) else state
    pair_sum = sum(
        pair_entanglement(rho, hub, i) for i in range(1, n + 1) if i != hub
    )
    return float(E - pair_sum)
