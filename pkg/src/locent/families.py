"""Constructors and seeded samplers for the studied state families.

All samplers derive their randomness from a counter-based Philox generator
keyed by a 64-bit seed, so a (spec, seed) pair always yields the same state
regardless of how many other samples were drawn before it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .states import PureState

FAMILIES = (
    "dicke",
    "ghz",
    "gghz",
    "w",
    "gw",
    "magnetization_sector",
    "symmetric_superposition",
    "magnetization_pair",
    "haar",
    "w_class_3q",
    "ghz_class_3q",
)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.uint64(seed)))


def _normalized(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.complex128)
    norm = np.linalg.norm(c)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"coefficients must be normalized, got norm {norm}")
    return c


def _sector_indices(num_qubits: int, n_excited: int):
    """Basis indices with exactly ``n_excited`` qubits in |0> (bit value 0)."""
    ones = num_qubits - n_excited
    idx = []
    for pos in combinations(range(num_qubits), ones):
        i = 0
        for p in pos:
            i |= 1 << (num_qubits - 1 - p)
        idx.append(i)
    return sorted(idx)


def dicke(num_qubits: int, n_excited: int) -> PureState:
    """Uniform superposition of all states with ``n_excited`` qubits in |0>."""
    if not 0 <= n_excited <= num_qubits:
        raise ValueError(f"excitations {n_excited} out of range 0..{num_qubits}")
    idx = _sector_indices(num_qubits, n_excited)
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[idx] = 1.0 / np.sqrt(len(idx))
    return PureState(num_qubits, amps)


def w_state(num_qubits: int) -> PureState:
    """Single-excitation Dicke state (the N-qubit W state)."""
    return dicke(num_qubits, 1)


def gghz(num_qubits: int, c0: complex, c1: complex) -> PureState:
    """``c0|0..0> + c1|1..1>``."""
    _normalized([c0, c1])
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[0] = c0
    amps[-1] = c1
    return PureState(num_qubits, amps)


def ghz(num_qubits: int) -> PureState:
    return gghz(num_qubits, 1 / np.sqrt(2), 1 / np.sqrt(2))


def gw(coeffs) -> PureState:
    """Generalized W state: amplitude ``coeffs[i-1]`` on qubit i being |1>.

    When the register is split as S | S0, the S qubits (hub first) come
    first and the S0 coefficients occupy the tail of ``coeffs``.
    """
    c = _normalized(coeffs)
    n = len(c)
    amps = np.zeros(2**n, dtype=np.complex128)
    for i, ci in enumerate(c):
        amps[1 << (n - 1 - i)] = ci
    return PureState(n, amps)


def symmetric_superposition(num_qubits: int, coeffs_by_m: dict) -> PureState:
    """Superposition ``sum_m c_m |D_m>`` over magnetization sectors.

    Keys of ``coeffs_by_m`` are total magnetizations from the grid
    ``-N, -N+2, ..., N``.
    """
    valid_m = set(range(-num_qubits, num_qubits + 1, 2))
    if not set(coeffs_by_m) <= valid_m:
        bad = sorted(set(coeffs_by_m) - valid_m)
        raise ValueError(f"magnetizations {bad} not on the grid of N={num_qubits}")
    _normalized(list(coeffs_by_m.values()))
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    for m, cm in coeffs_by_m.items():
        n_exc = (m + num_qubits) // 2
        amps += cm * dicke(num_qubits, n_exc).amplitudes
    return PureState(num_qubits, amps)


def magnetization_pair(num_qubits: int, m: int, c_plus: complex, c_minus: complex) -> PureState:
    """Single-parameter family ``c_m |D_m> + c_{-m} |D_{-m}>`` with m != 0."""
    if m == 0:
        raise ValueError("m must be non-zero; use a single Dicke state instead")
    return symmetric_superposition(num_qubits, {m: c_plus, -m: c_minus})


def sample_magnetization_sector(num_qubits: int, n_excited: int, seed: int) -> PureState:
    """Gaussian-random state supported on one magnetization sector."""
    if not 0 <= n_excited <= num_qubits:
        raise ValueError(f"excitations {n_excited} out of range 0..{num_qubits}")
    idx = _sector_indices(num_qubits, n_excited)
    g = _rng(seed)
    c = g.normal(size=len(idx)) + 1j * g.normal(size=len(idx))
    c /= np.linalg.norm(c)
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[idx] = c
    return PureState(num_qubits, amps)


def sample_gw(num_qubits: int, seed: int) -> PureState:
    """Generalized W state with Gaussian-random coefficients."""
    g = _rng(seed)
    c = g.normal(size=num_qubits) + 1j * g.normal(size=num_qubits)
    return gw(c / np.linalg.norm(c))


def sample_gghz(num_qubits: int, seed: int) -> PureState:
    g = _rng(seed)
    c = g.normal(size=2) + 1j * g.normal(size=2)
    c /= np.linalg.norm(c)
    return gghz(num_qubits, c[0], c[1])


def sample_symmetric_superposition(num_qubits: int, seed: int) -> PureState:
    g = _rng(seed)
    ms = list(range(-num_qubits, num_qubits + 1, 2))
    c = g.normal(size=len(ms)) + 1j * g.normal(size=len(ms))
    c /= np.linalg.norm(c)
    return symmetric_superposition(num_qubits, dict(zip(ms, c)))


def sample_magnetization_pair(num_qubits: int, m: int, seed: int) -> PureState:
    g = _rng(seed)
    c = g.normal(size=2) + 1j * g.normal(size=2)
    c /= np.linalg.norm(c)
    return magnetization_pair(num_qubits, m, c[0], c[1])


def sample_haar(num_qubits: int, seed: int) -> PureState:
    """Haar-uniform pure state from normalized complex Gaussian amplitudes."""
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    g = _rng(seed)
    d = 2**num_qubits
    c = g.normal(size=d) + 1j * g.normal(size=d)
    return PureState(num_qubits, c / np.linalg.norm(c))


def w_class_3q(coeffs) -> PureState:
    """Three-qubit W-class state ``c0|000> + c1|100> + c2|010> + c3|001>``."""
    c = _normalized(coeffs)
    if len(c) != 4:
        raise ValueError("w_class_3q needs exactly 4 coefficients")
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b000], amps[0b100], amps[0b010], amps[0b001] = c
    return PureState(3, amps)


def ghz_class_3q(coeffs) -> PureState:
    """Generic three-qubit state ``sum_l c_l |l>`` (the GHZ class up to measure zero)."""
    c = _normalized(coeffs)
    if len(c) != 8:
        raise ValueError("ghz_class_3q needs exactly 8 coefficients")
    return PureState(3, c.copy())


def sample_w_class_3q(seed: int) -> PureState:
    g = _rng(seed)
    c = g.normal(size=4) + 1j * g.normal(size=4)
    return w_class_3q(c / np.linalg.norm(c))


def sample_ghz_class_3q(seed: int) -> PureState:
    g = _rng(seed)
    c = g.normal(size=8) + 1j * g.normal(size=8)
    return ghz_class_3q(c / np.linalg.norm(c))


@dataclass
class FamilySpec:
    """Declarative description of a state family, usable from config files.

    ``excitations`` doubles as the magnetization-pair ``m`` for that family;
    ``coefficients`` fixes a deterministic member where applicable, otherwise
    the family is sampled from ``seed``.
    """

    family: str
    num_qubits: int
    excitations: int | None = None
    coefficients: list | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; known: {FAMILIES}")
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        if self.family == "dicke" and self.excitations is None:
            raise ValueError("dicke needs an excitation count")
        if self.family == "magnetization_sector" and self.excitations is None:
            raise ValueError("magnetization_sector needs an excitation count")
        if self.family == "magnetization_pair" and self.excitations is None:
            raise ValueError("magnetization_pair needs m via 'excitations'")

    def is_random(self) -> bool:
        if self.family in ("dicke", "ghz", "w"):
            return False
        return self.coefficients is None

    def realize(self, seed: int | None = None) -> PureState:
        """Build the state; ``seed`` overrides the spec seed for samplers."""
        s = self.seed if seed is None else seed
        N = self.num_qubits
        cs = None
        if self.coefficients is not None:
            cs = np.array([complex(re, im) for re, im in self.coefficients])
        f = self.family
        if f == "dicke":
            return dicke(N, self.excitations)
        if f == "ghz":
            return ghz(N)
        if f == "w":
            return w_state(N)
        if f == "gghz":
            return gghz(N, cs[0], cs[1]) if cs is not None else sample_gghz(N, s)
        if f == "gw":
            return gw(cs) if cs is not None else sample_gw(N, s)
        if f == "magnetization_sector":
            return sample_magnetization_sector(N, self.excitations, s)
        if f == "symmetric_superposition":
            if cs is not None:
                ms = list(range(-N, N + 1, 2))
                return symmetric_superposition(N, dict(zip(ms, cs)))
            return sample_symmetric_superposition(N, s)
        if f == "magnetization_pair":
            m = self.excitations
            if cs is not None:
                return magnetization_pair(N, m, cs[0], cs[1])
            return sample_magnetization_pair(N, m, s)
        if f == "haar":
            return sample_haar(N, s)
        if f == "w_class_3q":
            return w_class_3q(cs) if cs is not None else sample_w_class_3q(s)
        if f == "ghz_class_3q":
            return ghz_class_3q(cs) if cs is not None else sample_ghz_class_3q(s)
        raise ValueError(f"unhandled family {f!r}")

    def is_permutation_symmetric(self) -> bool:
        """True when every realized member is exactly permutation symmetric."""
        return self.family in (
            "dicke",
            "ghz",
            "gghz",
            "w",
            "symmetric_superposition",
            "magnetization_pair",
        )

    def to_json_dict(self) -> dict:
        d = {"family": self.family, "num_qubits": self.num_qubits, "seed": self.seed}
        if self.excitations is not None:
            d["excitations"] = self.excitations
        if self.coefficients is not None:
            d["coefficients"] = self.coefficients
        if self.extra:
            d["extra"] = self.extra
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "FamilySpec":
        return cls(
            family=d["family"],
            num_qubits=int(d["num_qubits"]),
            excitations=d.get("excitations"),
            coefficients=d.get("coefficients"),
            seed=int(d.get("seed", 0)),
            extra=d.get("extra", {}),
        )


def sector_dimension(num_qubits: int, n_excited: int) -> int:
    return comb(num_qubits, n_excited)
