"""Sweep campaigns, proposition checking, and figure-data presets.

A sweep draws states from a family (seed = master seed + sample index, so
results are independent of worker count), optionally dephases them, runs
the localization optimizers, and emits one record per sample with
bound-check flags.  Violations are counted against a tolerance beyond the
bound so that optimizer slack is not mistaken for physics; near-bound
suspects are re-run with a larger restart budget before being counted.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from ._optimize import OptimizerConfig
from .families import FamilySpec
from .linalg import block_entanglement
from .localization import ble, pauli_le, rle
from .noise import PhaseFlipChannel, apply_channel
from .oracles import BoundLine, bound_lines
from .states import InvariantViolation

VIOLATION_TOL = 1e-6
SATURATION_TOL = 1e-4
SUSPECT_MARGIN = 1e-4
REFINE_FACTOR = 4

CSV_VERSION = "locent-sweep-v1"


def _default_sweep_optimizer() -> OptimizerConfig:
    # lighter than the single-call default; near-bound records are refined
    return OptimizerConfig(restarts=8, max_iterations=200, tolerance=1e-7)


@dataclass
class SweepConfig:
    """One sweep campaign: family, sample budget, noise, and optimizer."""

    family: FamilySpec
    sample_count: int = 10_000
    n0: int = 0
    hub: int = 1
    channel: PhaseFlipChannel | None = None
    optimizer: OptimizerConfig = field(default_factory=_default_sweep_optimizer)
    master_seed: int = 0
    pauli_only: bool = False
    symmetric_shortcut: bool | None = None
    refine_near_bounds: bool = True
    propositions: tuple = ()
    threads: int = 1
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        M = self.family.num_qubits
        if not 0 <= self.n0 <= M - 2:
            raise ValueError(f"n0={self.n0} out of range 0..{M - 2}")
        if not 1 <= self.hub <= M - self.n0:
            raise ValueError("hub must lie inside the useful block")
        if self.output_format not in ("csv", "jsonl"):
            raise ValueError("output_format must be 'csv' or 'jsonl'")
        self.propositions = tuple(self.propositions)

    @property
    def block_size(self) -> int:
        """Number of useful qubits N; the auxiliary set is the last n0."""
        return self.family.num_qubits - self.n0

    def s0_qubits(self) -> tuple:
        M = self.family.num_qubits
        return tuple(range(self.block_size + 1, M + 1))

    def partners(self) -> tuple:
        return tuple(i for i in range(1, self.block_size + 1) if i != self.hub)

    def effective_propositions(self) -> tuple:
        if self.propositions:
            return self.propositions
        return default_propositions(self.family, self.n0)

    def use_symmetric_shortcut(self) -> bool:
        if self.symmetric_shortcut is not None:
            return self.symmetric_shortcut
        if not self.family.is_permutation_symmetric():
            return False
        if self.channel is not None and self.channel.target_qubits is not None:
            return False
        return True

    def to_json_dict(self) -> dict:
        d = {
            "family": self.family.to_json_dict(),
            "sample_count": self.sample_count,
            "n0": self.n0,
            "hub": self.hub,
            "optimizer": {
                "restarts": self.optimizer.restarts,
                "max_iterations": self.optimizer.max_iterations,
                "tolerance": self.optimizer.tolerance,
                "seed": self.optimizer.seed,
            },
            "master_seed": self.master_seed,
            "pauli_only": self.pauli_only,
            "refine_near_bounds": self.refine_near_bounds,
            "propositions": list(self.effective_propositions()),
            "threads": self.threads,
            "output_format": self.output_format,
        }
        if self.channel is not None:
            d["channel"] = {"q": self.channel.q, "eta": self.channel.eta}
            if self.channel.target_qubits is not None:
                d["channel"]["targets"] = list(self.channel.target_qubits)
        if self.symmetric_shortcut is not None:
            d["symmetric_shortcut"] = self.symmetric_shortcut
        if self.output_path:
            d["output_path"] = self.output_path
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "SweepConfig":
        channel = None
        if "channel" in d and d["channel"] is not None:
            ch = d["channel"]
            channel = PhaseFlipChannel(
                q=float(ch["q"]),
                eta=float(ch.get("eta", 0.0)),
                target_qubits=tuple(ch["targets"]) if "targets" in ch else None,
            )
        opt = d.get("optimizer", {})
        optimizer = OptimizerConfig(
            restarts=int(opt.get("restarts", 8)),
            max_iterations=int(opt.get("max_iterations", 200)),
            tolerance=float(opt.get("tolerance", 1e-7)),
            seed=int(opt.get("seed", 0)),
        )
        return cls(
            family=FamilySpec.from_json_dict(d["family"]),
            sample_count=int(d.get("sample_count", 10_000)),
            n0=int(d.get("n0", 0)),
            hub=int(d.get("hub", 1)),
            channel=channel,
            optimizer=optimizer,
            master_seed=int(d.get("master_seed", 0)),
            pauli_only=bool(d.get("pauli_only", False)),
            symmetric_shortcut=d.get("symmetric_shortcut"),
            refine_near_bounds=bool(d.get("refine_near_bounds", True)),
            propositions=tuple(d.get("propositions", ())),
            threads=int(d.get("threads", 1)),
            output_path=d.get("output_path"),
            output_format=d.get("output_format", "csv"),
        )


def default_propositions(family: FamilySpec, n0: int) -> tuple:
    """Bound set a family is checked against, following its structure."""
    f = family.family
    if f == "gw":
        return (5, 6) if n0 else (3, 4)
    if f == "w_class_3q":
        return (7, 8)
    if f == "magnetization_sector":
        n, N = family.excitations, family.num_qubits
        if min(n, N - n) == 1:
            return (5, 6) if n0 else (3, 4)
        return (2,) if n0 else (1,)
    return (2,) if n0 else (1,)


@dataclass
class SampleRecord:
    """One sweep sample on the (E, F_S) plane with its bound flags."""

    index: int
    seed: int
    family: str
    num_qubits: int
    n0: int
    params_digest: str
    E: float
    F: dict
    F_S: float
    flags: dict = field(default_factory=dict)
    refined: bool = False
    pauli_only: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        gap = abs(self.F_S - sum(self.F.values()))
        if gap > 1e-9:
            raise InvariantViolation(f"F_S differs from sum of F_i by {gap:.3e}")

    def ratio(self) -> float | None:
        return self.F_S / self.E if self.E > 1e-12 else None


def _state_digest(state) -> str:
    data = np.round(state.amplitudes, 12).tobytes()
    return hashlib.sha1(data).hexdigest()[:12]


def _localize(config: SweepConfig, rho, optimizer: OptimizerConfig):
    """(E, {partner: F_i}) for one realized (possibly dephased) state."""
    hub = config.hub
    s0 = config.s0_qubits()
    partners = config.partners()
    if config.pauli_only:
        E = pauli_le(rho, s0, hub=hub) if s0 else block_entanglement(rho, hub=hub)
    elif s0:
        E = ble(rho, s0, hub=hub, config=optimizer)
    else:
        E = block_entanglement(rho, hub=hub)
    F = {}
    shortcut = config.use_symmetric_shortcut()
    for i in partners:
        if shortcut and F:
            F[i] = next(iter(F.values()))
            continue
        if config.pauli_only:
            measured = tuple(
                q for q in range(1, config.family.num_qubits + 1) if q not in (hub, i)
            )
            F[i] = pauli_le(rho, measured, hub=hub, partner=i)
        else:
            F[i] = rle(rho, i, hub=hub, config=optimizer)
    return E, F


def _check_flags(E: float, F_S: float, props: tuple, N: int, tol: float = VIOLATION_TOL):
    flags = {}
    for p in props:
        ok = True
        for line in bound_lines(p, N):
            if line.kind == "upper" and F_S > line.slope * E + tol:
                ok = False
            if line.kind == "lower" and F_S < line.slope * E - tol:
                ok = False
        flags[p] = ok
    return flags


def _near_any_bound(E: float, F_S: float, props: tuple, N: int) -> bool:
    for p in props:
        for line in bound_lines(p, N):
            if F_S <= line.slope * E + SUSPECT_MARGIN and F_S >= line.slope * E - SUSPECT_MARGIN:
                return True
            if line.kind == "upper" and F_S > line.slope * E:
                return True
            if line.kind == "lower" and F_S < line.slope * E:
                return True
    return False


def run_sample(config: SweepConfig, index: int) -> SampleRecord:
    """Compute one sweep sample; bit-reproducible from (config, index)."""
    seed = config.master_seed + index
    pure = config.family.realize(seed)
    digest = _state_digest(pure)
    rho = apply_channel(config.channel, pure) if config.channel is not None else pure
    optimizer = replace(config.optimizer, seed=seed)
    E, F = _localize(config, rho, optimizer)
    F_S = float(sum(F.values()))
    props = config.effective_propositions()
    N = config.block_size
    refined = False
    if (
        config.refine_near_bounds
        and not config.pauli_only
        and props
        and _near_any_bound(E, F_S, props, N)
    ):
        strong = optimizer.scaled(REFINE_FACTOR)
        E2, F2 = _localize(config, rho, strong)
        if config.n0 and E2 > E:
            E = E2
        F = {i: max(F[i], F2[i]) for i in F}
        F_S = float(sum(F.values()))
        refined = True
    return SampleRecord(
        index=index,
        seed=seed,
        family=config.family.family,
        num_qubits=config.family.num_qubits,
        n0=config.n0,
        params_digest=digest,
        E=float(E),
        F=F,
        F_S=F_S,
        flags=_check_flags(E, F_S, props, N),
        refined=refined,
        pauli_only=config.pauli_only,
    )


replay = run_sample


@dataclass
class SweepSummary:
    sample_count: int
    min_ratio: float | None
    max_ratio: float | None
    violations: dict
    saturations: dict
    refined_count: int
    runtime_s: float

    def to_json_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "violations": {str(k): v for k, v in self.violations.items()},
            "saturations": {str(k): v for k, v in self.saturations.items()},
            "refined_count": self.refined_count,
            "runtime_s": self.runtime_s,
        }


def _pool_worker(args):
    config_json, index = args
    return run_sample(SweepConfig.from_json_dict(config_json), index)


def run_sweep(config: SweepConfig, progress=None):
    """Run a campaign; returns (records, summary).

    Records are written incrementally when ``output_path`` is set.  The
    per-sample seeds depend only on the master seed and sample index, so
    the result is deterministic for any worker count.
    """
    t0 = time.perf_counter()
    records = []
    writer = None
    fh = None
    if config.output_path:
        fh = open(config.output_path, "w", newline="")
        writer = _RecordWriter(fh, config)
    try:
        if config.threads > 1:
            import multiprocessing as mp

            cfg_json = config.to_json_dict()
            with mp.Pool(config.threads) as pool:
                it = pool.imap(
                    _pool_worker,
                    ((cfg_json, i) for i in range(config.sample_count)),
                    chunksize=16,
                )
                for rec in it:
                    records.append(rec)
                    if writer:
                        writer.write(rec)
                    if progress:
                        progress(rec)
        else:
            for i in range(config.sample_count):
                rec = run_sample(config, i)
                records.append(rec)
                if writer:
                    writer.write(rec)
                if progress:
                    progress(rec)
    finally:
        if fh:
            fh.close()
    summary = summarize(config, records, time.perf_counter() - t0)
    return records, summary


def summarize(config: SweepConfig, records, runtime_s: float = 0.0) -> SweepSummary:
    ratios = [r.ratio() for r in records if r.ratio() is not None]
    props = config.effective_propositions()
    N = config.block_size
    violations = {}
    saturations = {}
    for p in props:
        up = lo = sat = 0
        for line in bound_lines(p, N):
            for r in records:
                gap = r.F_S - line.slope * r.E
                if line.kind == "upper" and gap > VIOLATION_TOL:
                    up += 1
                if line.kind == "lower" and gap < -VIOLATION_TOL:
                    lo += 1
                if abs(gap) < SATURATION_TOL:
                    sat += 1
        violations[p] = {"upper": up, "lower": lo}
        saturations[p] = sat
    return SweepSummary(
        sample_count=len(records),
        min_ratio=min(ratios) if ratios else None,
        max_ratio=max(ratios) if ratios else None,
        violations=violations,
        saturations=saturations,
        refined_count=sum(r.refined for r in records),
        runtime_s=runtime_s,
    )


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple:
    """Wilson 95% score interval for a binomial fraction."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z**2 / trials
    center = (p + z**2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z**2 / (4 * trials**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class PropositionReport:
    proposition_id: int
    block_size: int
    lines: tuple
    record_count: int
    upper_violations: int
    lower_violations: int
    saturations: int
    violating_seeds: tuple
    violation_fraction: float
    wilson_95: tuple

    def to_json_dict(self) -> dict:
        return {
            "proposition_id": self.proposition_id,
            "block_size": self.block_size,
            "lines": [
                {"slope": l.slope, "kind": l.kind, "context": l.context}
                for l in self.lines
            ],
            "record_count": self.record_count,
            "upper_violations": self.upper_violations,
            "lower_violations": self.lower_violations,
            "saturations": self.saturations,
            "violating_seeds": list(self.violating_seeds),
            "violation_fraction": self.violation_fraction,
            "wilson_95": list(self.wilson_95),
        }


def check_propositions(records, proposition_ids, tolerance: float = VIOLATION_TOL):
    """Count bound violations and saturations per proposition.

    Violating seeds are collected for replay; fractions carry Wilson 95%
    confidence intervals rather than bare point estimates.
    """
    reports = []
    records = list(records)
    for p in proposition_ids:
        if not records:
            reports.append(
                PropositionReport(p, 0, (), 0, 0, 0, 0, (), 0.0, (0.0, 1.0))
            )
            continue
        N = records[0].num_qubits - records[0].n0
        lines = bound_lines(p, N)
        up = lo = sat = 0
        bad_seeds = []
        for r in records:
            violated = False
            for line in lines:
                gap = r.F_S - line.slope * r.E
                if line.kind == "upper" and gap > tolerance:
                    up += 1
                    violated = True
                if line.kind == "lower" and gap < -tolerance:
                    lo += 1
                    violated = True
                if abs(gap) < SATURATION_TOL:
                    sat += 1
            if violated:
                bad_seeds.append(r.seed)
        n = len(records)
        frac = len(bad_seeds) / n
        reports.append(
            PropositionReport(
                proposition_id=p,
                block_size=N,
                lines=lines,
                record_count=n,
                upper_violations=up,
                lower_violations=lo,
                saturations=sat,
                violating_seeds=tuple(bad_seeds),
                violation_fraction=frac,
                wilson_95=wilson_interval(len(bad_seeds), n),
            )
        )
    return reports


# ---------------------------------------------------------------- export

class _RecordWriter:
    def __init__(self, fh, config: SweepConfig):
        self.fh = fh
        self.format = config.output_format
        self.partners = config.partners()
        self.props = config.effective_propositions()
        if self.format == "csv":
            self.columns = _csv_columns(self.partners, self.props)
            fh.write(f"# {CSV_VERSION} columns={','.join(self.columns)}\n")
            self.csv = csv.writer(fh)
            self.csv.writerow(self.columns)

    def write(self, rec: SampleRecord):
        if self.format == "csv":
            self.csv.writerow(_csv_row(rec, self.partners, self.props))
        else:
            self.fh.write(json.dumps(_record_json(rec)) + "\n")


def _csv_columns(partners, props):
    cols = ["index", "seed", "family", "num_qubits", "n0", "params_digest", "E", "F_S"]
    cols += [f"F_{i}" for i in partners]
    cols += [f"prop_{p}" for p in props]
    cols += ["refined", "pauli_only"]
    return cols


def _csv_row(rec: SampleRecord, partners, props):
    row = [
        rec.index,
        rec.seed,
        rec.family,
        rec.num_qubits,
        rec.n0,
        rec.params_digest,
        repr(rec.E),
        repr(rec.F_S),
    ]
    row += [repr(rec.F[i]) for i in partners]
    row += [int(rec.flags.get(p, True)) for p in props]
    row += [int(rec.refined), int(rec.pauli_only)]
    return row


def _record_json(rec: SampleRecord) -> dict:
    return {
        "index": rec.index,
        "seed": rec.seed,
        "family": rec.family,
        "num_qubits": rec.num_qubits,
        "n0": rec.n0,
        "params_digest": rec.params_digest,
        "E": rec.E,
        "F": {str(k): v for k, v in rec.F.items()},
        "F_S": rec.F_S,
        "flags": {str(k): v for k, v in rec.flags.items()},
        "refined": rec.refined,
        "pauli_only": rec.pauli_only,
    }


def export_records(records, path: str, format: str = "csv", config: SweepConfig | None = None):
    """Write records to CSV (with a versioned header) or JSON lines."""
    records = list(records)
    if format == "csv":
        if records:
            partners = tuple(sorted(records[0].F))
            props = tuple(sorted(records[0].flags))
        else:
            partners, props = (), ()
        with open(path, "w", newline="") as fh:
            columns = _csv_columns(partners, props)
            fh.write(f"# {CSV_VERSION} columns={','.join(columns)}\n")
            w = csv.writer(fh)
            w.writerow(columns)
            for rec in records:
                w.writerow(_csv_row(rec, partners, props))
    elif format == "jsonl":
        with open(path, "w") as fh:
            for rec in records:
                fh.write(json.dumps(_record_json(rec)) + "\n")
    else:
        raise ValueError("format must be 'csv' or 'jsonl'")


def import_records(path: str):
    """Read records back from a CSV or JSON-lines export."""
    records = []
    with open(path) as fh:
        head = fh.read(1)
        fh.seek(0)
        if head != "{":  # csv, with or without the version comment line
            if fh.readline().startswith("#") is False:
                fh.seek(0)
            reader = csv.DictReader(fh)
            for row in reader:
                F = {
                    int(k[2:]): float(v)
                    for k, v in row.items()
                    if k.startswith("F_") and k != "F_S"
                }
                flags = {
                    int(k[5:]): bool(int(v))
                    for k, v in row.items()
                    if k.startswith("prop_")
                }
                records.append(
                    SampleRecord(
                        index=int(row["index"]),
                        seed=int(row["seed"]),
                        family=row["family"],
                        num_qubits=int(row["num_qubits"]),
                        n0=int(row["n0"]),
                        params_digest=row["params_digest"],
                        E=float(row["E"]),
                        F=F,
                        F_S=float(row["F_S"]),
                        flags=flags,
                        refined=bool(int(row["refined"])),
                        pauli_only=bool(int(row["pauli_only"])),
                    )
                )
        else:
            for line in fh:
                if not line.strip():
                    continue
                d = json.loads(line)
                records.append(
                    SampleRecord(
                        index=d["index"],
                        seed=d["seed"],
                        family=d["family"],
                        num_qubits=d["num_qubits"],
                        n0=d["n0"],
                        params_digest=d["params_digest"],
                        E=d["E"],
                        F={int(k): v for k, v in d["F"].items()},
                        F_S=d["F_S"],
                        flags={int(k): v for k, v in d["flags"].items()},
                        refined=d["refined"],
                        pauli_only=d["pauli_only"],
                    )
                )
    return records


# ---------------------------------------------------------------- figures

@dataclass
class FigurePreset:
    """Campaign reproducing one figure of the study at reduced sample count."""

    figure_id: str
    configs: list
    lines: tuple
    notes: str = ""


FIGURE_IDS = ("2", "3a", "3b", "4a", "4b", "5a", "5b", "5c", "6", "7a", "7b", "7c")


def figure_data(figure_id: str, samples: int = 10_000, seed: int = 0) -> FigurePreset:
    """Sweep preset for one figure id; raises on unknown ids."""
    fid = str(figure_id).lower()
    spec = FamilySpec

    def cfg(family, **kw):
        kw.setdefault("sample_count", samples)
        kw.setdefault("master_seed", seed)
        return SweepConfig(family=family, **kw)

    if fid == "2":
        return FigurePreset(
            "2",
            [cfg(spec("symmetric_superposition", 6))],
            bound_lines(1, 6),
            "six-qubit symmetric superpositions on the (E, F_S) plane",
        )
    if fid == "3a":
        return FigurePreset(
            "3a",
            [
                cfg(spec("gw", 5)),
                cfg(spec("magnetization_sector", 5, excitations=2)),
            ],
            bound_lines(3, 5) + bound_lines(4, 5) + bound_lines(1, 5)[:1],
            "five-qubit single- and two-excitation sectors, no auxiliary set",
        )
    if fid == "3b":
        return FigurePreset(
            "3b",
            [cfg(spec("ghz_class_3q", 3))],
            (
                BoundLine(2.0, "upper", 1, "ghz_class_3q", "N=3 (observed)"),
                BoundLine(1.0, "lower", 1, "ghz_class_3q", "N=3 (observed)"),
            ),
            "random three-qubit states between F_S = E and F_S = 2E",
        )
    if fid == "4a":
        return FigurePreset(
            "4a",
            [
                cfg(spec("gw", 4), n0=1),
                cfg(spec("magnetization_sector", 4, excitations=2), n0=1),
            ],
            bound_lines(5, 3) + bound_lines(6, 3) + bound_lines(2, 3)[:1],
            "four-qubit sectors with a one-qubit auxiliary set",
        )
    if fid == "4b":
        return FigurePreset(
            "4b",
            [
                cfg(spec("gw", 6), n0=1),
                cfg(spec("magnetization_sector", 6, excitations=2), n0=1),
            ],
            bound_lines(5, 5) + bound_lines(6, 5) + bound_lines(2, 5)[:1],
            "six-qubit sectors with a one-qubit auxiliary set",
        )
    if fid == "5a":
        fam = spec("symmetric_superposition", 4)
        return FigurePreset(
            "5a",
            [cfg(fam), cfg(fam, channel=PhaseFlipChannel(q=0.2))],
            bound_lines(1, 4),
            "four-qubit symmetric states, noiseless vs Markovian q=0.2",
        )
    if fid == "5b":
        configs = [
            cfg(
                spec("dicke", N, excitations=2),
                sample_count=1,
                channel=PhaseFlipChannel(q=q, eta=eta) if q else None,
            )
            for N in range(3, 13)
            for eta in (0.0, 0.9)
            for q in (0.0, 0.2, 0.4, 1.0)
        ]
        return FigurePreset(
            "5b",
            configs,
            bound_lines(1, 12)[:1],
            "two-excitation states up to 12 qubits under (non-)Markovian dephasing",
        )
    if fid == "5c":
        ch = PhaseFlipChannel(q=0.2)
        return FigurePreset(
            "5c",
            [
                cfg(spec("magnetization_sector", 4, excitations=1), channel=ch),
                cfg(spec("magnetization_sector", 4, excitations=2), channel=ch),
            ],
            bound_lines(3, 4) + bound_lines(4, 4) + bound_lines(1, 4)[:1],
            "dephased four-qubit sector states, q=0.2",
        )
    if fid == "6":
        ch = PhaseFlipChannel(q=0.2)
        return FigurePreset(
            "6",
            [cfg(spec("haar", N), channel=ch) for N in (3, 4, 5)],
            bound_lines(1, 3) + bound_lines(1, 4) + bound_lines(1, 5),
            "random states of 3..5 qubits under Markovian dephasing, q=0.2",
        )
    if fid in ("7a", "7b", "7c"):
        N = {"7a": 4, "7b": 5, "7c": 6}[fid]
        return FigurePreset(
            fid,
            [cfg(spec("haar", N))],
            (
                BoundLine(2.0, "upper", 1, "haar", f"N={N} (observed)"),
                BoundLine(1.0, "lower", 1, "haar", f"N={N} (observed)"),
            ),
            f"random {N}-qubit states between F_S = E and F_S = 2E",
        )
    raise ValueError(f"unknown figure id {figure_id!r}; known: {FIGURE_IDS}")
