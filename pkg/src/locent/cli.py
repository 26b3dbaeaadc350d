"""Command-line interface.

Subcommands: ``state`` (construct/dump), ``le`` (single-state localization),
``oracle`` (closed forms), ``noise`` (apply a channel), ``sweep``
(campaigns), ``bounds`` (proposition report), ``figure`` (preset
campaigns).  Exit codes: 0 success, 1 usage error, 2 numerical-invariant
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ._optimize import OptimizerConfig
from .families import FamilySpec
from .harness import (
    FIGURE_IDS,
    SweepConfig,
    check_propositions,
    export_records,
    figure_data,
    import_records,
    run_sweep,
)
from .linalg import block_entanglement, to_density
from .localization import ble, pauli_le, rle, total_rle
from .noise import PhaseFlipChannel, apply_channel
from .oracles import (
    bound_lines,
    dicke_ble_sum,
    dicke_rle_m,
    dicke_values,
    gghz_values,
    gw_values,
    monogamy_score,
    noisy_gghz_values,
    noisy_w_values,
    wclass3_values,
)
from .states import InvariantViolation, load_state


class UsageError(ValueError):
    pass


def _family_from_args(args) -> FamilySpec:
    if args.family is None:
        raise UsageError("--family is required here")
    coeffs = None
    if getattr(args, "coeffs", None):
        coeffs = [[float(c.real), float(c.imag)] for c in map(complex, args.coeffs)]
    return FamilySpec(
        family=args.family,
        num_qubits=args.num_qubits,
        excitations=getattr(args, "excitations", None),
        coefficients=coeffs,
        seed=args.seed,
    )


def _load_or_build_state(args):
    if getattr(args, "state_file", None):
        with open(args.state_file) as fh:
            return load_state(fh)
    return _family_from_args(args).realize()


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_state(args) -> int:
    state = _load_or_build_state(args)
    if args.density:
        state = to_density(state)
    _emit(state.to_json_dict(), args)
    return 0


def cmd_le(args) -> int:
    state = _load_or_build_state(args)
    cfg = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    out = {"mode": args.mode, "hub": args.hub}
    if args.mode == "ble":
        s0 = tuple(args.s0 or ())
        if args.pauli_only:
            value = pauli_le(state, s0, hub=args.hub) if s0 else block_entanglement(state, args.hub)
        else:
            value = ble(state, s0, hub=args.hub, config=cfg)
        out.update(s0=list(s0), value=value)
    elif args.mode == "rle":
        if args.partner is None:
            raise UsageError("rle needs --partner")
        if args.pauli_only:
            measured = tuple(
                q for q in range(1, state.num_qubits + 1) if q not in (args.hub, args.partner)
            )
            value = pauli_le(state, measured, hub=args.hub, partner=args.partner)
        else:
            value = rle(state, args.partner, hub=args.hub, config=cfg)
        out.update(partner=args.partner, value=value)
    else:  # total
        region = tuple(args.region) if args.region else None
        total, per = total_rle(state, hub=args.hub, region=region, config=cfg)
        out.update(value=total, per_partner={str(k): v for k, v in per.items()})
    _emit(out, args)
    return 0


def cmd_oracle(args) -> int:
    name = args.name
    p = args
    if name == "dicke":
        E, F_i, F_S = dicke_values(p.num_qubits, p.excitations)
        out = {"E": E, "F_i": F_i, "F_S": F_S}
    elif name == "dicke-ble":
        out = {"E_S": dicke_ble_sum(p.num_qubits, p.block, p.excitations)}
    elif name == "dicke-rle-m":
        F_i, F_S = dicke_rle_m(p.num_qubits, p.excitations, p.block)
        out = {"F_i": F_i, "F_S": F_S}
    elif name == "gghz":
        E, F_i, F_S = gghz_values(complex(p.c0), p.num_qubits, p.n0)
        out = {"E": E, "F_i": F_i, "F_S": F_S}
    elif name == "gw":
        E, F_S = gw_values([complex(c) for c in p.coeffs], p.n0)
        out = {"E": E, "F_S": F_S}
    elif name == "wclass3":
        E, F_S = wclass3_values([complex(c) for c in p.coeffs])
        out = {"E": E, "F_S": F_S}
    elif name == "noisy-w":
        E, F_i, F_S = noisy_w_values(p.num_qubits, p.q, p.eta, M=p.total_qubits)
        out = {"E": E, "F_i": F_i, "F_S": F_S}
    elif name == "noisy-gghz":
        E, F_i, F_S = noisy_gghz_values(complex(p.c0), p.num_qubits, p.q, p.eta)
        out = {"E": E, "F_i": F_i, "F_S": F_S}
    elif name == "bounds":
        lines = bound_lines(p.proposition, p.num_qubits)
        out = {
            "lines": [
                {"slope": l.slope, "kind": l.kind, "context": l.context} for l in lines
            ]
        }
    elif name == "monogamy":
        state = _load_or_build_state(p)
        out = {"delta": monogamy_score(state, hub=p.hub)}
    else:
        raise UsageError(f"unknown oracle {name!r}")
    _emit(out, args)
    return 0


def cmd_noise(args) -> int:
    state = _load_or_build_state(args)
    targets = tuple(args.targets) if args.targets else None
    channel = PhaseFlipChannel(q=args.q, eta=args.eta, target_qubits=targets)
    _emit(apply_channel(channel, state).to_json_dict(), args)
    return 0


def _sweep_config_from_args(args) -> SweepConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = SweepConfig.from_json_dict(json.load(fh))
    else:
        cfg = SweepConfig(family=_family_from_args(args), n0=args.n0)
    # CLI flags override config-file values
    if args.samples is not None:
        cfg.sample_count = args.samples
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    if args.out is not None:
        cfg.output_path = args.out
    if args.format is not None:
        cfg.output_format = args.format
    if args.pauli_only:
        cfg.pauli_only = True
    if args.restarts is not None:
        cfg.optimizer = OptimizerConfig(
            restarts=args.restarts,
            max_iterations=cfg.optimizer.max_iterations,
            tolerance=cfg.optimizer.tolerance,
            seed=cfg.optimizer.seed,
        )
    return cfg


def cmd_sweep(args) -> int:
    cfg = _sweep_config_from_args(args)
    records, summary = run_sweep(cfg)
    _emit(summary.to_json_dict(), argparse.Namespace(out=None))
    if not cfg.output_path and args.records_out:
        export_records(records, args.records_out, cfg.output_format, cfg)
    return 0


def cmd_bounds(args) -> int:
    records = import_records(args.records)
    props = [int(x) for x in args.props.split(",")]
    reports = check_propositions(records, props, tolerance=args.tolerance)
    _emit([r.to_json_dict() for r in reports], args)
    return 0


def cmd_figure(args) -> int:
    preset = figure_data(args.id, samples=args.samples or 10_000, seed=args.seed or 0)
    if args.dry_run:
        _emit(
            {
                "figure": preset.figure_id,
                "notes": preset.notes,
                "lines": [
                    {"slope": l.slope, "kind": l.kind, "context": l.context}
                    for l in preset.lines
                ],
                "configs": [c.to_json_dict() for c in preset.configs],
            },
            args,
        )
        return 0
    all_summaries = []
    for j, cfg in enumerate(preset.configs):
        if args.threads is not None:
            cfg.threads = args.threads
        if args.out:
            cfg.output_path = f"{args.out}.part{j}.{cfg.output_format}"
        _, summary = run_sweep(cfg)
        all_summaries.append(summary.to_json_dict())
    _emit({"figure": preset.figure_id, "summaries": all_summaries},
          argparse.Namespace(out=None))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="locent", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_family_opts(p, need_qubits=True):
        p.add_argument("--family", choices=(
            "dicke", "ghz", "gghz", "w", "gw", "magnetization_sector",
            "symmetric_superposition", "magnetization_pair", "haar",
            "w_class_3q", "ghz_class_3q"))
        p.add_argument("--num-qubits", type=int, default=3 if not need_qubits else None)
        p.add_argument("--excitations", type=int)
        p.add_argument("--coeffs", nargs="*", help="complex literals like 0.5+0.5j")
        p.add_argument("--state-file", help="JSON state dump instead of a family")
        p.add_argument("--seed", type=int, default=0)

    ps = sub.add_parser("state", help="construct a state and dump it as JSON")
    add_family_opts(ps)
    ps.add_argument("--density", action="store_true")
    ps.add_argument("--out")
    ps.set_defaults(func=cmd_state)

    pl = sub.add_parser("le", help="BLE / RLE / total RLE of a single state")
    add_family_opts(pl)
    pl.add_argument("--mode", choices=("ble", "rle", "total"), required=True)
    pl.add_argument("--hub", type=int, default=1)
    pl.add_argument("--s0", type=int, nargs="*")
    pl.add_argument("--partner", type=int)
    pl.add_argument("--region", type=int, nargs="*")
    pl.add_argument("--restarts", type=int, default=24)
    pl.add_argument("--pauli-only", action="store_true")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_le)

    po = sub.add_parser("oracle", help="closed-form values as JSON")
    po.add_argument("--name", required=True, choices=(
        "dicke", "dicke-ble", "dicke-rle-m", "gghz", "gw", "wclass3",
        "noisy-w", "noisy-gghz", "bounds", "monogamy"))
    add_family_opts(po, need_qubits=False)
    po.add_argument("--block", type=int, help="useful block size N when it differs from the register")
    po.add_argument("--n0", type=int, default=0)
    po.add_argument("--c0", default="0.70710678118654752+0j")
    po.add_argument("--q", type=float, default=0.0)
    po.add_argument("--eta", type=float, default=0.0)
    po.add_argument("--total-qubits", type=int)
    po.add_argument("--proposition", type=int)
    po.add_argument("--hub", type=int, default=1)
    po.add_argument("--out")
    po.set_defaults(func=cmd_oracle)

    pn = sub.add_parser("noise", help="apply a phase-flip channel and dump the result")
    add_family_opts(pn)
    pn.add_argument("--q", type=float, required=True)
    pn.add_argument("--eta", type=float, default=0.0)
    pn.add_argument("--targets", type=int, nargs="*")
    pn.add_argument("--out")
    pn.set_defaults(func=cmd_noise)

    pw = sub.add_parser("sweep", help="run a sweep campaign")
    add_family_opts(pw)
    pw.add_argument("--config", help="JSON file mirroring SweepConfig")
    pw.add_argument("--n0", type=int, default=0)
    pw.add_argument("--samples", type=int)
    pw.add_argument("--threads", type=int)
    pw.add_argument("--out")
    pw.add_argument("--records-out")
    pw.add_argument("--format", choices=("csv", "jsonl"))
    pw.add_argument("--pauli-only", action="store_true")
    pw.add_argument("--restarts", type=int)
    pw.set_defaults(func=cmd_sweep)

    pb = sub.add_parser("bounds", help="proposition report over exported records")
    pb.add_argument("--records", required=True)
    pb.add_argument("--props", required=True, help="comma-separated ids, e.g. 1,3,4")
    pb.add_argument("--tolerance", type=float, default=1e-6)
    pb.add_argument("--out")
    pb.set_defaults(func=cmd_bounds)

    pf = sub.add_parser("figure", help="run a preset campaign for one figure")
    pf.add_argument("--id", required=True, choices=FIGURE_IDS)
    pf.add_argument("--samples", type=int)
    pf.add_argument("--seed", type=int)
    pf.add_argument("--threads", type=int)
    pf.add_argument("--out", help="records path stem, one part file per sub-campaign")
    pf.add_argument("--dry-run", action="store_true", help="print the preset configs only")
    pf.set_defaults(func=cmd_figure)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        return args.func(args)
    except InvariantViolation as e:
        print(f"numerical invariant failed: {e}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
