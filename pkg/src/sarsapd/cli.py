"""Command-line front end.

Subcommands map one-to-one onto the experiment families:

  run              one seeded run -> timeseries CSV (+ optional snapshots)
  heatmap          dilemma-grid sweep -> heatmap CSV
  rho-sweep        mixed-population sweep -> rho CSV
  snapshot-series  one run recording lattice snapshots at chosen epochs

Every output lands under --out together with a manifest.txt recording the
full configuration, package version and wall-clock time.  Exit codes:
0 success, 2 configuration error, 1 runtime failure.

A plain key=value file passed via --config mirrors the long flags
(hyphens or underscores both accepted); explicit flags override it.
--preset desk|full switches the size/epochs/repeats defaults between
desk scale and full scale.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dynamics import MODES, TraditionalRule
from .harness import (
    DESK_PRESET,
    FULL_PRESET,
    RunConfig,
    Stopwatch,
    manifest_pairs,
    run_single,
    sweep_heatmap,
    sweep_rho,
    write_manifest,
)
from .lattice import InitScheme
from .learning import LearningParams
from .metrics import write_heatmap_csv, write_rho_csv, write_snapshot, write_timeseries_csv

_PRESETS = {
    "desk": {"size": DESK_PRESET["size"], "epochs": DESK_PRESET["epochs_max"], "repeats": DESK_PRESET["repeats"]},
    "full": {"size": FULL_PRESET["size"], "epochs": FULL_PRESET["epochs_max"], "repeats": FULL_PRESET["repeats"]},
}


def _bounded_float(lo, hi, lo_open=False, hi_open=False):
    def parse(text: str) -> float:
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
        ok = (v > lo if lo_open else v >= lo) and (v < hi if hi_open else v <= hi)
        if not ok:
            lob, hib = "(" if lo_open else "[", ")" if hi_open else "]"
            raise argparse.ArgumentTypeError(f"expected a value in {lob}{lo}, {hi}{hib}, got {text}")
        return v

    return parse


_unit = _bounded_float(0.0, 1.0)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive value, got {text}")
    return v


def _init_scheme(text: str) -> InitScheme:
    try:
        return InitScheme.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _int_list(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    return tuple(int(tok) for tok in text.split(","))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(","))


def _add_common(sp, *, dilemma=True, population=True):
    sp.add_argument("--size", type=_positive_int, default=200, help="lattice side length")
    sp.add_argument("--epochs", type=_positive_int, default=500_000, help="epoch horizon")
    sp.add_argument("--init", type=_init_scheme, default=InitScheme.random(0.5),
                    help="initial strategies: random:<p0> or cluster:<half-width>")
    if population:
        sp.add_argument("--mode", choices=MODES, default="traditional", help="agent population")
        sp.add_argument("--rho", type=_unit, default=0.5,
                        help="learner fraction (mixed mode only)")
    sp.add_argument("--traditional-rule", choices=[r.value for r in TraditionalRule],
                    default="fermi", help="how traditional agents decide in mixed runs")
    if dilemma:
        sp.add_argument("--dg", type=_unit, default=0.1, help="temptation dilemma scalar")
        sp.add_argument("--dr", type=_unit, default=0.1, help="sucker dilemma scalar")
        sp.add_argument("--ds", type=_unit, default=None,
                        help="dilemma strength; sets dg = dr = ds when given")
    sp.add_argument("--alpha", type=_bounded_float(0.0, 1.0, lo_open=True), default=0.3,
                    help="learning rate")
    sp.add_argument("--gamma", type=_bounded_float(0.0, 1.0, hi_open=True), default=0.9,
                    help="discount rate")
    sp.add_argument("--epsilon", type=_unit, default=0.02, help="exploration rate")
    sp.add_argument("--noise", type=_positive_float, default=0.1, help="Fermi noise K")
    sp.add_argument("--seed", type=int, default=0, help="base random seed")
    sp.add_argument("--record-every", type=_positive_int, default=1,
                    help="epoch stride between timeseries rows")
    sp.add_argument("--tail-window", type=_positive_int, default=1000,
                    help="epochs averaged when a run ends without absorbing")
    sp.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for repeats")
    sp.add_argument("--out", default="out", help="output directory")
    sp.add_argument("--preset", choices=sorted(_PRESETS),
                    help="desk or full scale defaults for size/epochs/repeats")
    sp.add_argument("--config", help="key=value file mirroring the flags; flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sarsapd",
        description="Spatial prisoner's dilemma on a periodic lattice with "
        "SARSA-learning agents.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    sp = sub.add_parser("run", help="single run -> timeseries CSV",
                        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_common(sp)
    sp.add_argument("--snapshot-epochs", type=_int_list, default=(),
                    help="comma-separated epochs to snapshot (0 = initial state)")
    sp.set_defaults(func=_cmd_run)
    subs["run"] = sp

    sp = sub.add_parser("heatmap", help="dilemma-grid sweep -> heatmap CSV",
                        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_common(sp)
    sp.add_argument("--step", type=_positive_float, default=0.01, help="dg/dr grid step")
    sp.add_argument("--repeats", type=_positive_int, default=20, help="seeds per grid point")
    sp.add_argument("--dg-min", type=_unit, default=0.0)
    sp.add_argument("--dg-max", type=_unit, default=1.0)
    sp.add_argument("--dr-min", type=_unit, default=0.0)
    sp.add_argument("--dr-max", type=_unit, default=1.0)
    sp.set_defaults(func=_cmd_heatmap)
    subs["heatmap"] = sp

    sp = sub.add_parser("rho-sweep", help="mixed-population sweep -> rho CSV",
                        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_common(sp, dilemma=False, population=False)
    sp.add_argument("--ds-values", type=_float_list, default=(0.1,),
                    help="comma-separated dilemma strengths")
    sp.add_argument("--rho-values", type=_float_list, default=(0.0, 0.25, 0.5, 0.75, 1.0),
                    help="comma-separated learner fractions")
    sp.add_argument("--repeats", type=_positive_int, default=20, help="seeds per point")
    sp.set_defaults(func=_cmd_rho_sweep)
    subs["rho-sweep"] = sp

    sp = sub.add_parser("snapshot-series", help="one run recording lattice snapshots",
                        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_common(sp)
    sp.add_argument("--snapshot-epochs", type=_int_list, default=(0, 100, 1000, 10_000),
                    help="comma-separated epochs to snapshot (0 = initial state)")
    sp.set_defaults(func=_cmd_run)  # identical flow; differs only in defaults
    subs["snapshot-series"] = sp

    parser._subcommands = subs
    return parser


def _run_config(args) -> RunConfig:
    return RunConfig(
        size=args.size,
        epochs_max=args.epochs,
        init=args.init,
        mode=getattr(args, "mode", "traditional"),
        rho=getattr(args, "rho", 0.5),
        traditional_rule=TraditionalRule(args.traditional_rule),
        dg=getattr(args, "dg", 0.1),
        dr=getattr(args, "dr", 0.1),
        ds=getattr(args, "ds", None),
        learning=LearningParams(
            alpha=args.alpha, gamma=args.gamma, epsilon=args.epsilon, k=args.noise
        ),
        seed=args.seed,
        record_every=args.record_every,
        snapshot_epochs=tuple(getattr(args, "snapshot_epochs", ())),
        tail_window=args.tail_window,
    )


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_run(args) -> int:
    cfg = _run_config(args)
    out = _outdir(args)
    with Stopwatch() as sw:
        res = run_single(cfg)
    write_timeseries_csv(out / "timeseries.csv", res.metrics)
    for epoch, codes in sorted(res.snapshots.items()):
        write_snapshot(out / f"snapshot_e{epoch}.txt", codes, epoch)
    write_manifest(
        out / "manifest.txt",
        manifest_pairs(cfg, {"command": args.command}, sw.elapsed),
    )
    print(
        f"final_coop={res.final_coop:.6g} terminated_by={res.terminated_by.value} "
        f"epochs={res.epochs_run} out={out}"
    )
    return 0


def _cmd_heatmap(args) -> int:
    cfg = _run_config(args)
    out = _outdir(args)
    with Stopwatch() as sw:
        rows = sweep_heatmap(
            cfg,
            (args.dg_min, args.dg_max),
            (args.dr_min, args.dr_max),
            args.step,
            args.repeats,
            jobs=args.jobs,
        )
    write_heatmap_csv(out / "heatmap.csv", rows)
    extra = {
        "command": "heatmap",
        "step": args.step,
        "repeats": args.repeats,
        "dg_range": f"{args.dg_min}:{args.dg_max}",
        "dr_range": f"{args.dr_min}:{args.dr_max}",
    }
    write_manifest(out / "manifest.txt", manifest_pairs(cfg, extra, sw.elapsed))
    print(f"heatmap rows={len(rows)} out={out}")
    return 0


def _cmd_rho_sweep(args) -> int:
    cfg = _run_config(args)
    out = _outdir(args)
    with Stopwatch() as sw:
        rows = sweep_rho(cfg, args.ds_values, args.rho_values, args.repeats, jobs=args.jobs)
    write_rho_csv(out / "rho.csv", rows)
    extra = {
        "command": "rho-sweep",
        "ds_values": ",".join(str(v) for v in args.ds_values),
        "rho_values": ",".join(str(v) for v in args.rho_values),
        "repeats": args.repeats,
    }
    write_manifest(out / "manifest.txt", manifest_pairs(cfg, extra, sw.elapsed))
    print(f"rho rows={len(rows)} out={out}")
    return 0


def _expand_config(argv: list[str]) -> list[str]:
    """Splice --config file entries in as flags, before the explicit ones."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return argv
    tokens: list[str] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        tokens += ["--" + key.strip().replace("_", "-"), value.strip()]
    pos = 1 if argv and not argv[0].startswith("-") else 0
    return argv[:pos] + tokens + argv[pos:]


def _apply_preset(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    name = None
    for i, tok in enumerate(argv):
        if tok == "--preset" and i + 1 < len(argv):
            name = argv[i + 1]
        elif tok.startswith("--preset="):
            name = tok.split("=", 1)[1]
    preset = _PRESETS.get(name or "")
    if preset is None:
        return
    for sp in parser._subcommands.values():
        known = {a.dest for a in sp._actions}
        sp.set_defaults(**{k: v for k, v in preset.items() if k in known})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv)
    except OSError as e:
        print(f"error: cannot read config file: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    parser = build_parser()
    _apply_preset(parser, argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
