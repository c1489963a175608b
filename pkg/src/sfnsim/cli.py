"""Command-line front end: `sfnsim simulate` and `sfnsim required-ebn0`.

`simulate` reads a key = value config file and writes one CSV row per
(beta, Eb/N0) grid point; `required-ebn0` runs the bisection search and
writes one row per beta value. Exit code 0 on success, 2 on config
errors.
"""

from __future__ import annotations

import argparse
import sys

from sfnsim import harness
from sfnsim.harness import SimConfig

_LIST_KEYS = {"beta_db", "ebn0_db"}
_INT_KEYS = {"eta", "nc", "m_r", "iterations", "seed", "error_target", "max_info_bits"}
_FLOAT_KEYS = {"alpha_prop", "d1_m", "spacing_hz"}
_STR_KEYS = {"st_code", "channel"}


def parse_config_file(path: str) -> SimConfig:
    """Parse a simple `key = value` file; lists are comma-separated."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key in _LIST_KEYS:
                values[key] = tuple(float(v) for v in val.split(","))
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _STR_KEYS:
                values[key] = val
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return SimConfig(**values)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--st-code", choices=["alamouti", "sm", "golden", "3d"])
    parser.add_argument("--eta", type=int, choices=[4, 6])
    parser.add_argument("--channel", choices=["rayleigh", "tu6"])
    parser.add_argument("--nc", type=int)
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--alpha-prop", type=float, dest="alpha_prop")
    parser.add_argument("--d1-m", type=float, dest="d1_m")
    parser.add_argument("--error-target", type=int, dest="error_target")
    parser.add_argument(
        "--plot",
        action="store_true",
        help="also render a figure next to the CSV (needs the sfnplots package)",
    )
    parser.add_argument(
        "--include-censored",
        action="store_true",
        dest="include_censored",
        help="with --plot: admit censored / low-confidence rows in the figure",
    )


def _overrides(args: argparse.Namespace) -> dict:
    keys = [
        "st_code",
        "eta",
        "channel",
        "nc",
        "iterations",
        "seed",
        "alpha_prop",
        "d1_m",
        "error_target",
    ]
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="sfnsim", description="SFN MIMO-OFDM link-level simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="BER/FER sweep over a (beta, Eb/N0) grid")
    sim.add_argument("--config", required=True, help="key = value config file")
    sim.add_argument("--out", required=True, help="output CSV path")
    _add_common(sim)

    req = sub.add_parser("required-ebn0", help="required Eb/N0 at a target BER")
    req.add_argument("--target-ber", type=float, default=1e-3, dest="target_ber")
    req.add_argument("--beta-db", default="0", help="comma-separated beta list (dB)")
    req.add_argument("--out", required=True, help="output CSV path")
    _add_common(req)

    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            cfg = parse_config_file(args.config)
            overrides = _overrides(args)
            if overrides:
                cfg = SimConfig(**{**cfg.__dict__, **overrides})
            result = harness.run_sweep(cfg)
            harness.write_sweep_csv(result, args.out)
        else:
            cfg = SimConfig(beta_db=(0.0,), **_overrides(args))
            betas = tuple(float(v) for v in args.beta_db.split(","))
            rows = [
                harness.required_ebn0(cfg, beta, target_ber=args.target_ber)
                for beta in betas
            ]
            harness.write_required_csv(cfg, rows, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    if args.plot:
        return _render_figure(args)
    return 0


def _render_figure(args: argparse.Namespace) -> int:
    """Report path: render a figure file alongside the CSV just written."""
    try:
        from sfnplots.curves import CurveSpec, render
    except ImportError:
        print("error: --plot needs the sfnplots package installed", file=sys.stderr)
        return 2
    kind = "ber" if args.command == "simulate" else "required-ebn0"
    image = args.out.rsplit(".", 1)[0] + ".png"
    try:
        spec = CurveSpec(
            csv_paths=(args.out,),
            kind=kind,
            out_path=image,
            include_censored=args.include_censored,
        )
        for line in render(spec):
            print(line)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {image}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
