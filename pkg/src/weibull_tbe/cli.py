"""Command-line interface: ``weibull-tbe {design,eval,table1,adjust,monitor}``.

Exit codes: 0 success / no signal, 1 usage or config error, 2 signal
detected, 3 numerical failure, 4 adjustment criterion infeasible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import adjustment, estimated, known, simulation
from .errors import InfeasibleCriterionError, NumericalError, RunLengthCapError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SIGNAL = 2
EXIT_NUMERICAL = 3
EXIT_INFEASIBLE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_series(path) -> np.ndarray:
    """One positive value per line; blank lines and ``#`` comments are skipped."""
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                value = float(line)
            except ValueError:
                raise UsageError(f"{path}: line {lineno}: not a number: {line!r}") from None
            if not (math.isfinite(value) and value > 0):
                raise UsageError(f"{path}: line {lineno}: value must be positive, got {line!r}")
            values.append(value)
    if not values:
        raise UsageError(f"{path}: no observations")
    return np.array(values)


def _emit(args, payload: dict, table_rows=None, columns=None):
    """Write ``payload`` as JSON, or ``table_rows`` as CSV / an aligned table."""
    fmt = args.format
    if fmt == "json" or table_rows is None:
        text = json.dumps(payload, indent=2, default=_jsonable) + "\n"
        if fmt == "table" and table_rows is None:
            text = "".join(f"{k:>14}: {_fmt(v)}\n" for k, v in payload.items() if not isinstance(v, (list, dict)))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([[_cell(r[c]) for c in columns] for r in table_rows])
        text = buf.getvalue()
    else:
        widths = [max(len(c), *(len(_fmt(r[c])) for r in table_rows)) for c in columns] if table_rows else [len(c) for c in columns]
        lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
        lines += ["  ".join(_fmt(r[c]).rjust(w) for c, w in zip(columns, widths)) for r in table_rows]
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _jsonable(o):
    if isinstance(o, np.generic):
        return o.item()
    if hasattr(o, "value"):
        return o.value
    raise TypeError(type(o).__name__)


def _cell(v):
    return repr(v) if isinstance(v, float) else v


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(getattr(v, "value", v))


def _single_m(args) -> int:
    values = [m for chunk in args.m or [] for m in chunk]
    if len(values) != 1:
        raise UsageError(f"{args.command} needs exactly one --m")
    return values[0]


def _shift(args) -> known.ShiftSpec:
    return known.ShiftSpec(args.delta1, args.delta2)


def _design_from_args(args) -> tuple[known.ChartDesign, dict]:
    extra = {}
    if getattr(args, "design", None):
        if args.beta is not None or args.phase1:
            raise UsageError("--design cannot be combined with --beta or --phase1")
        data = json.loads(Path(args.design).read_text())
        return known.ChartDesign.from_dict(data), extra
    if args.alpha is None or args.eta is None:
        raise UsageError("--alpha and --eta are required")
    if (args.beta is None) == (args.phase1 is None):
        raise UsageError("give exactly one of --beta (known scale) or --phase1 (estimated scale)")
    if args.beta is not None:
        return known.design_limits(args.alpha, args.eta, args.beta), extra
    est = estimated.mle_scale(read_series(args.phase1), args.eta)
    extra = {"m": est.m, "beta_hat": est.beta_hat}
    return estimated.plugin_limits(est, args.alpha, args.eta), extra


def cmd_design(args) -> int:
    design, extra = _design_from_args(args)
    _emit(args, {**design.to_dict(), **extra})
    return EXIT_OK


def cmd_eval(args) -> int:
    shift = _shift(args)
    known.check_alpha(args.alpha)
    if args.case == "k":
        design = known.design_limits(args.alpha, args.eta, args.beta)
        ps = known.prob_signal(design, shift)
        payload = {"case": "k", "alpha0": args.alpha, "eta0": args.eta, "beta0": args.beta,
                   "delta1": shift.delta1, "delta2": shift.delta2, "ps": ps, "arl": known.arl(design, shift)}
        if 0 < ps < 1:
            for q in (0.05, 0.5, 0.95):
                payload[f"rl_q{round(q * 100):02d}"] = known.geometric_quantile(ps, q)
        _emit(args, payload)
        return EXIT_OK
    m = _single_m(args)
    target = args.target if args.target is not None else 1.0 / args.alpha
    s = estimated.carl_summary(m, args.alpha, target_arl=target, shift=shift, eta0=args.eta)
    w_star, _ = estimated.carl_sup(args.alpha, args.eta, shift)
    payload = {"case": "u", "m": m, "alpha0": args.alpha, "eta0": args.eta,
               "delta1": shift.delta1, "delta2": shift.delta2, "target_arl": target,
               "ecarl": s.acarl, "sdcarl": s.sdcarl, "epc": s.epc,
               "w_star": w_star, "carl_max": s.carl_sup}
    for g, v in s.percentiles.items():
        payload[f"p{round(g * 100):02d}"] = v
    _emit(args, payload)
    return EXIT_OK


_PARAM_RE = re.compile(r"^\(?\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)?$")


def _parse_params(text):
    match = _PARAM_RE.match(text.strip())
    if not match:
        raise UsageError(f"--params expects '(eta0,beta0)', got {text!r}")
    return float(match.group(1)), float(match.group(2))


def _study_config(args) -> simulation.StudyConfig:
    data = {}
    if args.config:
        try:
            data = vars(simulation.load_config(args.config))
        except (OSError, ValueError, TypeError) as exc:
            raise UsageError(f"bad config {args.config}: {exc}") from None
    overrides = {
        "alpha0": args.alpha,
        "replications": args.reps,
        "seed": args.seed,
        "target_arl": args.target,
        "delta1": args.delta1,
        "delta2": args.delta2,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.m:
        data["m_list"] = [m for chunk in args.m for m in chunk]
    if args.params:
        data["param_grid"] = [_parse_params(p) for p in args.params]
    return simulation.StudyConfig(**data)


def cmd_table1(args) -> int:
    cfg = _study_config(args)
    rows = simulation.run_table1(cfg)
    levels = cfg.percentile_levels
    if args.format == "json":
        text = simulation.table_to_json(rows, levels, cfg) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    _emit(args, {}, [r.record(levels) for r in rows], simulation.table_columns(levels))
    return EXIT_OK


_CRITERIA = {"ecarl": "ecarl_match", "epc": "epc_cap", "sdcarl": "sdcarl_cap"}


def cmd_adjust(args) -> int:
    m = _single_m(args)
    target = args.target if args.target is not None else 370.4
    crit = adjustment.AdjustmentCriterion(_CRITERIA.get(args.criterion, args.criterion), target, args.epsilon)
    try:
        res = adjustment.adjust(m, crit, args.alpha)
    except InfeasibleCriterionError as exc:
        _emit(args, {"status": "infeasible", "criterion": crit.kind.value, "message": str(exc),
                     **{k: v for k, v in exc.diagnostics.items()}})
        return EXIT_INFEASIBLE
    mean, sd = estimated.carl_moments(m, res.alpha_adj)
    payload = {
        "status": "ok",
        "criterion": crit.kind.value,
        "m": m,
        "target_arl": target,
        "epsilon": crit.epsilon,
        "alpha_adj": res.alpha_adj,
        "achieved": res.achieved,
        "iterations": res.iterations,
        "bracket_lo": res.bracket[0],
        "bracket_hi": res.bracket[1],
        "verify_ecarl": mean,
        "verify_sdcarl": sd,
        "verify_epc": estimated.exceedance_probability(m, res.alpha_adj, target),
    }
    if args.reps:
        cfg = simulation.StudyConfig(alpha0=res.alpha_adj, param_grid=[(1.0, 1.0)], m_list=[m],
                                     replications=args.reps, seed=args.seed or simulation.DEFAULT_SEED,
                                     target_arl=target)
        mc = simulation.simulate_carl_distribution(cfg, m, (1.0, 1.0))
        payload.update(mc_reps=args.reps, mc_acarl=mc.acarl, mc_sdcarl=mc.sdcarl, mc_epc=mc.epc)
    _emit(args, payload)
    return EXIT_OK


def cmd_monitor(args) -> int:
    if not args.data:
        raise UsageError("--data is required")
    design, _ = _design_from_args(args)
    x = read_series(args.data)
    status = np.where(x < design.LCL, "below_lcl", np.where(x > design.UCL, "above_ucl", "in_limits"))
    records = [{"index": i + 1, "tbe_value": float(v), "status": str(s)} for i, (v, s) in enumerate(zip(x, status))]
    signals = [r["index"] for r in records if r["status"] != "in_limits"]
    summary = {
        "n": len(records),
        "LCL": design.LCL,
        "UCL": design.UCL,
        "signals": len(signals),
        "first_signal": signals[0] if signals else None,
    }
    if args.format == "json":
        _emit(args, {"design": design.to_dict(), "summary": summary, "records": records})
    else:
        _emit(args, {}, records, ["index", "tbe_value", "status"])
        msg = f"first signal at observation {signals[0]} ({len(signals)} total)" if signals else "no signal"
        print(msg, file=sys.stderr)
    return EXIT_SIGNAL if signals else EXIT_OK


def _m_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid m list {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("m must be positive")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--alpha", type=float, help="false-alarm rate alpha0")
    common.add_argument("--eta", type=float, help="in-control shape eta0")
    common.add_argument("--beta", type=float, help="known in-control scale beta0")
    common.add_argument("--m", type=_m_list, action="append", help="Phase I sample size(s), comma separated")
    common.add_argument("--delta1", type=float, default=None, help="scale shift ratio")
    common.add_argument("--delta2", type=float, default=None, help="shape shift ratio")
    common.add_argument("--seed", type=int, help="master random seed")
    common.add_argument("--reps", type=int, help="Monte Carlo replications")
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--format", choices=("csv", "json", "table"), help="default: csv for table1, else table")
    common.add_argument("--config", help="JSON study config (table1)")

    parser = _Parser(prog="weibull-tbe", description="Shewhart charts for Weibull times between events")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("design", parents=[common], help="compute control limits")
    p.add_argument("--phase1", help="Phase I data file for an estimated scale")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("eval", parents=[common], help="run-length performance")
    p.add_argument("--case", choices=("k", "u"), default="k")
    p.add_argument("--target", type=float, help="target ARL for the exceedance probability")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table1", parents=[common], help="Monte Carlo CARL study")
    p.add_argument("--params", action="append", help="'(eta0,beta0)'; repeatable")
    p.add_argument("--target", type=float)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("adjust", parents=[common], help="adjust alpha for nominal IC behaviour")
    p.add_argument("--criterion", choices=(*_CRITERIA, *_CRITERIA.values()), default="ecarl")
    p.add_argument("--target", type=float)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.set_defaults(func=cmd_adjust)

    p = sub.add_parser("monitor", parents=[common], help="check Phase II TBE data against limits")
    p.add_argument("--design", help="design JSON written by 'design --format json'")
    p.add_argument("--phase1", help="Phase I data file for an estimated scale")
    p.add_argument("--data", help="Phase II data file")
    p.set_defaults(func=cmd_monitor)
    return parser


_EVAL_DEFAULTS = {"alpha": 0.0027, "eta": 1.0, "beta": 1.0}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "table1" else "table"
    if args.command == "eval":
        for k, v in _EVAL_DEFAULTS.items():
            if getattr(args, k) is None:
                setattr(args, k, v)
    if args.command != "table1":
        args.delta1 = 1.0 if args.delta1 is None else args.delta1
        args.delta2 = 1.0 if args.delta2 is None else args.delta2
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"weibull-tbe {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, RunLengthCapError) as exc:
        print(f"weibull-tbe {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
