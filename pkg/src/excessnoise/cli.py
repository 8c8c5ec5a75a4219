"""Command-line front end: sweeps, strategy reports and oracle cross-checks.

Exit status is 0 on success, 1 when a numerical tolerance is breached and 2
for configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds, thermal
from .channels import ChannelSpec, probe_output, thermal_state
from .divergences import divergences, qfi_finite_difference
from .errors import ConfigError, ExcessNoiseError, MomentMismatch, StepTooLarge
from .fock import TruncationConfig, dilation_output, moments_covariance, spectral_divergences
from .report import convert_entropic
from .strategy import StrategySpec, bound_gap_report, monte_carlo_discrimination

SCHEMA_VERSION = "1.0"
ORACLE_TOL = 1e-5

log = logging.getLogger("excessnoise")

COMMANDS = ("divergences", "sweep", "strategy", "oracle-check", "qfi")


@dataclass
class RunConfig:
    command: str
    nb1: float
    eta: float | None = None
    gain: float | None = None
    nb2: float | None = None
    ns: list[float] = field(default_factory=lambda: [1000.0])
    m: int = 1
    epsilon: float = 0.05
    alphas: list[float] = field(default_factory=list)
    nmax: int | None = None
    tail_tol: float = 1e-6
    seed: int = 0
    trials: int = 0
    with_oracle: bool = False
    log_base: str = "nats"
    out: str | None = None
    fmt: str | None = None

    def __post_init__(self):
        if (self.eta is None) == (self.gain is None):
            raise ConfigError("give exactly one of --eta or --gain")
        if self.eta is not None and not 0 <= self.eta <= 1:
            raise ConfigError(f"--eta {self.eta} outside [0, 1]")
        if self.gain is not None and self.gain < 1:
            raise ConfigError(f"--gain {self.gain} must be >= 1")
        if self.nb1 < 0 or (self.nb2 is not None and self.nb2 < 0):
            raise ConfigError("excess noise must be non-negative")
        if self.command != "qfi" and self.nb2 is None:
            raise ConfigError(f"{self.command} needs --nb2")
        if self.nb2 is not None and self.nb2 == self.nb1 and self.command in ("strategy", "sweep", "divergences"):
            raise ConfigError("--nb1 and --nb2 must differ")
        if any(x < 0 for x in self.ns):
            raise ConfigError("--ns values must be non-negative")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ConfigError("--ns list must be strictly increasing")
        if self.command != "sweep" and len(self.ns) != 1:
            raise ConfigError(f"{self.command} takes a single --ns value")
        if self.m < 1:
            raise ConfigError("--m must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ConfigError("--eps must lie in (0, 1)")
        if any(a <= 0 or a == 1 for a in self.alphas):
            raise ConfigError("--alpha values must lie in (0, 1) U (1, inf)")
        if self.trials and self.trials < 1000:
            raise ConfigError("--trials must be 0 or at least 1000")
        if self.command == "oracle-check" and self.nmax is None:
            raise ConfigError("oracle-check needs --nmax")
        if self.fmt is None:
            self.fmt = "csv" if self.command == "sweep" else "json"

    def channel(self, n_b: float) -> ChannelSpec:
        if self.eta is not None:
            return ChannelSpec.thermal(self.eta, n_b)
        return ChannelSpec.amplifier(self.gain, n_b)

    def inputs(self) -> dict:
        keys = ("eta", "gain", "nb1", "nb2", "ns", "m", "epsilon", "alphas", "nmax", "tail_tol", "seed", "log_base")
        out = {k: getattr(self, k) for k in keys}
        out["ns"] = self.ns if self.command == "sweep" else self.ns[0]
        return out


def _entropic(value: float, cfg: RunConfig, power: int = 1) -> float:
    return convert_entropic(value, "nats", cfg.log_base, power)


# ------------------------------------------------------------------ commands


def _sweep_row(cfg: RunConfig, n_s: float) -> dict:
    s1 = probe_output(cfg.channel(cfg.nb1), n_s)
    s2 = probe_output(cfg.channel(cfg.nb2), n_s)
    gauss = divergences(s1, s2)
    limit = thermal.thermal_divergences(cfg.nb1, cfg.nb2)
    row = {
        "n_s": n_s,
        "d_gauss": _entropic(gauss.d, cfg),
        "d_limit": _entropic(limit.d, cfg),
        "v_gauss": _entropic(gauss.v, cfg, 2),
        "v_limit": _entropic(limit.v, cfg, 2),
        "f_gauss": gauss.f,
        "f_limit": limit.f,
    }
    if cfg.nb1 > 0:
        fam = lambda x: probe_output(cfg.channel(x), n_s)  # noqa: E731
        row["qfi_fd"] = qfi_finite_difference(fam, cfg.nb1).value
        row["qfi_limit"] = thermal.qfi_thermal(cfg.nb1)
    else:
        row["qfi_fd"] = row["qfi_limit"] = math.nan
    row["gap_d"] = abs(row["d_gauss"] - row["d_limit"])
    row["gap_v"] = abs(row["v_gauss"] - row["v_limit"])
    row["gap_f"] = abs(row["f_gauss"] - row["f_limit"])
    row["gap_qfi"] = abs(row["qfi_fd"] - row["qfi_limit"])
    row["log_base"] = cfg.log_base
    return row


GAP_COLUMNS = ("gap_d", "gap_v", "gap_f", "gap_qfi")


def loglog_slope(xs, ys) -> float:
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    ok = (xs > 0) & (ys > 0) & np.isfinite(ys)
    if ok.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log(xs[ok]), np.log(ys[ok]), 1)[0])


def run_sweep(cfg: RunConfig) -> dict:
    """One row per squeezing value plus fitted log-log slopes of the gap columns."""
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(lambda n: _sweep_row(cfg, n), cfg.ns))
    slopes = None
    if len(cfg.ns) < 2:
        log.warning("a single --ns value: slope fit omitted")
    else:
        slopes = {c: loglog_slope(cfg.ns, [r[c] for r in rows]) for c in GAP_COLUMNS}
    return {"schema_version": SCHEMA_VERSION, "command": "sweep", "inputs": cfg.inputs(), "rows": rows, "slopes": slopes}


def _oracle_residuals(cfg: RunConfig, n_s: float) -> dict:
    tcfg = TruncationConfig(cfg.nmax, cfg.tail_tol)
    ch1, ch2 = cfg.channel(cfg.nb1), cfg.channel(cfg.nb2)
    rho1 = dilation_output(ch1, n_s, tcfg, moment_tol=None)
    rho2 = dilation_output(ch2, n_s, tcfg, moment_tol=None)
    fock = spectral_divergences(rho1, rho2)
    gauss = divergences(probe_output(ch1, n_s), probe_output(ch2, n_s))
    moment = max(
        float(np.abs(moments_covariance(rho) - probe_output(ch, n_s).cov).max())
        for rho, ch in ((rho1, ch1), (rho2, ch2))
    )
    return {
        "d": abs(_entropic(fock.d - gauss.d, cfg)),
        "v": abs(_entropic(fock.v - gauss.v, cfg, 2)),
        "f": abs(fock.f - gauss.f),
        "covariance": moment,
        "tail_mass": max(rho1.tail_mass, rho2.tail_mass),
    }


def run_report(cfg: RunConfig) -> dict:
    """Single structured record for the ``divergences``, ``strategy``, ``oracle-check`` and ``qfi`` commands."""
    n_s = cfg.ns[0]
    doc = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "inputs": cfg.inputs(), "log_base": cfg.log_base}
    if cfg.command == "divergences":
        gauss = divergences(probe_output(cfg.channel(cfg.nb1), n_s), probe_output(cfg.channel(cfg.nb2), n_s))
        limit = thermal.thermal_divergences(cfg.nb1, cfg.nb2)
        doc["gaussian"] = {"d": _entropic(gauss.d, cfg), "v": _entropic(gauss.v, cfg, 2), "f": gauss.f}
        doc["thermal_limit"] = {"d": _entropic(limit.d, cfg), "v": _entropic(limit.v, cfg, 2), "f": limit.f}
        doc["renyi_limit"] = {
            str(a): _entropic(thermal.renyi_thermal(a, cfg.nb1, cfg.nb2), cfg) for a in cfg.alphas
        }
    elif cfg.command == "strategy":
        spec = StrategySpec(cfg.channel(cfg.nb1), cfg.channel(cfg.nb2), cfg.m, cfg.epsilon)
        res = bound_gap_report(spec, n_s)
        bnd = bounds.bound_report(cfg.m, cfg.epsilon, cfg.nb1, cfg.nb2)
        doc["strategy"] = {
            "n_eff_1": res.n_eff_1,
            "n_eff_2": res.n_eff_2,
            "dh_strategy": _entropic(res.dh_strategy, cfg),
            "dh_environment": _entropic(res.dh_environment, cfg),
            "second_order": _entropic(res.second_order, cfg),
            "gap": _entropic(res.gap, cfg),
        }
        doc["bounds"] = {
            "d": _entropic(bnd.d, cfg),
            "v": _entropic(bnd.v, cfg, 2),
            "cramer_rao_floor": bnd.cr_variance_floor,
        }
        if cfg.trials:
            mc = monte_carlo_discrimination(cfg.m, cfg.nb1, cfg.nb2, cfg.epsilon, cfg.trials, cfg.seed)
            doc["monte_carlo"] = asdict(mc)
        if cfg.with_oracle:
            if cfg.nmax is None:
                raise ConfigError("--with-oracle needs --nmax")
            doc["oracle_residuals"] = _oracle_residuals(cfg, n_s)
    elif cfg.command == "oracle-check":
        res = _oracle_residuals(cfg, n_s)
        doc["oracle_residuals"] = res
        doc["tolerance"] = ORACLE_TOL
        doc["passed"] = all(res[k] <= ORACLE_TOL for k in ("d", "v", "f", "covariance"))
    elif cfg.command == "qfi":
        fam = lambda x: probe_output(cfg.channel(x), n_s)  # noqa: E731
        est = qfi_finite_difference(fam, cfg.nb1)
        doc["qfi"] = {
            "sqrt_fidelity": est.sqrt_fidelity,
            "log_fidelity": est.log_fidelity,
            "extrapolated": est.extrapolated,
            "delta": est.delta,
            "limit": thermal.qfi_thermal(cfg.nb1),
            "thermal_family": qfi_finite_difference(thermal_state, cfg.nb1).value,
        }
        doc["cramer_rao_floor"] = bounds.cramer_rao(cfg.m, cfg.nb1)
    else:  # pragma: no cover - argparse restricts the choices
        raise ConfigError(f"unknown command {cfg.command}")
    return doc


# -------------------------------------------------------------------- output


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _flatten(doc: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in doc.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = ";".join(_fmt(x) for x in v)
        else:
            out[key] = v
    return out


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, allow_nan=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if doc["command"] == "sweep":
        header = list(doc["rows"][0])
        writer.writerow(header)
        for row in doc["rows"]:
            writer.writerow([_fmt(row[h]) for h in header])
        if doc["slopes"] is not None:
            writer.writerow(["slope" if h == "n_s" else _fmt(doc["slopes"].get(h, "")) for h in header])
    else:
        flat = _flatten({k: v for k, v in doc.items() if k != "command"})
        writer.writerow(list(flat))
        writer.writerow([_fmt(v) for v in flat.values()])
    return buf.getvalue()


# ------------------------------------------------------------------- parsing


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    chan = common.add_mutually_exclusive_group(required=True)
    chan.add_argument("--eta", type=float, help="transmissivity of a thermal-loss channel")
    chan.add_argument("--gain", type=float, help="gain of an amplifier channel")
    common.add_argument("--nb1", type=float, required=True, help="excess noise under the first hypothesis")
    common.add_argument("--nb2", type=float, help="excess noise under the second hypothesis")
    common.add_argument("--ns", type=_float_list, default=[1000.0], help="probe photon number (comma list for sweep)")
    common.add_argument("--m", type=int, default=1, help="number of channel uses")
    common.add_argument("--eps", type=float, default=0.05, help="type-I error budget")
    common.add_argument("--alpha", type=_float_list, default=[], help="Rényi orders, comma separated")
    common.add_argument("--nmax", type=int, help="Fock cutoff for oracle checks")
    common.add_argument("--tail-tol", type=float, default=1e-6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--log-base", choices=("nats", "bits"), default="nats")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), dest="fmt")

    parser = argparse.ArgumentParser(prog="excessnoise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("divergences", parents=[common], help="D, V, F of two probe outputs and their thermal limits")
    sub.add_parser("sweep", parents=[common], help="convergence table over a list of --ns values")
    strat = sub.add_parser("strategy", parents=[common], help="photodetection strategy vs environment bound")
    strat.add_argument("--trials", type=int, default=0, help="Monte Carlo trials (0 to skip)")
    strat.add_argument("--with-oracle", action="store_true", help="append Fock-oracle residuals")
    sub.add_parser("oracle-check", parents=[common], help="Gaussian path vs truncated Fock oracle")
    sub.add_parser("qfi", parents=[common], help="finite-difference quantum Fisher information")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        eta=args.eta,
        gain=args.gain,
        nb1=args.nb1,
        nb2=args.nb2,
        ns=list(args.ns),
        m=args.m,
        epsilon=args.eps,
        alphas=list(args.alpha),
        nmax=args.nmax,
        tail_tol=args.tail_tol,
        seed=args.seed,
        trials=getattr(args, "trials", 0),
        with_oracle=getattr(args, "with_oracle", False),
        log_base=args.log_base,
        out=args.out,
        fmt=args.fmt,
    )


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        doc = run_sweep(cfg) if cfg.command == "sweep" else run_report(cfg)
    except ConfigError as exc:
        print(f"excessnoise: error: {exc}", file=sys.stderr)
        return 2
    except (StepTooLarge, MomentMismatch) as exc:
        print(f"excessnoise: numerical failure: {exc}", file=sys.stderr)
        return 1
    except ExcessNoiseError as exc:
        print(f"excessnoise: error: {exc}", file=sys.stderr)
        return 2
    text = render(doc, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if doc.get("passed") is False:
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
