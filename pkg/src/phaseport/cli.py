"""Command-line front end: channel reports, coupling analysis, grid sweeps.

Channel specifiers are ``builtin:name(param=value,...)`` or
``file:path.json``.  Sweeps write CSV with one row per (theta, param) grid
cell, suitable for rendering heat maps with external tools.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import criteria, injectivity, interferometer
from .channels import KrausFamily, load_channel, random_kraus_family, save_channel
from .errors import (
    DomainError,
    GridTooLarge,
    ParamOutOfRange,
    PhaseportError,
    UnknownChannel,
)
from .linalg import RankTolerance, herm_eig
from .zoo import BUILTIN_PARAMS, builtin_names, zoo

__all__ = [
    "ChannelSpecifier",
    "SweepGrid",
    "parse_channel_spec",
    "build_channel",
    "report",
    "couple_report",
    "sweep",
    "main",
]

MAX_GRID_CELLS = 10**6

_SPEC_RE = re.compile(r"^builtin:([a-z_][a-z0-9_]*)(?:\((.*)\))?$")


@dataclass(frozen=True)
class ChannelSpecifier:
    """Either a builtin name with bound parameters or a JSON file path."""

    builtin: str | None = None
    params: dict | None = None
    file: str | None = None

    def describe(self) -> str:
        if self.file is not None:
            return f"file:{self.file}"
        args = ",".join(f"{k}={v}" for k, v in (self.params or {}).items())
        return f"builtin:{self.builtin}({args})"


def parse_channel_spec(text: str) -> ChannelSpecifier:
    """Parse ``builtin:name(a=1,b=2)`` or ``file:path.json``."""
    text = text.strip()
    if text.startswith("file:"):
        path = text[len("file:") :]
        if not path:
            raise DomainError("empty file path in channel spec")
        return ChannelSpecifier(file=path)
    m = _SPEC_RE.match(text)
    if not m:
        raise DomainError(
            f"cannot parse channel spec {text!r}; expected "
            "'builtin:name(param=value,...)' or 'file:path.json'"
        )
    name, arglist = m.group(1), m.group(2)
    params: dict = {}
    if arglist:
        for item in arglist.split(","):
            item = item.strip()
            if not item:
                continue
            if "=" not in item:
                raise DomainError(f"malformed parameter {item!r} (need name=value)")
            key, value = item.split("=", 1)
            key, value = key.strip(), value.strip()
            try:
                params[key] = float(value)
            except ValueError:
                params[key] = value
    return ChannelSpecifier(builtin=name, params=params)


def build_channel(spec: ChannelSpecifier, **extra) -> KrausFamily:
    if spec.file is not None:
        return load_channel(spec.file)
    params = dict(spec.params or {})
    params.update(extra)
    return zoo(spec.builtin, **params)


def report(spec: ChannelSpecifier, search_restarts: int = 8, seed: int = 0) -> dict:
    """Single-channel report: defects, obstruction verdict, indices.

    For qubit inputs a positive index decides pure-state injectivity; for
    larger inputs a vanishing index only shows some state pair collides,
    so a short pure-pair search is run and the conclusion may stay
    'undecided'.
    """
    fam = build_channel(spec)
    tol = RankTolerance()
    verdict = criteria.rank_obstruction(fam, tol)
    rep = injectivity.injectivity_report(fam, tol)
    d = fam.in_dim

    if rep.i_min > tol.absolute_floor:
        conclusion = "injective"
    elif d == 2:
        conclusion = "not_pure_state_injective"
    else:
        found = injectivity.pure_collision_search(
            fam, restarts=search_restarts, seed=seed
        )
        conclusion = (
            "not_pure_state_injective" if found.min_value < 1e-10 else "undecided"
        )

    return {
        "channel": spec.describe(),
        "in_dim": fam.in_dim,
        "out_dim": fam.out_dim,
        "num_kraus": fam.num_ops,
        "trace_defect": fam.trace_defect,
        "parseval_defect": fam.parseval_defect,
        "dim_S": verdict.dim_S,
        "bound_N": verdict.bound_N,
        "verdict": verdict.to_json_dict(),
        "i_min": rep.i_min,
        "i_avg": rep.i_avg,
        "op_norm": rep.op_norm,
        "kernel_dim": rep.kernel_dim,
        "pure_injectivity": conclusion,
    }


def certify(spec: ChannelSpecifier) -> dict:
    """Obstruction verdict alone (rank criterion, sharpened by the
    complementary system dimension)."""
    fam = build_channel(spec)
    verdict = criteria.rank_obstruction(fam)
    return {"channel": spec.describe(), "verdict": verdict.to_json_dict()}


def couple_report(
    spec_a: ChannelSpecifier, spec_b: ChannelSpecifier, theta: float
) -> dict:
    """Two-arm coupling report at one phase, with a p=1/2 classical-mix
    comparison."""
    arm_a = build_channel(spec_a)
    arm_b = build_channel(spec_b)
    tol = RankTolerance()

    t = interferometer.cross_operator(arm_a, arm_b)
    t_eigs = np.linalg.eigvals(t)
    e_mat = interferometer.e_theta(arm_a, arm_b, theta)
    e_spectrum, _ = herm_eig(e_mat)
    frame_ok = bool(e_spectrum[0] > tol.absolute_floor)
    port = interferometer.port_map(arm_a, arm_b, theta)
    port_rep = injectivity.injectivity_report(port.family, tol)
    dim_s = interferometer.port_system_dim(arm_a, arm_b, theta, tol)
    bound = criteria.psic_dim_bound(arm_a.in_dim)

    if not frame_ok:
        verdict = criteria.Verdict(
            criteria.NOT_PHASE_RETRIEVABLE,
            criteria.REASON_PORT_FRAME,
            dim_s,
            bound,
            f"lambda_min(E_theta) = {e_spectrum[0]:.3e}: port operators do "
            "not form a frame, so some pure pair collides",
        )
    elif dim_s <= bound:
        verdict = criteria.Verdict(
            criteria.NOT_PHASE_RETRIEVABLE,
            criteria.REASON_RANK,
            dim_s,
            bound,
            f"port dim_S = {dim_s} <= N = {bound}",
        )
    else:
        verdict = criteria.Verdict(
            criteria.INCONCLUSIVE, criteria.REASON_NONE, dim_s, bound,
            f"port dim_S = {dim_s} > N = {bound}",
        )

    mix = interferometer.classical_mix(arm_a, arm_b, 0.5)
    mix_rep = injectivity.injectivity_report(mix, tol)
    mix_dim = criteria.complementary_system_dim(mix, tol)

    return {
        "arm_a": spec_a.describe(),
        "arm_b": spec_b.describe(),
        "theta": float(theta),
        "t_eigenvalues": [[float(z.real), float(z.imag)] for z in t_eigs],
        "degenerate_thetas": interferometer.degenerate_thetas(arm_a, arm_b, tol),
        "e_theta_spectrum": [float(w) for w in e_spectrum],
        "frame_ok": frame_ok,
        "port_dim_S": dim_s,
        "port_i_min": port_rep.i_min,
        "port_i_avg": port_rep.i_avg,
        "verdict": verdict.to_json_dict(),
        "classical_mix": {
            "p": 0.5,
            "dim_S": mix_dim,
            "i_min": mix_rep.i_min,
        },
    }


@dataclass(frozen=True)
class SweepGrid:
    """(theta, param) grid: theta over [theta_min, theta_max) half-open,
    param over [param_min, param_max] inclusive."""

    param_name: str
    param_min: float
    param_max: float
    param_steps: int
    theta_min: float = 0.0
    theta_max: float = 2 * np.pi
    theta_steps: int = 64

    def __post_init__(self):
        if self.theta_steps < 2 or self.param_steps < 2:
            raise DomainError("grid needs at least 2 steps per axis")
        if not self.theta_min < self.theta_max:
            raise DomainError("theta_min must be < theta_max")
        if not self.param_min < self.param_max:
            raise DomainError("param_min must be < param_max")
        if self.theta_steps * self.param_steps > MAX_GRID_CELLS:
            raise GridTooLarge(
                f"grid has {self.theta_steps * self.param_steps} cells; "
                f"limit is {MAX_GRID_CELLS}"
            )

    @property
    def thetas(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.theta_steps,
                           endpoint=False)

    @property
    def params(self) -> np.ndarray:
        return np.linspace(self.param_min, self.param_max, self.param_steps)


def _free_param_arm(
    spec_a: ChannelSpecifier, spec_b: ChannelSpecifier, name: str
) -> int:
    """Index (0 or 1) of the arm exposing the named unbound parameter."""
    exposes = []
    for idx, spec in enumerate((spec_a, spec_b)):
        if spec.builtin is None:
            continue
        if spec.builtin not in BUILTIN_PARAMS:
            raise UnknownChannel(f"unknown builtin {spec.builtin!r}")
        declared = BUILTIN_PARAMS[spec.builtin]
        if name in declared and name not in (spec.params or {}):
            exposes.append(idx)
    if len(exposes) != 1:
        raise DomainError(
            f"exactly one arm must expose the free parameter {name!r}; "
            f"{len(exposes)} do"
        )
    return exposes[0]


def sweep(
    spec_a: ChannelSpecifier,
    spec_b: ChannelSpecifier,
    grid: SweepGrid,
    out_path,
) -> None:
    """Evaluate the port map over the grid and write CSV.

    Header: theta,param,i_min,i_avg,lambda_min_E,dim_S,frame_ok.
    Rows are param-major (all thetas for the first param value first).
    """
    free_arm = _free_param_arm(spec_a, spec_b, grid.param_name)
    tol = RankTolerance()
    lines = ["theta,param,i_min,i_avg,lambda_min_E,dim_S,frame_ok"]
    for param in grid.params:
        arms = [spec_a, spec_b]
        built = [
            build_channel(arms[i], **({grid.param_name: float(param)} if i == free_arm else {}))
            for i in range(2)
        ]
        arm_a, arm_b = built
        for theta in grid.thetas:
            port = interferometer.port_map(arm_a, arm_b, theta)
            tm = injectivity.transfer_matrix(port.family)
            i_min = injectivity.cp_injectivity(tm)
            i_avg = injectivity.avg_injectivity(tm)
            w, _ = herm_eig(interferometer.e_theta(arm_a, arm_b, theta))
            lam_min = float(w[0])
            dim_s = interferometer.port_system_dim(arm_a, arm_b, theta, tol)
            frame_ok = lam_min > tol.absolute_floor
            lines.append(
                f"{theta:.12g},{param:.12g},{i_min:.12g},{i_avg:.12g},"
                f"{lam_min:.12g},{dim_s},{'true' if frame_ok else 'false'}"
            )
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_param_range(text: str) -> tuple[str, float, float, int]:
    m = re.match(r"^([a-z_][a-z0-9_]*)=([^:]+):([^:]+):(\d+)$", text.strip())
    if not m:
        raise DomainError(
            f"cannot parse --param {text!r}; expected name=min:max:steps"
        )
    return m.group(1), float(m.group(2)), float(m.group(3)), int(m.group(4))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseport",
        description="Phase retrievability analysis of quantum channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="single-channel report (JSON)")
    p_report.add_argument("spec", help="builtin:name(p=v,...) or file:path.json")

    p_certify = sub.add_parser("certify", help="obstruction verdict only (JSON)")
    p_certify.add_argument("spec")

    p_couple = sub.add_parser("couple", help="two-arm coupling report (JSON)")
    p_couple.add_argument("spec_a")
    p_couple.add_argument("spec_b")
    p_couple.add_argument("--theta", type=float, required=True,
                          help="relative phase in radians")

    p_sweep = sub.add_parser("sweep", help="(theta, param) grid sweep to CSV")
    p_sweep.add_argument("spec_a")
    p_sweep.add_argument("spec_b")
    p_sweep.add_argument("--param", required=True, metavar="NAME=MIN:MAX:STEPS")
    p_sweep.add_argument("--theta-steps", type=int, default=64)
    p_sweep.add_argument("--out", required=True)

    p_rand = sub.add_parser("random", help="write a random TP channel as JSON")
    p_rand.add_argument("--dim", type=int, required=True)
    p_rand.add_argument("--out-dim", type=int, required=True)
    p_rand.add_argument("--kraus", type=int, required=True)
    p_rand.add_argument("--seed", type=int, default=0)
    p_rand.add_argument("--out", required=True)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            print(json.dumps(report(parse_channel_spec(args.spec)), indent=1))
        elif args.command == "certify":
            print(json.dumps(certify(parse_channel_spec(args.spec)), indent=1))
        elif args.command == "couple":
            result = couple_report(
                parse_channel_spec(args.spec_a),
                parse_channel_spec(args.spec_b),
                args.theta,
            )
            print(json.dumps(result, indent=1))
        elif args.command == "sweep":
            name, lo, hi, steps = _parse_param_range(args.param)
            grid = SweepGrid(
                param_name=name,
                param_min=lo,
                param_max=hi,
                param_steps=steps,
                theta_steps=args.theta_steps,
            )
            sweep(
                parse_channel_spec(args.spec_a),
                parse_channel_spec(args.spec_b),
                grid,
                args.out,
            )
            print(f"wrote {args.out}")
        elif args.command == "random":
            fam = random_kraus_family(
                args.dim, args.out_dim, args.kraus, np.random.default_rng(args.seed)
            )
            save_channel(fam, args.out)
            print(f"wrote {args.out}")
    except PhaseportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
