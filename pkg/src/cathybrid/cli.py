"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical-domain error
(truncation, conditioning, degenerate normalization).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .entangler import BeamSplitterParams, DelocalizedPhoton, evolve_and_condition
from .errors import CatHybridError, ConfigError, NumericalDomainError, UndefinedMomentError
from .fock import DEFAULT_CUTOFF, TAIL_TOLERANCE
from .nonclassicality import (DEFAULT_POINTS, fano, grid_axis, quadrature_distribution,
                              quadrature_sigma, wigner, default_extent)
from .states import StateSpec, build
from .sweep import (Range, RunConfig, grid_csv, grid_json, search_csv, search_json, search_max,
                    sweep, to_csv)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
CUTOFF_ENV = "CATHYBRID_CUTOFF"

STATE_FIELDS = ("kind", "sign", "beta", "l", "b", "d", "terms")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input state")
    g.add_argument("--kind", choices=["sdlps", "superposition", "truncated"])
    g.add_argument("--sign", choices=["+", "-"])
    g.add_argument("--l", type=int)
    g.add_argument("--beta", type=float)
    g.add_argument("--b", type=_complex, nargs="+", help="superposition coefficients b_0..b_l")
    g.add_argument("--d", type=_complex, nargs="+", help="truncated Fock coefficients")
    g.add_argument("--terms", type=int, help="truncated: number of c_{l,.}(beta) terms")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--tail-tol", type=float)
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")


def _add_photon_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a0", type=_complex)
    p.add_argument("--a1", type=_complex)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cathybrid", description="Even/odd CV states and heralded hybrid entanglement.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("state", help="print Fock amplitudes as JSON")
    _add_state_flags(p)

    for name, helptext in (("wigner", "Wigner function grid as CSV (x1, x2, W)"),
                           ("quadrature", "quadrature density as CSV (x, P)")):
        p = sub.add_parser(name, help=helptext)
        _add_state_flags(p)
        p.add_argument("--extent", type=float, help="half-width of the grid")
        p.add_argument("--points", type=int)
        if name == "quadrature":
            p.add_argument("--axis", choices=["X1", "X2"])

    p = sub.add_parser("moments", help="sigma_x1, sigma_x2 and Fano factor versus beta")
    _add_state_flags(p)
    p.add_argument("--beta-range", type=float, nargs=3, metavar=("START", "STOP", "NUM"))

    p = sub.add_parser("entangle", help="one heralded outcome as JSON")
    _add_state_flags(p)
    _add_photon_flags(p)
    p.add_argument("--t", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--ppt", action="store_true", help="negativity by partial transpose")

    for name in ("sweep", "search"):
        p = sub.add_parser(name, help="(beta, t) grid" if name == "sweep" else "max-negativity points")
        _add_state_flags(p)
        _add_photon_flags(p)
        p.add_argument("--t", type=float)
        p.add_argument("--beta-range", type=float, nargs=3, metavar=("START", "STOP", "NUM"))
        p.add_argument("--t-range", type=float, nargs=3, metavar=("START", "STOP", "NUM"))
        p.add_argument("--outcomes", type=int, nargs="+")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--workers", type=int)
    return parser


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return data


def _merge(args: argparse.Namespace) -> dict:
    cfg = _load_config(args.config)
    state = dict(cfg.get("state", {}))
    for name in STATE_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            if name in ("b", "d"):
                value = [[c.real, c.imag] if c.imag else c.real for c in value]
            state[name] = value
    cfg["state"] = state
    for name in ("cutoff", "tail_tol", "extent", "points", "axis", "t", "n", "format", "workers"):
        value = getattr(args, name, None)
        if value is not None:
            cfg[name] = value
    if getattr(args, "beta_range", None) is not None:
        cfg["beta_range"] = args.beta_range
    if getattr(args, "t_range", None) is not None:
        cfg["t_range"] = args.t_range
    if getattr(args, "outcomes", None) is not None:
        cfg["outcomes"] = args.outcomes
    photon = dict(cfg.get("photon", {}))
    for name in ("a0", "a1"):
        value = getattr(args, name, None)
        if value is not None:
            photon[name] = value
    cfg["photon"] = photon
    return cfg


def _cutoff(cfg: dict) -> int:
    if "cutoff" in cfg:
        return int(cfg["cutoff"])
    env = os.environ.get(CUTOFF_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{CUTOFF_ENV}={env!r} is not an integer") from exc
    return DEFAULT_CUTOFF


def _spec(cfg: dict) -> StateSpec:
    state = cfg["state"]
    if "kind" not in state or "sign" not in state:
        raise ConfigError("state needs --kind and --sign")
    return StateSpec.from_dict(state)


def _photon(cfg: dict) -> DelocalizedPhoton:
    ph = cfg.get("photon", {})
    if not ph:
        return DelocalizedPhoton.balanced()
    if "a0" not in ph or "a1" not in ph:
        raise ConfigError("photon needs both a0 and a1")
    try:
        a0, a1 = (complex(*v) if isinstance(v, list) else complex(v) for v in (ph["a0"], ph["a1"]))
        return DelocalizedPhoton.from_unnormalized(a0, a1)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid photon amplitudes: {exc}") from exc


def _require(cfg: dict, key: str, flag: str):
    if key not in cfg:
        raise ConfigError(f"missing {flag}")
    return cfg[key]


def _run_config(cfg: dict) -> RunConfig:
    if "beta_range" in cfg and "beta" not in cfg["state"]:
        cfg["state"]["beta"] = float(cfg["beta_range"][0])
    spec = _spec(cfg)
    if "beta_range" in cfg:
        beta = Range.parse(list(cfg["beta_range"]))
    elif spec.beta is not None:
        beta = Range.single(spec.beta)
    else:
        beta = Range.single(0.0)
    if "t_range" in cfg:
        t = Range.parse(list(cfg["t_range"]))
    else:
        t = Range.single(float(_require(cfg, "t", "--t or --t-range")))
    return RunConfig(
        state=spec,
        photon=_photon(cfg),
        outcomes=tuple(cfg.get("outcomes", (cfg.get("n", 0),))),
        beta=beta,
        t=t,
        cutoff=_cutoff(cfg),
        tail_tol=float(cfg.get("tail_tol", TAIL_TOLERANCE)),
        output_format=cfg.get("format", "csv"),
        workers=int(cfg.get("workers", 1)),
    )


def _state(cfg: dict):
    return build(_spec(cfg), _cutoff(cfg), float(cfg.get("tail_tol", TAIL_TOLERANCE)))


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _cmd_state(cfg: dict) -> str:
    st = _state(cfg)
    amps = st.vector.amplitudes
    return _dump({
        "state": st.spec.to_dict(),
        "cutoff": st.vector.cutoff,
        "norm_factor": st.norm_factor,
        "amplitudes": [[float(a.real), float(a.imag)] for a in amps],
    })


def _axis(cfg: dict, vec) -> np.ndarray:
    extent = float(cfg["extent"]) if "extent" in cfg else default_extent(vec)
    return grid_axis(extent, int(cfg.get("points", DEFAULT_POINTS)))


def _cmd_wigner(cfg: dict) -> str:
    vec = _state(cfg).vector
    x = _axis(cfg, vec)
    grid = wigner(vec, x, x)
    rows = ((a, b, grid.values[i, j]) for i, a in enumerate(grid.x1) for j, b in enumerate(grid.x2))
    return to_csv(("x1", "x2", "W"), rows)


def _cmd_quadrature(cfg: dict) -> str:
    vec = _state(cfg).vector
    dist = quadrature_distribution(vec, cfg.get("axis", "X1"), _axis(cfg, vec))
    return to_csv(("x", "P"), zip(dist.x, dist.density))


def _cmd_moments(cfg: dict) -> str:
    if "beta_range" in cfg and "beta" not in cfg["state"]:
        cfg["state"]["beta"] = float(cfg["beta_range"][0])
    spec = _spec(cfg)
    if "beta_range" in cfg:
        betas = Range.parse(list(cfg["beta_range"])).samples()
    else:
        betas = [float(_require(spec.to_dict(), "beta", "--beta or --beta-range"))]
    cutoff = _cutoff(cfg)
    tol = float(cfg.get("tail_tol", TAIL_TOLERANCE))
    rows = []
    for beta in betas:
        vec = build(spec.with_beta(float(beta)), cutoff, tol).vector
        try:
            f = fano(vec)
        except UndefinedMomentError:
            f = float("nan")
        rows.append((float(beta), quadrature_sigma(vec, "X1"), quadrature_sigma(vec, "X2"), f))
    return to_csv(("beta", "sigma_x1", "sigma_x2", "fano"), rows)


def _cmd_entangle(cfg: dict) -> str:
    state = _state(cfg)
    params = BeamSplitterParams(float(_require(cfg, "t", "--t")))
    res = evolve_and_condition(state, _photon(cfg), params, int(_require(cfg, "n", "--n")),
                               use_ppt=bool(cfg.get("ppt", False)))
    out = res.to_dict()
    out["beta"] = state.spec.beta
    out["t"] = params.t
    return _dump(out)


def _cmd_sweep(cfg: dict) -> str:
    config = _run_config(cfg)
    grid = sweep(config)
    return grid_csv(grid) if config.output_format == "csv" else grid_json(grid)


def _cmd_search(cfg: dict) -> str:
    config = _run_config(cfg)
    points = search_max(config)
    return search_csv(points) if config.output_format == "csv" else search_json(points)


COMMANDS = {
    "state": _cmd_state,
    "wigner": _cmd_wigner,
    "quadrature": _cmd_quadrature,
    "moments": _cmd_moments,
    "entangle": _cmd_entangle,
    "sweep": _cmd_sweep,
    "search": _cmd_search,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _merge(args)
        if getattr(args, "ppt", False):
            cfg["ppt"] = True
        text = COMMANDS[args.command](cfg)
    except NumericalDomainError as exc:
        print(f"cathybrid: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CatHybridError, ValueError) as exc:
        print(f"cathybrid: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(cli_main())
