"""Command-line front end: ``ringcoulomb {density,mesh,slice,expand,check}``.

Every run writes the resolved configuration to ``<out>/<subcommand>_config.json``;
passing that file back with ``--config`` reproduces the run.  The output
directory is ``--out``, else ``$RINGCOULOMB_OUT``, else the current directory.

Exit codes: 0 success, 1 check failures, 2 validation error,
3 numerical non-convergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .checks import ROSTER_B_VALUES, run_checks, summarize, roster_states
from .exceptions import ConvergenceError, DomainError
from .expand import table
from .grid import GridSpec, auto_extent, contour_slice, iso_levels, marching_cubes, sample_block
from .model import QuantumState

EXIT_OK, EXIT_CHECK_FAILED, EXIT_VALIDATION, EXIT_NONCONVERGENCE, EXIT_IO = 0, 1, 2, 3, 4
OUT_ENV = "RINGCOULOMB_OUT"

# keys a config file may carry, per subcommand
_STATE_KEYS = {"n", "l", "m", "b", "Z"}
_GRID_KEYS = {"grid_n", "extent", "coverage", "workers"}
CONFIG_KEYS = {
    "density": _STATE_KEYS | _GRID_KEYS,
    "mesh": _STATE_KEYS | _GRID_KEYS | {"p", "levels", "cut"},
    "slice": _STATE_KEYS | {"grid_n", "extent", "coverage", "quadrant1", "format"},
    "expand": {"n", "l", "m", "b", "l_max"},
    "check": {"b", "states", "perturb"},
}


class ConfigError(DomainError):
    pass


def _add_state(p: argparse.ArgumentParser, multi_b: bool = False) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    if multi_b:
        p.add_argument("--b", type=float, nargs="+", default=[0.0])
    else:
        p.add_argument("--b", type=float, default=0.0)
        p.add_argument("--Z", type=float, default=1.0)


def _add_grid(p: argparse.ArgumentParser, workers: bool = True) -> None:
    p.add_argument("--grid-n", dest="grid_n", type=int, default=81)
    p.add_argument("--extent", type=float, default=None, help="half box size L in a0 (default: auto)")
    p.add_argument("--coverage", type=float, default=0.99, help="radial probability inside L when auto")
    if workers:
        p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringcoulomb", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or .)")
    common.add_argument("--config", default=None, help="JSON config written by a previous run")

    p = sub.add_parser("density", parents=[common], help="sample rho on an N^3 grid")
    _add_state(p)
    _add_grid(p)

    p = sub.add_parser("mesh", parents=[common], help="isosurface meshes as OBJ")
    _add_state(p)
    _add_grid(p)
    p.add_argument("--p", type=float, nargs="+", default=None, help="relative probability values in (0,1]")
    p.add_argument("--levels", type=float, nargs="+", default=None, help="absolute density levels")
    p.add_argument("--cut", action="store_true", help="remove the x<0, y<0, z>0 octant")

    p = sub.add_parser("slice", parents=[common], help="yoz contour slice normalised to 100")
    _add_state(p)
    _add_grid(p, workers=False)
    p.add_argument("--quadrant1", action="store_true", help="keep only y >= 0, z >= 0")
    p.add_argument("--format", default="csv", help="comma list of csv,pgm")

    p = sub.add_parser("expand", parents=[common], help="expansion coefficients over ordinary Y_lm")
    _add_state(p, multi_b=True)
    p.add_argument("--l-max", dest="l_max", type=int, default=None)

    p = sub.add_parser("check", parents=[common], help="run the invariant suite")
    p.add_argument("--b", type=float, nargs="*", default=list(ROSTER_B_VALUES))
    p.add_argument(
        "--states", nargs="*", default=None, help="n,l,m triples (default: every state with n <= 5, m >= 0)"
    )
    p.add_argument("--perturb", action="store_true", help="mis-scale the polar normalisation (sanity run)")
    return parser


def _resolve(args: argparse.Namespace) -> dict:
    """Merge --config (if any) under the explicit command line; reject unknown keys."""
    allowed = CONFIG_KEYS[args.command]
    cfg = {k: v for k, v in vars(args).items() if k in allowed}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc}") from exc
        loaded.pop("command", None)
        loaded.pop("version", None)
        unknown = set(loaded) - allowed
        if unknown:
            raise ConfigError(f"unknown config keys for {args.command}: {sorted(unknown)}")
        cfg.update(loaded)
    return cfg


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _state(cfg: dict) -> QuantumState:
    return QuantumState(cfg["n"], cfg["l"], cfg["m"], cfg.get("b", 0.0), cfg.get("Z", 1.0))


def _stem(qs: QuantumState) -> str:
    return f"rho_n{qs.n}_l{qs.l}_m{qs.m}_b{qs.b:g}_Z{qs.Z:g}"


def _grid_spec(cfg: dict, qs: QuantumState) -> GridSpec:
    L = cfg.get("extent")
    if L is None:
        L = auto_extent(qs, cfg.get("coverage", 0.99))
        cfg["extent"] = L
    return GridSpec(qs, float(L), int(cfg.get("grid_n", 81)))


def _write_config(out: Path, command: str, cfg: dict) -> Path:
    path = out / f"{command}_config.json"
    doc = dict(sorted(cfg.items()))
    doc["command"] = command
    doc["version"] = __version__
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def cmd_density(cfg: dict, out: Path) -> int:
    qs = _state(cfg)
    block = sample_block(_grid_spec(cfg, qs), workers=int(cfg.get("workers", 1)))
    raw, meta = block.save(out / _stem(qs))
    print(f"rho_max={block.rho_max:.10e} riemann_mass={block.riemann_mass:.10f}")
    print(f"wrote {raw} {meta}")
    return EXIT_OK


def cmd_mesh(cfg: dict, out: Path) -> int:
    qs = _state(cfg)
    block = sample_block(_grid_spec(cfg, qs), workers=int(cfg.get("workers", 1)))
    if cfg.get("levels"):
        pairs = [(f"L{lv:.6g}", lv) for lv in cfg["levels"]]
    else:
        p_values = cfg.get("p") or [0.5]
        cfg["p"] = p_values
        iso = iso_levels(block, p_values)
        pairs = [(f"P{p:g}", lv) for p, lv in zip(iso.p_values, iso.levels)]
    suffix = "_cut" if cfg.get("cut") else ""
    for tag, level in pairs:
        if level >= block.rho_max:
            # P = 1 collapses onto the maxima: no surface, write an empty mesh
            level = block.rho_max * (1.0 - 1e-9)
        mesh = marching_cubes(block, level, cut=bool(cfg.get("cut")))
        path = mesh.to_obj(out / f"{_stem(qs)}_{tag}{suffix}.obj")
        print(f"{tag}: level={level:.6e} vertices={len(mesh.vertices)} triangles={len(mesh.triangles)} -> {path}")
    return EXIT_OK


def cmd_slice(cfg: dict, out: Path) -> int:
    qs = _state(cfg)
    L = cfg.get("extent")
    if L is None:
        L = auto_extent(qs, cfg.get("coverage", 0.99))
        cfg["extent"] = L
    sl = contour_slice(qs, int(cfg.get("grid_n", 81)), float(L))
    if cfg.get("quadrant1"):
        sl = sl.quadrant1()
    formats = [f.strip() for f in str(cfg.get("format", "csv")).split(",") if f.strip()]
    bad = set(formats) - {"csv", "pgm"}
    if bad:
        raise ConfigError(f"unknown slice format(s): {sorted(bad)}")
    stem = f"{_stem(qs)}_yoz{'_q1' if cfg.get('quadrant1') else ''}"
    for fmt in formats:
        path = sl.to_csv(out / f"{stem}.csv") if fmt == "csv" else sl.to_pgm(out / f"{stem}.pgm")
        print(f"wrote {path}")
    return EXIT_OK


def cmd_expand(cfg: dict, out: Path) -> int:
    qs0 = QuantumState(cfg["n"], cfg["l"], cfg["m"], 0.0)
    ntheta = qs0.l - abs(qs0.m)
    for b in cfg["b"]:
        QuantumState(qs0.n, qs0.l, qs0.m, b)  # validates b against m
        tab = table(qs0.m, ntheta, b, cfg.get("l_max"))
        path = tab.to_csv(out / f"expand_m{qs0.m}_nt{ntheta}_b{b:g}.csv")
        l_top, a_top = tab.principal
        print(
            f"b={b:g}: principal l={l_top} a^2={a_top * a_top:.10f} "
            f"defect={tab.completeness_defect:.3e} nodes={tab.quad_nodes} -> {path}"
        )
    return EXIT_OK


def _parse_states(tokens) -> list[tuple[int, int, int]]:
    out = []
    for tok in tokens:
        try:
            n, l, m = (int(v) for v in tok.split(","))
        except ValueError as exc:
            raise ConfigError(f"state {tok!r} is not an n,l,m triple") from exc
        out.append((n, l, m))
    return out


def cmd_check(cfg: dict, out: Path) -> int:
    triples = roster_states() if cfg.get("states") is None else _parse_states(cfg["states"])
    roster = []
    for b in cfg.get("b", []):
        for n, l, m in triples:
            if m == 0 and b < 0:
                continue
            roster.append(QuantumState(n, l, m, b))
    if not roster:
        raise ConfigError("roster is empty: give at least one state and one b value")
    report = run_checks(roster, perturb=bool(cfg.get("perturb")))
    (out / "check_report.json").write_text(json.dumps(report, indent=2, default=float) + "\n")
    print(summarize(report))
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


COMMANDS = {
    "density": cmd_density,
    "mesh": cmd_mesh,
    "slice": cmd_slice,
    "expand": cmd_expand,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        out = _out_dir(args)
        code = COMMANDS[args.command](cfg, out)
        _write_config(out, args.command, cfg)
        return code
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
