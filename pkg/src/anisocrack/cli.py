"""Command-line front end.

Subcommands ``material``, ``bimaterial``, ``solve`` and ``figure-skew-sif``
read a JSON configuration (see :mod:`anisocrack.config`), print a plain-text
report and write CSV files to the output directory.

Exit codes: 0 success, 2 configuration error, 3 inadmissible physics,
4 request outside the supported scope.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .bimaterial import BimaterialParams
from .config import RunConfig, load_config
from .errors import ConfigError, CrackError, OutOfScope, PhysicsError, UnreliableExtraction
from .materials import validate_monoclinic
from .mode3_solver import (
    CLOSED_FORM,
    LoadSpecAntiplane,
    antiplane_residual,
    solve_general_antiplane,
    solve_line_force_sym,
)
from .plane_solver import (
    LoadSpecPlane,
    CrackSolutionPlane,
    forward_identity_residual,
    skew_sif_sweep,
    solve_general_plane_sym,
    solve_plane_skew_line,
    solve_plane_sym_line,
)
from .stroh import stroh_system

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_SCOPE = 4

#: Tolerance metadata attached to CSV rows, by method.
ROW_TOL = {CLOSED_FORM: "exact", "numeric": "1e-6"}

MODE3_OPENING = ("x1", "jump_u3", "djump_u3")
MODE3_TRACTION = ("x1", "tau3")
PLANE_OPENING = ("x1", "jump_u1", "jump_u2")
PLANE_TRACTION = ("x1", "tau1", "tau2")
SWEEP = ("alpha", "ratio", "Khat_I", "Khat_II")
META = ("method", "tol")


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return "none"
    return repr(float(v))


def _write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header) + list(META))
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _write_report(path: Path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _emit(lines, out_dir: Path, name: str):
    for line in lines:
        print(line)
    _write_report(out_dir / name, lines)


def _grids(cfg: RunConfig, singular=()):
    a = cfg.scheme.scale
    x = np.geomspace(cfg.x_min * a, cfg.x_max * a, cfg.points)
    neg = -x[::-1]
    for c in singular:
        neg = neg[np.abs(neg - c) > 1e-9 * a]
    return neg, x


# ---------------------------------------------------------------------------
# material


def cmd_material(cfg: RunConfig, out_dir: Path) -> int:
    if not cfg.materials:
        raise ConfigError("the material command needs at least one material block")
    lines = []
    status = EXIT_OK
    for m in cfg.materials:
        rep = validate_monoclinic(m)
        lines.append(f"material {m.id}")
        lines.append(f"  symmetry_violation = {rep.symmetry_violation:.6e}")
        lines.append(f"  min_eigenvalue = {rep.min_eigenvalue:.6e}")
        lines.append(f"  monoclinic_violation = {rep.monoclinic_violation:.6e}")
        lines.append(f"  validation = {'pass' if rep.passed else 'fail'}")
        for msg in rep.messages:
            lines.append(f"  note: {msg}")
        if not rep.passed:
            status = EXIT_PHYSICS
            continue
        try:
            sys_ = stroh_system(m)
        except PhysicsError as exc:
            lines.append(f"  error: {exc}")
            status = EXIT_PHYSICS
            continue
        for k, mu in enumerate(sys_.mu, start=1):
            lines.append(f"  mu{k} = {mu.real:.12g} {mu.imag:+.12g}i")
        lines.append(f"  degenerate_plane_roots = {sys_.degenerate}")
        for i in range(3):
            row = "  ".join(f"{z.real:+.10e}{z.imag:+.10e}i" for z in sys_.Y[i])
            lines.append(f"  Y[{i + 1}] = {row}")
        if sys_.Y_eigen is not None:
            lines.append(f"  Y_cross_check = {np.abs(sys_.Y_eigen - sys_.Y).max():.3e}")
    _emit(lines, out_dir, "material_report.txt")
    return status


# ---------------------------------------------------------------------------
# bimaterial


def cmd_bimaterial(cfg: RunConfig, out_dir: Path) -> int:
    bp = cfg.bimaterial()
    lines = [f"bimaterial ({bp.source})"]
    for key, val in bp.report().items():
        lines.append(f"  {key} = {_fmt(val)}")
    if bp.source == "materials":
        from .bimaterial import plane_blocks

        Hp, Wp = plane_blocks(bp.H11, bp.H22, bp.alpha, bp.beta, bp.delta1, bp.delta2, bp.lam, bp.gamma)
        err = max(np.abs(Hp - bp.H[:2, :2]).max(), np.abs(Wp - bp.W[:2, :2]).max())
        scale = np.abs(bp.H[:2, :2]).max()
        verdict = "pass" if err <= 1e-10 * scale else "fail"
        lines.append(f"  reconstruction_check = {verdict} ({err:.3e})")
    _emit(lines, out_dir, "bimaterial_report.txt")
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve


def _mode3_solution(cfg: RunConfig, bp: BimaterialParams):
    parts = cfg.mode3
    load = LoadSpecAntiplane(sym=parts["sym"].function, skew=parts["skew"].function)
    if bp.H33 is None:
        raise PhysicsError("antiplane parameters (H33, nu) are not available")
    active = [parts[k] for k in ("sym", "skew") if not parts[k].function.is_zero]
    pure = bool(active) and all(p.line is not None for p in active) and len({p.line.a for p in active}) == 1
    if cfg.method == "closed-form" and not pure:
        raise OutOfScope("closed-form Mode III solutions exist for line forces at a single offset only")
    if pure and cfg.method != "numeric":
        # a skew pair acts on the opening as a symmetric pair scaled by nu
        F_sym = parts["sym"].line.F if parts["sym"].line is not None else 0.0
        F_skew = parts["skew"].line.F if parts["skew"].line is not None else 0.0
        a = active[0].line.a
        return load, solve_line_force_sym(F_sym + bp.nu * F_skew, a, bp.H33), (-a,)
    sol = solve_general_antiplane(load, bp, cfg.scheme)
    return load, sol, tuple(load.effective(bp.nu).singular_locations())


def _sum_plane(s1: CrackSolutionPlane, s2: CrackSolutionPlane) -> CrackSolutionPlane:
    return CrackSolutionPlane(
        djump=tuple(u + v for u, v in zip(s1.djump, s2.djump)),
        jump=lambda x: s1.jump(x) + s2.jump(x),
        traction=lambda x: s1.traction(x) + s2.traction(x),
        K=s1.K + s2.K,
        method=s1.method if s1.method == s2.method else "numeric",
        flags=s1.flags + s2.flags,
        sif=s1.sif + s2.sif,
    )


def _line_pair(pair):
    """``(F1, F2, a)`` if both components are line forces at one offset (or zero)."""
    infos = [p.line for p in pair]
    if any(p.line is None and not p.function.is_zero for p in pair):
        return None
    offsets = {ln.a for ln in infos if ln is not None}
    if len(offsets) > 1:
        return None
    if not offsets:
        return (0.0, 0.0, None)
    F = [ln.F if ln is not None else 0.0 for ln in infos]
    return (F[0], F[1], offsets.pop())


def _plane_solution(cfg: RunConfig, bp: BimaterialParams):
    parts = cfg.plane
    load = LoadSpecPlane(sym=tuple(p.function for p in parts["sym"]), skew=tuple(p.function for p in parts["skew"]))
    sym_line = _line_pair(parts["sym"])
    skew_line = _line_pair(parts["skew"])
    sols = []
    singular = set()
    if load.has_skew:
        if skew_line is None or skew_line[2] is None:
            raise OutOfScope("smooth skew-symmetric plane loads are not covered")
        sols.append(solve_plane_skew_line(skew_line[0], skew_line[1], skew_line[2], bp))
        singular.add(-skew_line[2])
    has_sym = not all(p.function.is_zero for p in parts["sym"])
    if has_sym:
        closed = cfg.method != "numeric" and sym_line is not None and sym_line[2] is not None
        if cfg.method == "closed-form" and not closed:
            raise OutOfScope("closed-form plane solutions exist for line forces at a single offset only")
        if closed:
            sols.append(solve_plane_sym_line(sym_line[0], sym_line[1], sym_line[2], bp))
        else:
            sym_only = replace(load, skew=None)
            sols.append(solve_general_plane_sym(sym_only, bp, cfg.scheme))
        for p in parts["sym"]:
            singular.update(p.function.singular_locations())
    if not sols:
        sols.append(solve_plane_sym_line(0.0, 0.0, 1.0, bp))
    sol = sols[0]
    for s in sols[1:]:
        sol = _sum_plane(sol, s)
    return load, sol, tuple(sorted(singular))


def cmd_solve(cfg: RunConfig, out_dir: Path) -> int:
    if cfg.mode3 is None and cfg.plane is None:
        raise ConfigError("solve needs a load.mode3 or load.plane block")
    bp = cfg.bimaterial()
    lines = ["solve"]
    if cfg.mode3 is not None:
        load, sol, singular = _mode3_solution(cfg, bp)
        neg, pos = _grids(cfg, singular)
        tol = ROW_TOL[sol.method]
        jump = sol.jump(neg)
        djump = sol.djump(neg)
        _write_csv(out_dir / "mode3_opening.csv", MODE3_OPENING,
                   [(x, u, du, sol.method, tol) for x, u, du in zip(neg, jump, djump)])
        tau = sol.traction(pos)
        _write_csv(out_dir / "mode3_traction.csv", MODE3_TRACTION,
                   [(x, t, sol.method, tol) for x, t in zip(pos, tau)])
        res = antiplane_residual(sol, load, bp, cfg.scheme)
        lines.append(f"  mode3 method = {sol.method}")
        lines.append(f"  K_III = {sol.K3!r}")
        if sol.sif is not None:
            lines.append(f"  K_III fit residual = {sol.sif.residual:.3e}")
            lines.append(f"  K_III window change = {sol.sif.window_change:.3e}")
            lines.append(f"  K_III reliable = {sol.sif.reliable}")
        lines.append(f"  mode3 identity residuals = {res.lower:.3e} (x1<0), {res.upper:.3e} (x1>0)")
    if cfg.plane is not None:
        load, sol, singular = _plane_solution(cfg, bp)
        neg, pos = _grids(cfg, singular)
        tol = ROW_TOL[sol.method]
        jump = sol.jump(neg)
        _write_csv(out_dir / "plane_opening.csv", PLANE_OPENING,
                   [(x, u1, u2, sol.method, tol) for x, u1, u2 in zip(neg, jump[0], jump[1])])
        tau = sol.traction(pos)
        _write_csv(out_dir / "plane_traction.csv", PLANE_TRACTION,
                   [(x, t1, t2, sol.method, tol) for x, t1, t2 in zip(pos, tau[0], tau[1])])
        res = forward_identity_residual(sol, load, bp, cfg.scheme)
        lines.append(f"  plane method = {sol.method}")
        lines.append(f"  K_I = {sol.K_I!r}")
        lines.append(f"  K_II = {sol.K_II!r}")
        for name, est in zip(("K_II", "K_I"), sol.sif):
            lines.append(f"  {name} fit residual = {est.residual:.3e}, reliable = {est.reliable}")
        lines.append(f"  plane identity residuals = {res.lower:.3e} (x1<0), {res.upper:.3e} (x1>0)")
        for flag in sol.flags:
            lines.append(f"  note: {flag}")
    _emit(lines, out_dir, "sif_report.txt")
    return EXIT_OK


# ---------------------------------------------------------------------------
# figure


def cmd_figure_skew_sif(cfg: RunConfig, out_dir: Path) -> int:
    if cfg.direct is None and len(cfg.materials) != 2:
        raise ConfigError("figure-skew-sif needs bimaterial.direct or two materials")
    if cfg.sweep is None:
        raise ConfigError("figure-skew-sif needs a sweep block")
    bp = cfg.bimaterial()
    sw = cfg.sweep
    alphas = np.linspace(sw["alpha_min"], sw["alpha_max"], sw["count"])
    table = skew_sif_sweep(bp.H11, bp.H22, bp.delta1, bp.delta2, sw["ratios"], alphas)
    _write_csv(out_dir / "sweep.csv", SWEEP,
               [(r.alpha, r.ratio, r.Khat_I, r.Khat_II, CLOSED_FORM, ROW_TOL[CLOSED_FORM]) for r in table.rows])
    lo, hi = bp.admissible_alpha()
    lines = [
        "figure-skew-sif",
        f"  rows = {len(table.rows)}",
        f"  skipped = {len(table.skipped)}",
        f"  requested alpha interval = [{sw['alpha_min']!r}, {sw['alpha_max']!r}]",
        f"  positive-definite alpha interval = [{lo:.6f}, {hi:.6f}]",
    ]
    _emit(lines, out_dir, "skew_sif_report.txt")
    return EXIT_OK


COMMANDS = {
    "material": cmd_material,
    "bimaterial": cmd_bimaterial,
    "solve": cmd_solve,
    "figure-skew-sif": cmd_figure_skew_sif,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="anisocrack", description="Interfacial cracks in monoclinic bimaterials")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, metavar="PATH", help="JSON configuration file")
    p.add_argument("--out", metavar="DIR", help="output directory (overrides output.dir)")
    p.add_argument("--points", type=int, metavar="N", help="profile grid points")
    p.add_argument("--panels", type=int, metavar="N", help="quadrature panels")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.points is not None:
            if args.points < 2:
                raise ConfigError("--points must be at least 2")
            cfg = replace(cfg, points=args.points)
        if args.panels is not None:
            cfg = replace(cfg, scheme=replace(cfg.scheme, panels=args.panels))
        out_dir = Path(args.out) if args.out else cfg.out_dir
        return COMMANDS[args.command](cfg, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OutOfScope as exc:
        print(f"out of scope: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    except (PhysicsError, UnreliableExtraction) as exc:
        print(f"inadmissible: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except CrackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
