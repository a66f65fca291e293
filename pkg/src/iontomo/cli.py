"""Command-line front end.

Subcommands: trajectory | tomogram | wigner | reconstruct | verify.
Runs are driven by a single JSON config (every field has a default); a few
flags override config fields.  All diagnostics go to stderr, data goes to
files only, and identical configs produce byte-identical outputs.

Exit codes: 0 success, 1 validation/config error, 2 numerical-check failure,
3 integration failure.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._grids import uniform_grid
from .errors import CoverageError, DegenerateStateError, IntegrationError
from .states import (
    StateSpec,
    required_x_halfwidth,
    state_at,
    wigner_analytic,
    wigner_numeric,
)
from .tomograms import (
    ReferenceFrame,
    family_from_analytic,
    family_grid,
    forward_transform,
    frame_quadrature,
    inverse_transform,
    marginal_analytic,
    momentum_wavefunction,
    suggest_x_grid,
)
from .trajectory import TrapParams, epsilon_at, solve_epsilon
from .verify import DEFAULT_SEED, run_verification

DEFAULT_CONFIG = {
    "trap": {"kappa": 0.2, "omega_mod": 2.0},
    "state": {"kind": "coherent", "alpha": [1.0, 0.0]},
    "time": 1.5,
    "t_end": 5.0,
    "frames": [[1.0, 0.0, 0.0], [0.7, -0.4, 1.2], [0.0, 1.0, 0.0]],
    "grids": {
        "x": {"min": -8.0, "max": 8.0, "n": 1601},
        "q": {"min": -5.0, "max": 5.0, "n": 101},
        "p": {"min": -5.0, "max": 5.0, "n": 101},
    },
    "tolerances": {"ode": 1e-9, "quadrature": 1e-6, "agreement": 1e-4},
    "output": {"dir": "iontomo-out", "format": "csv"},
}

_INSTABILITY_NOTE_THRESHOLD = 5.0


class _CheckFailure(Exception):
    """A numerical check failed (exit code 2)."""


def _deep_merge(base, override):
    out = dict(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = val
    return out


def load_config(path, overrides):
    config = DEFAULT_CONFIG
    if path is not None:
        with open(path) as fh:
            config = _deep_merge(config, json.load(fh))
    config = _deep_merge(config, overrides)
    _validate_config(config)
    return config


def _validate_config(config):
    for name, g in config["grids"].items():
        if g["n"] < 16:
            raise ValueError(f"grid {name}: n must be >= 16, got {g['n']}")
        if not g["max"] > g["min"]:
            raise ValueError(f"grid {name}: max must exceed min")
    for name, tol in config["tolerances"].items():
        if not tol > 0:
            raise ValueError(f"tolerance {name} must be positive")
    if config["state"]["kind"] not in ("coherent", "even_cat", "odd_cat"):
        raise ValueError(f"unknown state kind {config['state']['kind']!r}")


def config_hash(config):
    """Hash of the physics-relevant config (output location/format excluded,
    so relocating results never changes file contents)."""
    hashed = {k: v for k, v in config.items() if k != "output"}
    blob = json.dumps(hashed, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _trap(config):
    return TrapParams(float(config["trap"]["kappa"]),
                      float(config["trap"]["omega_mod"]))


def _spec(config):
    re, im = config["state"]["alpha"]
    return StateSpec(config["state"]["kind"], complex(re, im))


def _times(config):
    t = config["time"]
    return [float(v) for v in (t if isinstance(t, list) else [t])]


def _grid(config, name):
    g = config["grids"][name]
    return uniform_grid(g["min"], g["max"], g["n"])


# ---------------------------------------------------------------- output --


def _header_lines(config):
    return [f"# iontomo {__version__}", f"# config-sha256: {config_hash(config)}"]


def write_table(path, config, columns):
    """Write named columns as CSV or JSON per the config format tag.

    CSV: '#' header comments, 17-significant-digit scientific notation
    (lossless round trip of doubles).
    """
    fmt = config["output"]["format"]
    names = list(columns)
    if fmt == "json":
        payload = {
            "tool": f"iontomo {__version__}",
            "config_sha256": config_hash(config),
            "columns": {k: [float(v) for v in vals] for k, vals in columns.items()},
        }
        path = path.with_suffix(".json")
        path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")
        return path
    rows = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    lines = _header_lines(config) + ["# " + ",".join(names)]
    for row in rows:
        lines.append(",".join(f"{v:.17e}" for v in row))
    path = path.with_suffix(".csv")
    path.write_text("\n".join(lines) + "\n")
    return path


def write_report(path, config, payload):
    doc = {
        "tool": f"iontomo {__version__}",
        "config_sha256": config_hash(config),
    }
    doc.update(payload)
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return path


def _out_dir(config):
    out = Path(config["output"]["dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


# ----------------------------------------------------------- subcommands --


def cmd_trajectory(config):
    out = _out_dir(config)
    trap = _trap(config)
    tol = config["tolerances"]["ode"]
    traj = solve_epsilon(trap, float(config["t_end"]), rtol=tol, atol=1e-3 * tol)
    peak = float(np.abs(traj.eps).max())
    if peak > _INSTABILITY_NOTE_THRESHOLD:
        print(
            f"note: |eps| grows to {peak:.3g} -- parametric-resonance zone; "
            "growth is physical, not a solver failure",
            file=sys.stderr,
        )
    write_table(out / "trajectory", config, {
        "t": traj.times,
        "eps_re": traj.eps.real,
        "eps_im": traj.eps.imag,
        "eps_dot_re": traj.eps_dot.real,
        "eps_dot_im": traj.eps_dot.imag,
        "wronskian_residual": traj.wronskian_residual(),
    })
    return 0


def _frames_list(config):
    frames = config["frames"]
    if isinstance(frames, dict):
        mus = family_grid(float(frames["M"]), float(frames["spacing"]))
        delta = float(frames.get("delta", 0.0))
        return [ReferenceFrame(m, n, delta)
                for m in mus for n in mus if not (m == 0.0 and n == 0.0)]
    return [ReferenceFrame(*[float(v) for v in f]) for f in frames]


def _oracle_grids(spec, eps, eps_dot, config):
    """Phase-space box and x grid sized for the 1e-4 oracle budget."""
    scale = max(abs(eps), abs(eps_dot))
    half = np.sqrt(2.0) * abs(spec.alpha) * scale + 7.0 * scale / np.sqrt(2.0) + 0.5
    n = 2 * int(np.ceil(half / 0.007)) + 1
    pq = uniform_grid(-half, half, n)
    x_half = required_x_halfwidth(spec.alpha, eps, n_sigma=9.0) + 2.0
    nx = max(int(config["grids"]["x"]["n"]), 2 * int(np.ceil(x_half / 0.01)) + 1)
    x = uniform_grid(-x_half, x_half, nx)
    return pq, x


def cmd_tomogram(config, use_printed_eq7=False, use_printed_eq10_shift=False):
    out = _out_dir(config)
    trap = _trap(config)
    spec = _spec(config)
    tol_agree = config["tolerances"]["agreement"]
    variance_form = "printed" if use_printed_eq7 else "corrected"
    shift_form = "printed" if use_printed_eq10_shift else "corrected"
    times = _times(config)
    traj = solve_epsilon(trap, max(max(times), 1e-6) + 0.1,
                         rtol=config["tolerances"]["ode"])
    frames = _frames_list(config)
    summary = {"files": [], "worst_disagreement": 0.0,
               "worst_norm_residual": 0.0}
    failed = None
    for a, t in enumerate(times):
        eps, eps_dot = epsilon_at(traj, t)
        pq, x_psi = _oracle_grids(spec, eps, eps_dot, config)
        wmap = wigner_analytic(spec, eps, eps_dot, pq, pq, time=t)
        psi = state_at(spec, traj, t, x_psi)
        psi_mom = momentum_wavefunction(psi)
        for b, frame in enumerate(frames):
            x_grid = suggest_x_grid(spec, eps, eps_dot, frame,
                                    n=int(config["grids"]["x"]["n"]))
            try:
                w_an = marginal_analytic(spec, eps, eps_dot, frame, x_grid,
                                         time=t, variance_form=variance_form,
                                         shift_form=shift_form).values
            except ValueError as exc:
                print(f"tomogram t={t} frame={b}: {exc}", file=sys.stderr)
                w_an = np.full(len(x_grid), np.nan)
            w_fw = forward_transform(wmap, frame, x_grid,
                                     boundary_tol=1e-9).values
            w_qd = frame_quadrature(psi, frame, x_grid,
                                    psi_momentum=psi_mom).values
            spread = np.nanmax(
                np.stack([np.abs(w_an - w_fw), np.abs(w_an - w_qd),
                          np.abs(w_fw - w_qd)]), axis=0)
            if np.any(np.isnan(w_an)):
                spread = np.full(len(x_grid), np.inf)
            worst = float(spread.max())
            norm_res = max(
                abs(float(np.trapezoid(col, x_grid)) - 1.0)
                for col in (w_fw, w_qd)
            )
            name = write_table(out / f"tomogram_t{a}_f{b}", config, {
                "X": x_grid,
                "w_analytic": w_an,
                "w_transform": w_fw,
                "w_quadrature": w_qd,
                "max_abs_disagreement": spread,
            })
            summary["files"].append({
                "file": name.name,
                "time": t,
                "frame": [frame.mu, frame.nu, frame.delta],
                "max_disagreement": worst,
                "norm_residual": norm_res,
            })
            summary["worst_disagreement"] = max(
                summary["worst_disagreement"], worst)
            summary["worst_norm_residual"] = max(
                summary["worst_norm_residual"], norm_res)
            if worst > tol_agree and failed is None:
                failed = (t, b, frame, worst)
    summary["agreement_tolerance"] = tol_agree
    summary["passed"] = failed is None
    write_report(out / "tomogram_summary.json", config, summary)
    if failed is not None:
        t, b, frame, worst = failed
        raise _CheckFailure(
            f"oracle disagreement {worst:.3e} > {tol_agree} at t={t}, frame "
            f"{b} = ({frame.mu}, {frame.nu}, {frame.delta})"
        )
    return 0


def cmd_wigner(config, check_numeric=False):
    out = _out_dir(config)
    trap = _trap(config)
    spec = _spec(config)
    times = _times(config)
    traj = solve_epsilon(trap, max(max(times), 1e-6) + 0.1,
                         rtol=config["tolerances"]["ode"])
    q = _grid(config, "q")
    p = _grid(config, "p")
    qm, pm = np.meshgrid(q, p, indexing="ij")
    report = {"maps": []}
    for a, t in enumerate(times):
        eps, eps_dot = epsilon_at(traj, t)
        wmap = wigner_analytic(spec, eps, eps_dot, q, p, time=t)
        name = write_table(out / f"wigner_t{a}", config, {
            "q": qm.ravel(),
            "p": pm.ravel(),
            "W": wmap.values.ravel(),
        })
        entry = {
            "file": name.name,
            "time": t,
            "norm_constant": wmap.norm_constant,
        }
        if check_numeric:
            dq = q[1] - q[0]
            k = max(1, int(np.ceil(dq / 0.01)))
            dx = dq / k
            pad = int(np.ceil(3.0 / dx))
            nx = (len(q) - 1) * k + 2 * pad + 1
            x = (q[0] - pad * dx) + dx * np.arange(nx)
            psi = state_at(spec, traj, t, x)
            wnum = wigner_numeric(psi, q, p, norm_tol=1e-4)
            entry["numeric_max_diff"] = float(
                np.abs(wnum.values - wmap.values).max())
            entry["numeric_imag_residue"] = wnum.imag_residue
        report["maps"].append(entry)
    write_report(out / "wigner_summary.json", config, report)
    return 0


def cmd_reconstruct(config):
    out = _out_dir(config)
    trap = _trap(config)
    spec = _spec(config)
    frames = config["frames"]
    if not isinstance(frames, dict) or "M" not in frames or "spacing" not in frames:
        raise ValueError(
            "reconstruct needs a frames descriptor {'M': ..., 'spacing': ..., "
            "'delta': 0}"
        )
    if float(frames.get("delta", 0.0)) != 0.0:
        raise ValueError("reconstruction requires delta = 0 frames")
    t = _times(config)[0]
    traj = solve_epsilon(trap, max(t, 1e-6) + 0.1,
                         rtol=config["tolerances"]["ode"])
    eps, eps_dot = epsilon_at(traj, t)
    lattice = family_grid(float(frames["M"]), float(frames["spacing"]))
    family = family_from_analytic(spec, eps, eps_dot, lattice, lattice,
                                  _grid(config, "x"), time=t)
    q = _grid(config, "q")
    p = _grid(config, "p")
    recon = inverse_transform(family, q, p)
    reference = wigner_analytic(spec, eps, eps_dot, q, p, time=t)
    l2 = float(
        np.linalg.norm(recon.values - reference.values)
        / np.linalg.norm(reference.values)
    )
    qm, pm = np.meshgrid(q, p, indexing="ij")
    write_table(out / "wigner_reconstructed", config, {
        "q": qm.ravel(),
        "p": pm.ravel(),
        "W": recon.values.ravel(),
    })
    write_report(out / "reconstruction_report.json", config, {
        "l2_rel_error": l2,
        "raw_norm_constant": recon.norm_constant,
        "imag_residue": recon.imag_residue,
    })
    return 0


def cmd_verify(config, use_printed_eq7=False, use_printed_eq10_shift=False,
               seed=None, n_frames=8):
    out = _out_dir(config)
    checks = run_verification(
        _trap(config), _spec(config).alpha,
        seed=DEFAULT_SEED if seed is None else seed,
        n_frames=n_frames,
        use_printed_eq7=use_printed_eq7,
        use_printed_eq10_shift=use_printed_eq10_shift,
        rtol=config["tolerances"]["ode"],
    )
    all_passed = all(c.passed for c in checks)
    write_report(out / "verification_report.json", config, {
        "checks": [c.as_dict() for c in checks],
        "all_passed": all_passed,
        "diagnostic_mode": {
            "use_printed_eq7": use_printed_eq7,
            "use_printed_eq10_shift": use_printed_eq10_shift,
        },
    })
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        print(f"{status}  {c.name}: {c.value:.3e} (tol {c.tolerance:.1e})",
              file=sys.stderr)
    if not all_passed:
        raise _CheckFailure("verification checks failed; see report")
    return 0


# ----------------------------------------------------------------- parser --


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="iontomo",
        description="Tomographic engine for parametric-trap packet states",
    )
    parser.add_argument("--version", action="version",
                        version=f"iontomo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, default=None,
                       help="JSON config; fields default sensibly")
        p.add_argument("--out", type=str, default=None,
                       help="output directory (overrides config)")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="data file format (overrides config)")
        p.add_argument("--kappa", type=float, default=None)
        p.add_argument("--omega-mod", type=float, default=None)
        p.add_argument("--kind", choices=("coherent", "even_cat", "odd_cat"),
                       default=None)
        p.add_argument("--alpha", type=str, default=None,
                       help="complex literal, e.g. '1+0.5j'")
        p.add_argument("--time", type=float, default=None)
        p.add_argument("--t-end", type=float, default=None)

    p = sub.add_parser("trajectory", help="solve the complex trajectory")
    common(p)

    p = sub.add_parser("tomogram", help="tomograms three ways per frame")
    common(p)
    p.add_argument("--use-printed-eq7", action="store_true",
                   help="uncorrected printed variance cross-term (diagnostic)")
    p.add_argument("--use-printed-eq10-shift", action="store_true",
                   help="uncorrected printed cat shift coefficient (diagnostic)")

    p = sub.add_parser("wigner", help="Wigner map of the configured state")
    common(p)
    p.add_argument("--check-numeric", action="store_true",
                   help="cross-check against the numerical Wigner transform")

    p = sub.add_parser("reconstruct", help="invert a tomogram family")
    common(p)

    p = sub.add_parser("verify", help="run the invariant suite")
    common(p)
    p.add_argument("--use-printed-eq7", action="store_true")
    p.add_argument("--use-printed-eq10-shift", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--frames", type=int, default=8,
                   help="random frames for the three-way check")
    return parser


def _overrides(args):
    over = {}
    if args.out is not None:
        over.setdefault("output", {})["dir"] = args.out
    if args.format is not None:
        over.setdefault("output", {})["format"] = args.format
    if args.kappa is not None:
        over.setdefault("trap", {})["kappa"] = args.kappa
    if args.omega_mod is not None:
        over.setdefault("trap", {})["omega_mod"] = args.omega_mod
    if args.kind is not None:
        over.setdefault("state", {})["kind"] = args.kind
    if args.alpha is not None:
        a = complex(args.alpha)
        over.setdefault("state", {})["alpha"] = [a.real, a.imag]
    if args.time is not None:
        over["time"] = args.time
    if args.t_end is not None:
        over["t_end"] = args.t_end
    return over


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config, _overrides(args))
        if args.command == "trajectory":
            return cmd_trajectory(config)
        if args.command == "tomogram":
            return cmd_tomogram(config, args.use_printed_eq7,
                                args.use_printed_eq10_shift)
        if args.command == "wigner":
            return cmd_wigner(config, args.check_numeric)
        if args.command == "reconstruct":
            return cmd_reconstruct(config)
        if args.command == "verify":
            return cmd_verify(config, args.use_printed_eq7,
                              args.use_printed_eq10_shift, args.seed,
                              args.frames)
        raise ValueError(f"unknown command {args.command!r}")
    except IntegrationError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return 3
    except _CheckFailure as exc:
        print(f"numerical check failed: {exc}", file=sys.stderr)
        return 2
    except (ValueError, CoverageError, DegenerateStateError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
