"""Command-line front end: ``saftw <subcommand> ...``.

Exit codes: 0 success (every check passed), 1 a theorem check failed,
2 bad input, configuration or validation error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings

import numpy as np

from . import io
from .config import RunConfig, load_config, parse_triple
from .convolution import convolution_theorem_residual, saft_convolve
from .errors import AdmissibilitySpreadTooLarge, DivergentAdmissibility, NegativeBWarning, SaftError
from .localization import daughter_window_law, mother_stats, q_factor, safd_window, tf_box
from .nsawt import (admissibility, admissibility_for, gated_constant,
                    moyal_terms, nsawt_direct, nsawt_invert, nsawt_spectral, range_projection_residual,
                    signal_band, synthesize)
from .numerics import FrequencyGrid, ScaleGrid, norm
from .saft import isaft, saft
from .signals import FAMILIES, generate, parse_wavelet
from .uncertainty import battery, generalized_saft, heisenberg_nsawt, heisenberg_saft, pitt_saft
from .verify import REPORT_HEADER, CheckResult, run_checks

OK, FAILED, INVALID = 0, 1, 2


class Output:
    """Collects key/value results and prints them as a table or JSON."""

    def __init__(self, as_json: bool, quiet: bool):
        self.as_json = as_json
        self.quiet = quiet
        self.data: dict = {}

    def put(self, key: str, value) -> None:
        self.data[key] = value

    def flush(self) -> None:
        if self.quiet:
            return
        if self.as_json:
            print(json.dumps(self.data, indent=2, default=_jsonable))
            return
        for k, v in self.data.items():
            print(f"{k:<28} {_text(v)}")


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, complex):
        return [v.real, v.imag]
    return str(v)


def _text(v) -> str:
    if isinstance(v, float):
        return io.fmt(v)
    if isinstance(v, complex):
        return f"{io.fmt(v.real)} {io.fmt(v.imag)}i"
    if isinstance(v, (list, tuple)):
        return " ".join(_text(x) for x in v)
    return str(v)


def _matrix(args):
    cfg = load_config(args.config, args.matrix)
    if cfg.matrix.B < 0:
        warnings.warn("B < 0: the kernel uses 1/sqrt(2 pi |B|) so the inverse stays exact",
                      NegativeBWarning, stacklevel=2)
    return cfg


def _scales(text: str | None, cfg) -> ScaleGrid:
    return ScaleGrid.parse(text) if text else cfg.scales


def _t_grid(text: str | None, default):
    return parse_triple(text, "translation grid") if text else default


# -- subcommands ---------------------------------------------------------------

def cmd_saft(args, out: Output) -> int:
    cfg = _matrix(args)
    f = io.read_signal_csv(args.infile)
    grid = None
    if args.omega:
        lo, hi, n = parse_triple(args.omega, "frequency grid")
        grid = FrequencyGrid.span(lo, hi, n)
    F = saft(f, cfg.matrix, grid, path=args.path)
    io.write_spectrum_csv(args.out, F)
    out.put("samples", F.n)
    out.put("omega_range", [float(F.omega[0]), float(F.omega[-1])])
    return OK


def cmd_isaft(args, out: Output) -> int:
    cfg = _matrix(args)
    F = io.read_spectrum_csv(args.infile)
    grid = parse_triple(args.grid, "output grid") if args.grid else None
    f = isaft(F, cfg.matrix, grid, path=args.path)
    io.write_signal_csv(args.out, f)
    out.put("samples", f.n)
    return OK


def cmd_conv(args, out: Output) -> int:
    cfg = _matrix(args)
    f, g = io.read_signal_csv(args.f), io.read_signal_csv(args.g)
    h = saft_convolve(f, g, cfg.matrix)
    io.write_signal_csv(args.out, h)
    out.put("samples", h.n)
    if args.check_theorem:
        r = convolution_theorem_residual(f, g, cfg.matrix)
        out.put("convolution_residual", r)
        out.put("status", "pass" if r <= cfg.tol("convolution") else "fail")
        return OK if r <= cfg.tol("convolution") else FAILED
    return OK


def cmd_nsawt(args, out: Output) -> int:
    cfg = _matrix(args)
    f = io.read_signal_csv(args.infile)
    psi = parse_wavelet(args.wavelet or cfg.wavelet)
    sg = _scales(args.scales, cfg)
    if args.path == "spectral":
        W = nsawt_spectral(f, psi, sg, cfg.matrix, t_grid=_t_grid(args.t, None))
    else:
        W = nsawt_direct(f, psi, _t_grid(args.t, f.grid), sg, cfg.matrix)
    io.write_scalogram_csv(args.out, W)
    if args.heatmap:
        io.write_heatmap_svg(args.heatmap, W)
    out.put("translations", W.t_grid[2])
    out.put("scales", W.scale_grid.count)
    out.put("peak_magnitude", float(np.abs(W.coeffs).max()))
    return OK


def _constant_for(args, psi, m, *signals) -> float:
    if getattr(args, "c_psi", None) is not None:
        return float(args.c_psi)
    return gated_constant(admissibility_for(psi, m, *signals))


def cmd_nsawt_invert(args, out: Output) -> int:
    cfg = _matrix(args)
    psi = parse_wavelet(args.wavelet or cfg.wavelet)
    W = io.read_scalogram_csv(args.infile, cfg.matrix, psi.name)
    grid = parse_triple(args.grid, "output grid") if args.grid else W.t_grid
    if args.c_psi is not None:
        c = float(args.c_psi)
    else:
        # the unnormalised synthesis carries the signal's band
        c = _constant_for(args, psi, cfg.matrix, synthesize(W, psi, grid))
    f = nsawt_invert(W, psi, grid, c)
    io.write_signal_csv(args.out, f)
    out.put("c_psi", c)
    out.put("samples", f.n)
    return OK


def cmd_admissibility(args, out: Output) -> int:
    cfg = _matrix(args)
    psi = parse_wavelet(args.wavelet or cfg.wavelet)
    if args.omega:
        lo, hi, n = parse_triple(args.omega, "frequency grid")
        omega = FrequencyGrid.span(lo, hi, n).omega
    elif args.infile:
        omega = signal_band(cfg.matrix, io.read_signal_csv(args.infile))
    else:
        raise SaftError("admissibility needs --omega or --in")
    try:
        if args.scales:
            rep = admissibility(psi, cfg.matrix, omega, ScaleGrid.parse(args.scales))
        else:
            rep = admissibility_for(psi, cfg.matrix, omega=omega)
    except DivergentAdmissibility as exc:
        out.put("status", "divergent")
        out.put("detail", str(exc))
        return FAILED
    sg = rep.scale_grid
    out.put("scale_grid", f"{io.fmt(sg.zeta_min)}:{io.fmt(sg.zeta_max)}:{sg.count}")
    out.put("c_psi_mean", rep.c_psi_mean)
    out.put("relative_spread", rep.relative_spread)
    gate = cfg.tol("admissibility_spread")
    out.put("status", "pass" if rep.relative_spread <= gate else "spread-too-large")
    if args.table:
        with open(args.table, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["omega", "c_psi"])
            w.writerows([io.fmt(a), io.fmt(b)] for a, b in zip(rep.omega_grid, rep.c_psi_per_omega))
    return OK if rep.relative_spread <= gate else FAILED


def cmd_moyal(args, out: Output) -> int:
    cfg = _matrix(args)
    f = io.read_signal_csv(args.f)
    g = io.read_signal_csv(args.g) if args.g else f
    psi = parse_wavelet(args.wavelet or cfg.wavelet)
    sg = _scales(args.scales, cfg)
    tg = _t_grid(args.t, cfg.translations)
    c = None if args.c_psi is None else float(args.c_psi)
    lhs, rhs, c = moyal_terms(f, g, psi, cfg.matrix, tg, sg, c)
    denom = c * norm(f) * norm(g)
    r = abs(lhs - rhs) / denom if denom else abs(lhs - rhs)
    out.put("lhs", lhs)
    out.put("rhs", rhs)
    out.put("c_psi", c)
    out.put("moyal_residual", r)
    ok = r <= cfg.tol("moyal")
    out.put("status", "pass" if ok else "fail")
    return OK if ok else FAILED


def cmd_range(args, out: Output) -> int:
    cfg = _matrix(args)
    f = io.read_signal_csv(args.infile)
    psi = parse_wavelet(args.wavelet or cfg.wavelet)
    sg = _scales(args.scales, cfg)
    tg = _t_grid(args.t, cfg.translations)
    c = _constant_for(args, psi, cfg.matrix, f)
    W = nsawt_direct(f, psi, tg, sg, cfg.matrix)
    r = range_projection_residual(W, psi, f, c)
    out.put("range_residual", r)
    ok = r <= cfg.tol("range")
    if args.noise_seed is not None:
        rng = np.random.default_rng(args.noise_seed)
        shape = W.coeffs.shape
        noise = W.with_coeffs(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        rn = range_projection_residual(noise, psi, f, c)
        out.put("noise_residual", rn)
        ok = ok and rn >= cfg.tol("range_noise")
    out.put("status", "pass" if ok else "fail")
    return OK if ok else FAILED


def cmd_localize(args, out: Output) -> int:
    cfg = _matrix(args)
    psi = parse_wavelet(args.wavelet or cfg.wavelet)
    base = mother_stats(psi)
    pred, meas = daughter_window_law(psi, args.t, args.zeta, cfg.matrix)
    out.put("mother_center", base.center)
    out.put("mother_radius", base.radius)
    out.put("predicted_center", pred.center)
    out.put("predicted_radius", pred.radius)
    out.put("measured_center", meas.center)
    out.put("measured_radius", meas.radius)
    s = safd_window(psi, args.zeta, cfg.matrix)
    out.put("safd_center", s.center)
    out.put("safd_radius", s.radius)
    try:
        out.put("q_factor", float(q_factor(psi, cfg.matrix, [args.zeta])[0]))
    except SaftError as exc:
        out.put("q_factor", f"undefined ({type(exc).__name__})")
    box = tf_box(psi, args.t, args.zeta, cfg.matrix)
    out.put("box_time", list(box.time))
    out.put("box_freq", list(box.freq))
    out.put("box_area", box.area)
    return OK


def _report_dict(r) -> dict:
    d = {"name": r.name, "lhs": r.lhs, "rhs": r.rhs, "ratio": r.ratio,
         "passed": r.passed, "tolerance": r.tolerance}
    d.update({k: v for k, v in r.extra.items()})
    return d


def cmd_uncertainty(args, out: Output) -> int:
    cfg = _matrix(args)
    if args.battery:
        rows = battery(cfg.grid)
        ok = all(r.passed for _, _, r in rows)
        if args.out:
            with open(args.out, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["signal", "matrix", "check", "lhs", "rhs", "ratio", "status"])
                for s, m, r in rows:
                    w.writerow([s, m, r.name, io.fmt(r.lhs), io.fmt(r.rhs), io.fmt(r.ratio),
                                "pass" if r.passed else "fail"])
        out.put("reports", len(rows))
        out.put("failures", sum(not r.passed for _, _, r in rows))
        out.put("min_heisenberg_ratio", min(r.ratio for _, _, r in rows if r.name == "heisenberg"))
        return OK if ok else FAILED
    if not args.infile:
        raise SaftError("uncertainty needs --in or --battery")
    f = io.read_signal_csv(args.infile)
    kind, _, arg = (args.check or "heisenberg").partition(":")
    if kind == "heisenberg":
        r = heisenberg_saft(f, cfg.matrix)
    elif kind == "generalized":
        r = generalized_saft(f, cfg.matrix, float(arg or 2))
    elif kind == "pitt":
        r = pitt_saft(f, cfg.matrix, float(arg or 0.5))
    elif kind == "nsawt":
        psi = parse_wavelet(args.wavelet or cfg.wavelet)
        r = heisenberg_nsawt(f, psi, cfg.matrix, _t_grid(args.t, cfg.translations),
                             _scales(args.scales, cfg))
    else:
        raise SaftError(f"unknown check {args.check!r}")
    for k, v in _report_dict(r).items():
        out.put(k, v)
    return OK if r.passed else FAILED


def _kv(text: str | None) -> dict:
    params = {}
    for item in (text or "").split(","):
        if not item.strip():
            continue
        k, _, v = item.partition("=")
        v = v.strip()
        params[k.strip()] = int(v) if k.strip() == "n" else float(v)
    return params


def cmd_generate(args, out: Output) -> int:
    if args.grid:
        grid = parse_triple(args.grid, "grid")
    else:
        cfg = load_config(args.config, args.matrix)
        grid = cfg.grid
    try:
        params = _kv(args.params)
    except ValueError as exc:
        raise SaftError(f"cannot parse parameters {args.params!r}") from exc
    if args.kind == "morlet" and "omega0" in params:
        params["omega0"] = float(params["omega0"])
    f = generate(args.kind, grid, **params)
    io.write_signal_csv(args.out, f)
    out.put("samples", f.n)
    out.put("norm", norm(f))
    return OK


def _write_report(path: str, results) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for r in results:
            w.writerow(r.row())


def cmd_verify_all(args, out: Output) -> int:
    try:
        cfg = load_config(args.config, args.matrix)
    except SaftError as exc:
        row = CheckResult("config", math.nan, math.nan, "", False, f"{type(exc).__name__}: {exc}")
        _write_report(args.out or RunConfig().report, [row])
        raise
    results = run_checks(cfg)
    path = args.out or cfg.report
    _write_report(path, results)
    failed = [r.name for r in results if not r.passed]
    if not out.quiet and not out.as_json:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<26} {io.fmt(r.value)}")
    out.put("report", path)
    out.put("checks", len(results))
    out.put("failed", failed)
    return FAILED if failed else OK


# -- parser ----------------------------------------------------------------------

def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--matrix", default=d(None),
                   help="A,B,C,D[,p,q] or fourier | fresnel:B[,p,q] | fractional:theta[,p,q]")
    p.add_argument("--config", default=d(None), help="configuration file")
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--quiet", action="store_true", default=d(False), help="suppress normal output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="saftw", description="SAFT and special affine wavelet toolkit")
    _globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("saft", cmd_saft, "forward transform of a signal CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--path", choices=["direct", "fast"], default="direct")
    p.add_argument("--omega", help="direct-path grid lo:hi:count")

    p = add("isaft", cmd_isaft, "inverse transform of a spectrum CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--path", choices=["direct", "fast"], default="fast")
    p.add_argument("--grid", help="direct-path output grid x0:dx:n")

    p = add("conv", cmd_conv, "chirp-modulated convolution")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--check-theorem", action="store_true")

    def wavelet_args(p, t=True):
        p.add_argument("--wavelet", help="morlet[:w0] | cmorlet[:w0] | mexhat | gaussian[:s] | csv:PATH")
        p.add_argument("--scales", help="zmin:zmax:count")
        if t:
            p.add_argument("--t", help="translation grid t0:dt:count")

    p = add("nsawt", cmd_nsawt, "wavelet scalogram of a signal CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--path", choices=["direct", "spectral"], default="direct")
    p.add_argument("--heatmap")
    wavelet_args(p)

    p = add("nsawt-invert", cmd_nsawt_invert, "reconstruct a signal from a scalogram CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--grid", help="output grid x0:dx:n")
    p.add_argument("--c-psi", type=float)
    p.add_argument("--wavelet")

    p = add("admissibility", cmd_admissibility, "admissibility constant across frequencies")
    p.add_argument("--in", dest="infile")
    p.add_argument("--omega", help="lo:hi:count")
    p.add_argument("--table", help="write omega,c_psi CSV")
    wavelet_args(p, t=False)

    p = add("moyal-check", cmd_moyal, "Moyal identity residual")
    p.add_argument("--f", required=True)
    p.add_argument("--g")
    p.add_argument("--c-psi", type=float)
    wavelet_args(p)

    p = add("range-check", cmd_range, "reproducing-kernel range residual")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--c-psi", type=float)
    p.add_argument("--noise-seed", type=int)
    wavelet_args(p)

    p = add("localize", cmd_localize, "window statistics, Q-factor and time-frequency box")
    p.add_argument("--wavelet")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--zeta", type=float, default=1.0)

    p = add("uncertainty", cmd_uncertainty, "uncertainty inequalities")
    p.add_argument("--in", dest="infile")
    p.add_argument("--check", help="heisenberg | generalized:p | pitt:alpha | nsawt")
    p.add_argument("--battery", action="store_true")
    p.add_argument("--out", help="battery CSV")
    wavelet_args(p)

    p = add("generate", cmd_generate, "sample an analytic test function")
    p.add_argument("kind", choices=sorted(FAMILIES))
    p.add_argument("--params", help="comma-separated key=value, e.g. sigma=1,x0=0")
    p.add_argument("--grid", help="x0:dx:n")
    p.add_argument("--out", required=True)

    p = add("verify-all", cmd_verify_all, "run the full theorem suite")
    p.add_argument("--out", help="report CSV (default from config)")
    return parser


_GRID_OPTIONS = {"--t", "--grid", "--omega", "--scales"}


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Let grid options take values such as ``-8:0.25:65``."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _GRID_OPTIONS and nxt[:1] == "-" and nxt[1:2] in set("0123456789."):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code not in (0, None) else OK
    out = Output(args.json, args.quiet)
    try:
        with warnings.catch_warnings():
            if args.quiet:
                warnings.simplefilter("ignore")
            code = args.func(args, out)
    except (DivergentAdmissibility, AdmissibilitySpreadTooLarge) as exc:
        out.put("error", f"{type(exc).__name__}: {exc}")
        out.flush()
        return FAILED
    except (SaftError, OSError) as exc:
        print(f"saftw: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INVALID
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
