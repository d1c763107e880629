"""Command-line front end.

    pdmsqueeze transform  [--alpha A --beta B --a0 .. --a1 .. --a3-sign {plus,minus,auto}]
    pdmsqueeze spectrum   [--case {morse,constant-mass}] [--k-levels K]
    pdmsqueeze verify     [--corrupt-stencil]
    pdmsqueeze figures

Common options may also come from a flat ``key=value`` file given with
``--config``; one setting per line, ``#`` starts a comment, keys are the long
option names without dashes prefix (``a3-sign=minus``, ``xmin=-6``).  Flags
override the file, the file overrides defaults.

Exit codes: 0 ok, 1 verification failure, 2 domain/parameter error, 3 I/O
error, 4 insufficient bound states, 5 ambiguous sign/convention resolution.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import catalog as cat
from . import eigensolve as es
from . import operators as op
from . import verify as vf
from .errors import AmbiguousResolution, DomainError, InsufficientBoundStates, ParamError
from .fields import GridSpec
from .transform import Convention, DEFAULT_K, DEFAULT_TOL, TransformSeries, transformed_potential

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_IO, EXIT_BOUND, EXIT_AMBIGUOUS = 0, 1, 2, 3, 4, 5

SIGNS = {"plus": 1, "minus": -1, "auto": "auto"}

# (dest, type) for every option that can also appear in a config file
OPTIONS = {
    "alpha": float, "beta": float, "a0": float, "a1": float, "a3_sign": str,
    "convention": str, "xmin": float, "xmax": float, "n": int, "k_levels": int,
    "K_terms": int, "tol": float, "out": str, "format": str, "case": str, "m0": float,
}

DEFAULTS = {
    "alpha": cat.MORSE_ACCEPTANCE.alpha,
    "beta": cat.MORSE_ACCEPTANCE.beta,
    "a0": cat.MORSE_ACCEPTANCE.a0,
    "a1": cat.MORSE_ACCEPTANCE.a1,
    "a3_sign": "minus",
    "convention": "slope_eighth",
    "xmin": None,
    "xmax": None,
    "n": None,
    "k_levels": 4,
    "K_terms": DEFAULT_K,
    "tol": DEFAULT_TOL,
    "out": ".",
    "format": "csv",
    "case": "morse",
    "m0": 2.0,
}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    alpha: float
    beta: float
    a0: float
    a1: float
    a3_sign: int | str
    convention: str
    xmin: float | None
    xmax: float | None
    n: int | None
    k_levels: int
    K_terms: int
    tol: float
    out: Path
    format: str
    case: str
    m0: float
    corrupt_stencil: bool = False

    def example(self, sign: int | None = None) -> cat.ExampleConfig:
        s = sign if sign is not None else (self.a3_sign if self.a3_sign != "auto" else -1)
        return cat.ExampleConfig(self.alpha, self.beta, self.a0, self.a1, s)


# config handling ------------------------------------------------------------------------


def read_config_file(path: str) -> dict:
    """Parse a flat key=value file into option values (strings converted by type)."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        dest = key.lstrip("-").replace("-", "_")
        if dest not in OPTIONS:
            raise ParamError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[dest] = OPTIONS[dest](val)
        except ValueError as exc:
            raise ParamError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--config", help="flat key=value file with any of the options below")
    common.add_argument("--alpha", type=float, default=S, help="generator amplitude (default 0.1)")
    common.add_argument("--beta", type=float, default=S, help="generator rate (default 0.5)")
    common.add_argument("--a0", type=float, default=S, help="potential constant term (default 1)")
    common.add_argument("--a1", type=float, default=S, help="potential e^{-beta x} coefficient (default 400)")
    common.add_argument("--a3-sign", dest="a3_sign", choices=sorted(SIGNS), default=S, help="sign of the e^{beta x} coefficient (default minus); auto runs the conjugation resolver")
    common.add_argument("--convention", choices=["slope_eighth", "slope_half", "auto"], default=S, help="quantum-correction form (default slope_eighth); auto runs the conjugation resolver")
    common.add_argument("--xmin", type=float, default=S)
    common.add_argument("--xmax", type=float, default=S)
    common.add_argument("--n", type=int, default=S, help="number of interior grid nodes")
    common.add_argument("--k-levels", dest="k_levels", type=int, default=S, help="levels to compare (default 4)")
    common.add_argument("--K-terms", dest="K_terms", type=int, default=S, help=f"series truncation (default {DEFAULT_K})")
    common.add_argument("--tol", type=float, default=S, help=f"series early-stop tolerance (default {DEFAULT_TOL:g})")
    common.add_argument("--out", default=S, help="output directory (default .)")
    common.add_argument("--format", choices=["csv", "json"], default=S)
    common.add_argument("--case", choices=["morse", "constant-mass"], default=S, help="example to run (default morse)")
    common.add_argument("--m0", type=float, default=S, help="constant mass for the constant-mass case (default 2)")

    p = argparse.ArgumentParser(prog="pdmsqueeze", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("transform", parents=[common], help="tabulate G, f, V, V_tilde and W on a grid")
    sub.add_parser("spectrum", parents=[common], help="compare lowest levels of the PDM and transformed Hamiltonians")
    pv = sub.add_parser("verify", parents=[common], help="run acceptance checks A1..A8 and write a JSON report")
    pv.add_argument("--corrupt-stencil", action="store_true", help="negative control: misplace the half-node masses")
    sub.add_parser("figures", parents=[common], help="write the mass and potential plot data")
    return p


def resolve_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for key in OPTIONS:
        if hasattr(args, key):
            values[key] = getattr(args, key)
    sign = values["a3_sign"]
    if isinstance(sign, str):
        if sign not in SIGNS:
            raise ParamError(f"a3-sign must be one of {sorted(SIGNS)}, got {sign!r}")
        values["a3_sign"] = SIGNS[sign]
    if values["convention"] not in ("slope_eighth", "slope_half", "auto"):
        raise ParamError(f"unknown convention {values['convention']!r}")
    if values["format"] not in ("csv", "json"):
        raise ParamError(f"unknown format {values['format']!r}")
    if values["case"] not in ("morse", "constant-mass"):
        raise ParamError(f"unknown case {values['case']!r}")
    if values["k_levels"] < 0:
        raise ParamError("k-levels must be nonnegative")
    if values["K_terms"] < 1:
        raise ParamError("K-terms must be at least 1")
    if values["m0"] <= 0:
        raise ParamError("m0 must be positive")
    if not values["tol"] > 0:
        raise ParamError("tol must be positive")
    if values.get("n") is not None and values["n"] < 3:
        raise ParamError(f"n must be at least 3, got {values['n']}")
    lo, hi = values.get("xmin"), values.get("xmax")
    if lo is not None and hi is not None and not lo < hi:
        raise ParamError(f"xmin={lo} must be below xmax={hi}")
    values["out"] = Path(values["out"])
    cfg = RunConfig(subcommand=args.subcommand, corrupt_stencil=getattr(args, "corrupt_stencil", False), **values)
    cfg.example()  # validates alpha, beta, a0
    return cfg


# output -----------------------------------------------------------------------------------


def fmt(v) -> str:
    """17 significant digits; NaN (outside a domain) is written as an empty cell."""
    if v is None:
        return ""
    v = float(v)
    return "" if math.isnan(v) else f"{v:.17g}"


def write_table(path: Path, columns: dict[str, np.ndarray], fmt_kind: str = "csv") -> Path:
    path = path.with_suffix("." + fmt_kind)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    nrows = len(next(iter(columns.values()))) if columns else 0
    with open(path, "w", newline="") as fh:
        if fmt_kind == "csv":
            w = csv.writer(fh)
            w.writerow(names)
            for i in range(nrows):
                w.writerow([fmt(columns[c][i]) for c in names])
        else:
            rows = [{c: (None if math.isnan(float(columns[c][i])) else float(columns[c][i])) for c in names} for i in range(nrows)]
            json.dump({"columns": names, "rows": rows}, fh, indent=1)
    return path


def read_table(path: Path) -> dict[str, np.ndarray]:
    """Inverse of :func:`write_table` (empty cells become NaN)."""
    path = Path(path)
    if path.suffix == ".json":
        data = json.loads(path.read_text())
        return {c: np.array([np.nan if r[c] is None else r[c] for r in data["rows"]], dtype=float) for c in data["columns"]}
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    names = rows[0]
    return {c: np.array([float(r[j]) if r[j] else np.nan for r in rows[1:]], dtype=float) for j, c in enumerate(names)}


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    ok = ~(np.isnan(a) | np.isnan(b))
    return float(np.max(np.abs(a[ok] - b[ok]))) if np.any(ok) else float("nan")


# subcommands ------------------------------------------------------------------------------


def _grid(cfg: RunConfig, lo: float, hi: float, n: int) -> GridSpec:
    return GridSpec(cfg.xmin if cfg.xmin is not None else lo, cfg.xmax if cfg.xmax is not None else hi, cfg.n if cfg.n is not None else n)


def _sign_and_convention(cfg: RunConfig) -> tuple[int, Convention]:
    sign, conv = cfg.a3_sign, cfg.convention
    if sign == "auto" or conv == "auto":
        res = vf.resolve_sign_and_convention(strict=True)
        sign = res.sign if sign == "auto" else sign
        if conv == "auto":
            finest = res.scores[max(res.scores)]
            conv = min(Convention, key=lambda c: finest[(sign, c)]).value
    return int(sign), Convention(conv)


def transform_table(cfg: RunConfig, sign: int, conv: Convention) -> dict[str, np.ndarray]:
    """One row per node.  Cells are left empty (NaN) where a quantity is undefined:
    f and W outside the admissible domain, G and V_tilde where g vanishes."""
    grid = _grid(cfg, -2.0, 4.0, 599)
    x = grid.nodes
    nan = np.full_like(x, np.nan)
    if cfg.case == "constant-mass":
        case = cat.ConstantMassCase(cfg.m0)
        m, g, V = case.mass, case.mass_generator(), case.potential
        G_closed = np.full_like(x, 1 / math.sqrt(cfg.m0))
        f_closed = (1 / math.sqrt(cfg.m0) - 1) * x
        target, target_name = case.squeezed_potential.eval(x), "W_target"
        ok_f = np.ones_like(x, dtype=bool)
    else:
        ex = cfg.example(sign)
        m, g, V = cat.mass_family(ex.alpha, ex.beta), cat.generator_for_mass(ex.alpha, ex.beta), cat.potential_family(ex)
        G_closed = cat.G_closed(ex.alpha, ex.beta).eval(x)
        ok_f = x < ex.x_star
        f_closed = nan.copy()
        f_closed[ok_f] = cat.f_closed(ex.alpha, ex.beta).eval(x[ok_f])
        target_name = "W_morse_target"
        try:
            target = cat.morse_potential(cat.morse_from_config(ex)).eval(x)
        except ParamError:
            target = nan.copy()
    spec = transformed_potential(V, g, cfg.K_terms, cfg.tol, conv)
    gx = g.eval(x) * np.ones_like(x)
    ok_G = gx != 0
    ok_f &= TransformSeries(g, cfg.K_terms, cfg.tol).admissible(x)
    f_series, W, G_series, V_tilde = nan.copy(), nan.copy(), nan.copy(), nan.copy()
    if np.any(ok_f):
        f_series[ok_f] = spec.f.eval(x[ok_f])
    ok_W = ok_f.copy()
    ok_W[ok_f] = g.eval(x[ok_f] + f_series[ok_f]) != 0
    if np.any(ok_G):
        G_series[ok_G] = spec.G.eval(x[ok_G])
        V_tilde[ok_G] = spec.v_tilde.eval(x[ok_G])
    if np.any(ok_W):
        W[ok_W] = spec.W.eval(x[ok_W])
    target = np.where(ok_f, target, np.nan)
    return {
        "x": x,
        "m": m.eval(x) * np.ones_like(x),
        "g": gx,
        "G_series": G_series,
        "G_closed": G_closed,
        "f_series": f_series,
        "f_closed": f_closed,
        "V": V.eval(x),
        "V_tilde": V_tilde,
        "W": W,
        target_name: target,
    }


def cmd_transform(cfg: RunConfig) -> int:
    sign, conv = (1, Convention.SLOPE_EIGHTH) if cfg.case == "constant-mass" else _sign_and_convention(cfg)
    table = transform_table(cfg, sign, conv)
    path = write_table(cfg.out / "transform", table, cfg.format)
    target = table.get("W_morse_target", table.get("W_target"))
    n_ok = int(np.sum(~np.isnan(table["W"])))
    print(f"wrote {path} ({len(table['x'])} rows, {n_ok} admissible); a3_sign={sign:+d} convention={conv.value}")
    print(f"max|W - target| = {fmt(max_abs_diff(table['W'], target))}")
    return EXIT_OK


def spectrum_report(cfg: RunConfig) -> tuple[es.SpectrumReport, str | None]:
    """Returns the comparison and, if applicable, the insufficient-bound-state message."""
    k = cfg.k_levels
    if cfg.case == "constant-mass":
        case = cat.ConstantMassCase(cfg.m0)
        grid = _grid(cfg, -10.0, 10.0, 2000)
        A = op.hamiltonian_bdd(case.mass, case.potential, grid, "pdm")
        B = op.hamiltonian_constant(case.squeezed_potential, grid, "transformed")
        return es.spectrum_compare(A, B, k), None
    ex = cfg.example()
    u_lo = cfg.xmin if cfg.xmin is not None else 1.5
    offset = ex.x_star - cfg.xmax if cfg.xmax is not None else 0.5
    if offset <= 0:
        raise DomainError(f"--xmax must lie below x_star = {ex.x_star}")
    setup = vf.MorseSpectralSetup(ex, u_lo, offset, cfg.n if cfg.n is not None else 1999)
    if k == 0:
        return es.spectrum_compare(setup.pdm(), setup.morse(), 0), None
    try:
        return vf.morse_spectra(setup, k), None
    except InsufficientBoundStates as exc:
        return exc.report, str(exc)


def cmd_spectrum(cfg: RunConfig) -> int:
    rep, problem = spectrum_report(cfg)
    table = {
        "level": np.arange(rep.k, dtype=float),
        "E_pdm": rep.eigs_A,
        "E_transformed": rep.eigs_B,
        "abs_diff": rep.per_level_abs_diff,
        "rel_diff": rep.per_level_rel_diff,
    }
    path = write_table(cfg.out / "spectrum", table, cfg.format)
    print(f"wrote {path}")
    print(f"{'level':>5} {'E_pdm':>22} {'E_transformed':>22} {'rel_diff':>10}")
    for i, a, b, _, r in rep.rows():
        print(f"{i:5d} {fmt(a):>22} {fmt(b):>22} {r:10.3e}")
    if rep.k:
        print(f"max rel_diff = {fmt(rep.max_rel_diff)}")
    if problem:
        print(f"error: {problem}", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    vcfg = vf.VerifyConfig(
        a3_sign=cfg.a3_sign,
        convention=cfg.convention,
        m0=cfg.m0,
        k_levels=max(cfg.k_levels, 1),
        corrupt_stencil=cfg.corrupt_stencil,
        morse=cat.ExampleConfig(cfg.alpha, cfg.beta, cfg.a0, cfg.a1),
        tol=cfg.tol,
    )
    if cfg.K_terms != DEFAULT_K:
        vcfg = replace(vcfg, K_series=cfg.K_terms)
    report = vf.run_all(vcfg)
    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / "verify.json"
    path.write_text(report.to_json(indent=1))
    if cfg.format == "csv":
        rows = [(c.name, p.part, p.status, p.residual, p.threshold) for c in report.checks for p in c.parts]
        with open(cfg.out / "verify.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["check", "part", "status", "residual", "threshold"])
            for name, part, status, r, t in rows:
                w.writerow([name, part, status, fmt(r), fmt(t)])
    print("\n".join(report.summary_lines()))
    res = report.resolved
    tag = "certified" if res.get("certified") else "NOT certified"
    print(f"resolved: a3_sign={res['a3_sign']:+d} convention={res['convention']} ({tag})")
    for reason in res.get("reasons", []):
        print(f"  {reason}")
    print(f"wrote {path}")
    return report.exit_code()


def cmd_figures(cfg: RunConfig) -> int:
    p1 = write_table(cfg.out / "fig1", cat.figure1_data(), cfg.format)
    p2 = write_table(cfg.out / "fig2", cat.figure2_data(), cfg.format)
    print(f"wrote {p1} and {p2}")
    return EXIT_OK


COMMANDS = {"transform": cmd_transform, "spectrum": cmd_spectrum, "verify": cmd_verify, "figures": cmd_figures}


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except (ParamError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except AmbiguousResolution as exc:
        print(f"error: sign/convention not resolved: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except InsufficientBoundStates as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (DomainError, ParamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
