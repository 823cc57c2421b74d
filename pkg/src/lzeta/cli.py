"""Command-line front end.

Every command writes CSV/JSON artifacts into ``--out`` and prints their paths
on stdout; progress goes to stderr. Exit codes: 0 success, 2 input error,
3 numeric failure, 4 coverage error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import shutil
import sys
from pathlib import Path

import numpy as np

from . import lfunc, model, paircorr, stats
from .characters import parse_character
from .zeta_zeros import (
    CoverageError,
    MissedZeroError,
    ZeroFileError,
    ZeroList,
    cache_dir,
    first_zeros,
    load_zeros,
    save_zeros,
    scan_zeros,
)

log = logging.getLogger("lzeta")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_COVERAGE = 0, 2, 3, 4

DEFAULTS = {
    "zeros": {"step": 0.02, "start": 0.0},
    "dist": {"evaluator": "true_L", "X2": 10000, "bins": 60, "omegas": "0.5,1,2"},
    "model": {"X2": 100, "samples": 100000, "seed": 0, "moments": "0,1,2,3,4", "omegas": "0.5,1,2,4", "K": 40},
    "paircorr": {"alphas": "0:2:0.1", "eps": "0.25,0.5,1.0", "deltas": "1.0", "first": 10000},
    "avalues": {"a": "0", "deltas": "0.3,0.1,0.03,0.01"},
}


class UsageError(ValueError):
    pass


# -- parsing helpers -------------------------------------------------------------

def _floats(s: str) -> list[float]:
    return [float(x) for x in str(s).split(",") if x.strip()]


def _complex(s: str) -> complex:
    return complex(str(s).strip().replace("i", "j").replace(" ", ""))


def _range(s: str) -> np.ndarray:
    """'a:b:step' (inclusive of b up to rounding) or a comma list."""
    if ":" in str(s):
        a, b, h = (float(x) for x in str(s).split(":"))
        if h <= 0 or b < a:
            raise UsageError(f"bad range {s!r}")
        n = int(math.floor((b - a) / h + 1e-9))
        return a + h * np.arange(n + 1)
    return np.array(_floats(s))


def _chars(s: str):
    try:
        return [parse_character(x.strip()) for x in str(s).split(",") if x.strip()]
    except (ValueError, KeyError, IndexError) as e:
        raise UsageError(f"bad character list {s!r}: {e}") from None


def _index_windows(s: str) -> list[tuple[int, int]]:
    out = []
    for part in str(s).split(","):
        lo, _, hi = part.partition("-")
        out.append((int(lo), int(hi)))
    w = sorted(out)
    for (a, b), (c, d) in zip(w, w[1:]):
        if c <= b:
            raise UsageError(f"windows {a}-{b} and {c}-{d} overlap")
    return out


def read_config_file(path) -> dict:
    """Flat ``key=value`` lines; ``#`` comments and blank lines are skipped."""
    cfg = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        k, sep, v = s.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        cfg[k.strip().replace("-", "_")] = v.strip()
    return cfg


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < explicit flags into a plain dict."""
    cfg = dict(DEFAULTS.get(args.command, {}))
    if args.config:
        cfg.update(read_config_file(args.config))
    for k, v in vars(args).items():
        if v is not None and k not in ("config", "func"):
            cfg[k] = v
    return cfg


# -- artifacts -----------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, Path):
        return str(x)
    return x


def _file_hash(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


class Run:
    """Output directory, provenance and content-addressed result cache."""

    def __init__(self, cfg: dict):
        self.cfg = {k: v for k, v in cfg.items() if k not in ("out", "cache", "verbose", "workers")}
        self.out = Path(cfg.get("out") or "lzeta-out")
        self.out.mkdir(parents=True, exist_ok=True)
        self.cache = Path(cfg.get("cache") or cache_dir())
        inputs = dict(self.cfg)
        if cfg.get("zeros_file"):
            inputs["zeros_sha256"] = _file_hash(cfg["zeros_file"])
        blob = json.dumps(_jsonable(inputs), sort_keys=True).encode()
        self.hash = hashlib.sha256(blob).hexdigest()
        self.paths: list[Path] = []

    def provenance(self) -> dict:
        return {"run_config": _jsonable(self.cfg), "input_hash": self.hash}

    def write_json(self, name: str, payload: dict) -> Path:
        p = self.out / name
        body = {**self.provenance(), **_jsonable(payload)}
        p.write_text(json.dumps(body, sort_keys=True, indent=2) + "\n")
        self.paths.append(p)
        return p

    def write_csv(self, name: str, header: list[str], rows) -> Path:
        p = self.out / name
        with open(p, "w", newline="") as fh:
            fh.write(f"# input_hash={self.hash}\n")
            fh.write(f"# run_config={json.dumps(_jsonable(self.cfg), sort_keys=True)}\n")
            w = csv.writer(fh)
            w.writerow(header)
            for r in rows:
                w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
        self.paths.append(p)
        return p

    def cached(self, op: str) -> Path:
        return self.cache / "results" / f"{op}-{self.hash[:20]}"

    def restore(self, op: str) -> bool:
        d = self.cached(op)
        if not d.is_dir():
            return False
        for f in sorted(d.iterdir()):
            dst = self.out / f.name
            shutil.copyfile(f, dst)
            self.paths.append(dst)
        log.info("reused cached results from %s", d)
        return True

    def store(self, op: str) -> None:
        d = self.cached(op)
        d.mkdir(parents=True, exist_ok=True)
        for p in self.paths:
            shutil.copyfile(p, d / p.name)


def _zero_source(cfg: dict, run: Run) -> ZeroList:
    if cfg.get("zeros_file"):
        return load_zeros(cfg["zeros_file"])
    n = int(cfg.get("first") or 10000)
    return first_zeros(n)


# -- commands -------------------------------------------------------------------

def cmd_zeros(cfg: dict) -> list[Path]:
    run = Run(cfg)
    action = cfg["action"]
    if action == "import":
        z = load_zeros(cfg["path"])
        name = f"zeros_import_{len(z)}.txt"
    elif action == "scan":
        hi = float(cfg["to"])
        z = scan_zeros(float(cfg.get("start", 0.0)), hi, float(cfg["step"]))
        name = f"zeros_scan_{float(cfg.get('start', 0.0)):g}_{hi:g}.txt"
    else:  # first
        z = first_zeros(int(cfg["n"]))
        name = f"zeros_first_{len(z)}.txt"
    p = save_zeros(z, run.out / name)
    run.paths.append(p)
    return run.paths


def cmd_dist(cfg: dict) -> list[Path]:
    run = Run(cfg)
    if run.restore("dist"):
        return run.paths
    chis = _chars(cfg["chars"])
    coeffs = _floats(cfg["coeffs"]) if cfg.get("coeffs") else []
    if not coeffs or len(coeffs) != len(chis):
        raise UsageError("--coeffs must list one nonzero real per character")
    zeros = _zero_source(cfg, run)
    X = math.sqrt(float(cfg["X2"]))
    omegas = _floats(cfg["omegas"])
    evaluators = ["true_L", "selberg_poly"] if cfg["evaluator"] == "both" else [cfg["evaluator"]]
    report: dict = {"n_zeros": len(zeros), "T": zeros.T}
    Lv = None
    if "true_L" in evaluators:
        Lv = lfunc.L_at_zeros(zeros, chis, run.cache / "lvalues")
    for ev in evaluators:
        raw = stats.build_sample(zeros, coeffs, chis, ev, X=X, L_values=Lv)
        s = stats.standardize(raw, coeffs)
        cf = stats.char_fn_empirical(s, omegas)
        report[ev] = {
            "n_included": len(s),
            "n_excluded": int(s.excluded.size),
            "excluded": s.excluded,
            "divisor": s.divisor,
            "ks_normal": stats.ks_normal(s),
            "mean": float(np.mean(s.values)),
            "variance": float(np.var(s.values)),
            "proportion_pm1.96": stats.proportion_in_interval(s, -1.96, 1.96),
            "char_fn": [{"omega": w, "re": c.real, "im": c.imag, "gaussian": math.exp(-w * w / 2)} for w, c in zip(omegas, cf)],
        }
        run.write_csv(f"hist_{ev}.csv", ["bin_lo", "bin_hi", "count", "density"], stats.histogram_rows(s, int(cfg["bins"])))
    if len(chis) >= 2 and Lv is not None:
        cov = stats.covariance_matrix(zeros, chis, L_values=Lv)
        report["covariance"] = {"labels": cov.labels, "matrix": cov.matrix, "n_points": cov.n_points, "means": cov.means}
    run.write_json("dist_report.json", report)
    run.store("dist")
    return run.paths


def cmd_model(cfg: dict) -> list[Path]:
    run = Run(cfg)
    chis = _chars(cfg["chars"])
    coeffs = _floats(cfg["coeffs"]) if cfg.get("coeffs") else []
    if not coeffs or len(coeffs) != len(chis):
        raise UsageError("--coeffs must list one nonzero real per character")
    ks = [int(k) for k in str(cfg["moments"]).split(",")]
    too_big = [k for k in ks if k > model.MAX_EXACT_K]
    if too_big:
        raise UsageError(f"exact moments are refused for k > {model.MAX_EXACT_K} (requested {too_big}); use Monte Carlo")
    config = model.ModelConfig.from_X2(coeffs, chis, int(cfg["X2"]), int(cfg["seed"]))
    T = float(cfg["T"]) if cfg.get("T") else None
    rep = model.model_report(config, ks, _floats(cfg["omegas"]), int(cfg["samples"]), T, int(cfg["K"]))
    run.write_json("model_report.json", rep)
    return run.paths


def cmd_paircorr(cfg: dict) -> list[Path]:
    run = Run(cfg)
    if run.restore("paircorr"):
        return run.paths
    (chi,) = _chars(cfg["chi"])
    zeros = _zero_source(cfg, run)
    T = float(cfg["T"]) if cfg.get("T") else zeros.T
    eps = _floats(cfg["eps"])
    margin = max(eps) / math.log(T) + 1.0
    lz = lfunc.L_zeros_upto(chi, T + margin, run.cache / "lzeros")
    lzc = None if chi.is_real else lfunc.L_zeros_upto(chi.conj(), T + margin, run.cache / "lzeros")
    alphas = _range(cfg["alphas"])
    res = paircorr.f_alpha_grid(alphas, T, zeros, lz, lzc)
    run.write_csv("f_alpha.csv", ["alpha", "value"], zip(res.alpha_grid, res.values))
    props = [paircorr.h0_proportion(e, T, zeros, lz) for e in eps]
    run.write_csv("h0_proportion.csv", ["epsilon", "proportion"], zip(eps, props))
    sinc = [paircorr.sinc_kernel_sum(d, T, zeros, lz) for d in _floats(cfg["deltas"])]
    run.write_json("paircorr_report.json", {
        "chi": chi.name, "T": T, "n_zeta_zeros": int(np.count_nonzero(zeros.ordinates <= T)),
        "n_L_zeros": int(np.count_nonzero(lz.ordinates <= T)), "n_pairs": res.n_pairs,
        "truncation_bound": paircorr.truncation_bound(T, zeros), "sinc": sinc,
    })
    run.store("paircorr")
    return run.paths


def cmd_avalues(cfg: dict) -> list[Path]:
    run = Run(cfg)
    chis = _chars(cfg["chars"])
    try:
        cs = [_complex(c) for c in str(cfg["coeffs"]).split(",")]
        a = _complex(cfg["a"])
    except ValueError as e:
        raise UsageError(f"bad complex number: {e}") from None
    if len(cs) != len(chis):
        raise UsageError("--coeffs must list one complex number per character")
    windows_idx = _index_windows(cfg["windows"]) if cfg.get("windows") else None
    if run.restore("avalues"):
        return run.paths
    zeros = _zero_source(cfg, run)
    windows = stats.windows_by_index(zeros, windows_idx) if windows_idx else None
    Lv = lfunc.L_at_zeros(zeros, chis, run.cache / "lvalues")
    deltas = _floats(cfg["deltas"])
    rep = stats.avalue_proportion(zeros, cs, chis, a, deltas, windows, L_values=Lv)
    rows = []
    for (lo, hi), n, props in zip(rep.windows, rep.counts, rep.proportions):
        rows += [(lo, hi, n, d, p) for d, p in zip(deltas, props)]
    run.write_csv("avalue_proportions.csv", ["t_lo", "t_hi", "n_zeros", "delta", "proportion"], rows)
    run.write_json("avalue_report.json", {
        "a": rep.a, "delta_grid": rep.delta_grid, "windows": rep.windows, "counts": rep.counts,
        "proportions": rep.proportions, "dominance": rep.dominance, "factorization": rep.factorization,
    })
    run.store("avalues")
    return run.paths


# -- argument parser ---------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; explicit flags override it")
    p.add_argument("--out", help="output directory (default ./lzeta-out)")
    p.add_argument("--cache", help="cache directory (default $LZETA_CACHE or ~/.cache/lzeta)")
    p.add_argument("--workers", type=int, help="accepted for compatibility; evaluation is single-process")
    p.add_argument("-v", "--verbose", action="store_true", default=None)


def _zero_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--zeros", dest="zeros_file", help="zero file (one ordinate per line)")
    p.add_argument("--first", type=int, help="use the first N zeros (computed and cached)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lzeta", description="Dirichlet L-functions sampled at zeta zeros")
    sub = ap.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zeros", help="import, scan or compute zeta zeros")
    zs = z.add_subparsers(dest="action", required=True)
    zi = zs.add_parser("import", help="validate a zero file and write it canonically")
    zi.add_argument("path")
    _common(zi)
    zc = zs.add_parser("scan", help="sign-change scan of the Hardy Z function")
    zc.add_argument("--from", dest="start", type=float)
    zc.add_argument("--to", type=float, required=True)
    zc.add_argument("--step", type=float)
    _common(zc)
    zf = zs.add_parser("first", help="first N zeros via Gram blocks")
    zf.add_argument("n", type=int)
    _common(zf)
    for q in (zi, zc, zf):
        q.set_defaults(func=cmd_zeros, command="zeros")

    d = sub.add_parser("dist", help="distribution of a linear combination of log|L| at zeros")
    d.add_argument("--chars")
    d.add_argument("--coeffs")
    d.add_argument("--evaluator", choices=["true_L", "selberg_poly", "both"])
    d.add_argument("--X2", type=float)
    d.add_argument("--bins", type=int)
    d.add_argument("--omegas")
    _zero_opts(d)
    _common(d)
    d.set_defaults(func=cmd_dist)

    m = sub.add_parser("model", help="random Euler-product model report")
    m.add_argument("--chars")
    m.add_argument("--coeffs")
    m.add_argument("--X2", type=int)
    m.add_argument("--samples", type=int)
    m.add_argument("--seed", type=int)
    m.add_argument("--moments")
    m.add_argument("--omegas")
    m.add_argument("--T", type=float)
    m.add_argument("--K", type=int)
    _common(m)
    m.set_defaults(func=cmd_model)

    pc = sub.add_parser("paircorr", help="cross pair correlation with zeros of L(s, chi)")
    pc.add_argument("--chi")
    pc.add_argument("--alphas")
    pc.add_argument("--eps")
    pc.add_argument("--deltas")
    pc.add_argument("--T", type=float)
    _zero_opts(pc)
    _common(pc)
    pc.set_defaults(func=cmd_paircorr)

    av = sub.add_parser("avalues", help="proportion of zeros where F(rho) is near a")
    av.add_argument("--chars")
    av.add_argument("--coeffs")
    av.add_argument("--a")
    av.add_argument("--deltas")
    av.add_argument("--windows", help="1-based index windows, e.g. 1-50000,50001-100000")
    _zero_opts(av)
    _common(av)
    av.set_defaults(func=cmd_avalues)
    return ap


REQUIRED = {"dist": ("chars", "coeffs"), "model": ("chars", "coeffs"), "paircorr": ("chi",), "avalues": ("chars", "coeffs")}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _resolve(args)
        missing = [k for k in REQUIRED.get(args.command, ()) if not cfg.get(k)]
        if missing:
            raise UsageError(f"missing required option(s): {', '.join('--' + k for k in missing)}")
        paths = args.func(cfg)
    except CoverageError as e:
        print(f"lzeta: coverage error: {e}", file=sys.stderr)
        return EXIT_COVERAGE
    except (MissedZeroError, lfunc.NearZeroError, stats.EvaluatorError, ArithmeticError, FloatingPointError) as e:
        print(f"lzeta: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ZeroFileError, ValueError, OSError, KeyError) as e:
        print(f"lzeta: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
