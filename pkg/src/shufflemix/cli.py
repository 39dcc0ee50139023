"""Command line front end: canned experiment presets with pass/fail checks.

Each preset writes <preset>.csv (one row per examined case, repr-formatted
floats so reruns are byte-identical) and <preset>.summary.txt (key: value
lines echoing the effective configuration, headline numbers, and one
pass/fail line per check).  Exit status: 0 all checks pass, 1 a check or
numeric run failed, 2 usage or configuration problems.

Monte Carlo presets (couple-b2t, couple-mtf, u-stat) require --seed; a
run is then fully determined by its configuration.  The output directory
comes from --out, else $SHUFFLEMIX_OUT, else a config-file `out` entry,
else the working directory.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from .coupon_bounds import example_weights, mtf_lower_bound_time, tau_u
from .coupling_sim import couple_b2t, couple_mtf, coupling_quantiles, u_stat_final_values, ustat_conditional_means
from .deck_core import ShuffleSpec, bottom_to_top_spec, make_deck
from .errors import CapacityError, CapExceededError, NoConvergenceError
from .exact_analysis import exact_mixing_time, matrix_spectrum, single_card_matrix
from .rng import RngStream
from .spectral import (
    b2t_lower_bound,
    char_poly,
    find_eigenvalue,
    leading_term_bottom_to_top,
    two_point_lower_bound,
)


class ConfigError(Exception):
    """Bad configuration file or flag combination (exit status 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat, fully serializable description of one preset run."""

    preset: str
    n: int | None = None
    k: int | None = None
    family: str | None = None
    samples: int | None = None
    seed: int | None = None
    t_max: int | None = None
    cap: int | None = None
    out: str = "."


_INT_KEYS = {"n", "k", "samples", "seed", "t_max", "cap"}
_STR_KEYS = {"family", "out"}
_MC_PRESETS = {"couple-b2t", "couple-mtf", "u-stat"}


def parse_config_file(path: str) -> dict:
    """Read a flat key=value file; '#' starts a comment anywhere."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    values: dict = {}
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, val = text.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or not key or not val:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        if key in _INT_KEYS:
            try:
                values[key] = int(val)
            except ValueError:
                raise ConfigError(
                    f"{path}:{lineno}: {key} must be an integer, got {val!r}"
                ) from None
        elif key in _STR_KEYS:
            values[key] = val
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


# ---------------------------------------------------------------------------
# presets: each returns (rows, info key/value list, named checks)


def _preset_theorem_3_1(cfg):
    ns = [cfg.n] if cfg.n is not None else [4, 5, 6, 7]
    fams = [cfg.family] if cfg.family else ["a", "c", "d"]
    for n in ns:
        _require(2 <= n <= 7, "exact audit needs 2 <= n <= 7")
    rows, checks = [], []
    for n in ns:
        for fam in fams:
            w = example_weights(fam, n)
            rep = mtf_lower_bound_time(w)
            t_exact = exact_mixing_time(ShuffleSpec.move_to_front(w), make_deck(n))
            upper_ok = t_exact <= rep.tau_u
            lower_ok = (not rep.third_rule_ok) or rep.lower_bound <= t_exact
            rows.append(
                {
                    "n": n,
                    "family": fam,
                    "tau_u": rep.tau_u,
                    "tau_0": rep.tau_0,
                    "tau_1": rep.tau_1,
                    "lower_bound": rep.lower_bound,
                    "sandwich_floor": rep.sandwich_floor,
                    "third_rule_ok": rep.third_rule_ok,
                    "exact_mixing_time": t_exact,
                    "upper_ok": upper_ok,
                    "lower_ok": lower_ok,
                }
            )
            checks.append((f"sandwich_n{n}_{fam}", upper_ok and lower_ok))
    info = [("n_values", " ".join(map(str, ns))), ("families", " ".join(fams))]
    return rows, info, checks


def _preset_tau_u(cfg):
    n = cfg.n if cfg.n is not None else 96
    _require(n >= 2, "need n >= 2")
    fams = [cfg.family] if cfg.family else ["a", "b", "c", "d"]
    rows, checks = [], []
    for fam in fams:
        if fam == "b" and n % 2:
            continue  # that family is defined for even n only
        rep = mtf_lower_bound_time(example_weights(fam, n))
        rows.append(
            {
                "family": fam,
                "n": n,
                "tau_u": rep.tau_u,
                "tau_0": rep.tau_0,
                "tau_1": rep.tau_1,
                "lower_bound": rep.lower_bound,
                "sandwich_floor": rep.sandwich_floor,
                "third_rule_ok": rep.third_rule_ok,
            }
        )
        checks.append((f"order_{fam}", rep.lower_bound <= rep.tau_u))
    _require(bool(rows), "no applicable family for this n")
    info = [("n", n), ("families", " ".join(r["family"] for r in rows))]
    return rows, info, checks


def _spectral_rows(fam_name: str, grid, root_tol):
    rows, checks = [], []
    for n, k in grid:
        if fam_name == "bottom_to_top":
            rep = b2t_lower_bound(n, k)
        else:
            rep = two_point_lower_bound(n, k)
        lam = rep.pair.eigenvalue
        cp = char_poly(fam_name, n, k)
        g_abs = abs(cp.g(lam))
        pred_dist = abs(lam - rep.predicted)
        cert = rep.certificate
        row = {
            "n": n,
            "k": k,
            "lambda_mag": abs(lam),
            "lambda_arg": math.atan2(lam.imag, lam.real),
            "gamma": rep.gamma,
            "theta": rep.theta,
            "g_abs": g_abs,
            "predictor_dist": pred_dist,
            "eigvec_residual": rep.pair.residual,
            "phi_s0_mag": rep.phi_s0_mag,
            "R": rep.R,
            "T": rep.T,
            "leading_term": rep.leading_term,
            "T_over_leading": rep.T / rep.leading_term,
            "cert_accepted": cert.accepted,
            "cert_error_bound": cert.error_bound,
        }
        tol = root_tol(n)
        root_ok = g_abs <= tol
        resid_ok = rep.pair.residual <= 1e-10
        cert_ok = cert.accepted
        tag = f"n{n}_k{k}"
        checks.append((f"root_{tag}", root_ok))
        checks.append((f"residual_{tag}", resid_ok))
        checks.append((f"certificate_{tag}", cert_ok))
        if fam_name == "bottom_to_top":
            checks.append((f"predictor_{tag}", pred_dist <= 10.0 * k**3 / n**4))
        if fam_name == "two_point":
            lo, hi = rep.gamma_window
            row["gamma_window_lo"] = lo
            row["gamma_window_hi"] = hi
            row["diagnostic"] = rep.diagnostic or ""
            checks.append((f"gamma_window_{tag}", rep.diagnostic is None))
        rows.append(row)
    return rows, checks


def _preset_spectral_b2t(cfg):
    ns = [cfg.n] if cfg.n is not None else [30, 50, 100, 200]
    ks = [cfg.k] if cfg.k is not None else [2, 3, 5]
    grid = [(n, k) for n in ns for k in ks if k <= n]
    _require(bool(grid), "empty grid: need k <= n")
    for _, k in grid:
        _require(k >= 2, "bottom-k lower bounds need k >= 2")
    rows, checks = _spectral_rows(
        "bottom_to_top", grid, lambda n: max(1e-13, 32 * np.finfo(float).eps * n)
    )
    info = [("n_values", " ".join(map(str, ns))), ("k_values", " ".join(map(str, ks)))]
    return rows, info, checks


def _preset_spectral_two_point(cfg):
    ns = [cfg.n] if cfg.n is not None else [1000]
    ks = [cfg.k] if cfg.k is not None else [1, 3, 5]
    for k in ks:
        _require(k % 2 == 1, "two-point shuffles need odd k")
    grid = [(n, k) for n in ns for k in ks if k <= n - 1]
    _require(bool(grid), "empty grid: need k <= n - 1")
    rows, checks = _spectral_rows(
        "two_point", grid, lambda n: max(1e-13, 32 * np.finfo(float).eps * n)
    )
    info = [("n_values", " ".join(map(str, ns))), ("k_values", " ".join(map(str, ks)))]
    return rows, info, checks


def _preset_couple_b2t(cfg):
    n = cfg.n if cfg.n is not None else 64
    k = cfg.k if cfg.k is not None else 2
    samples = cfg.samples if cfg.samples is not None else 500
    _require(samples >= 1, "need samples >= 1")
    _require(2 <= k <= n, "need 2 <= k <= n")
    master = RngStream(cfg.seed)
    results = [
        couple_b2t(n, k, master.stream(i), cap=cfg.cap) for i in range(samples)
    ]
    rows = [
        {"sample": i, "T": s.T, "matched_history_ok": s.matched_history_ok}
        for i, s in enumerate(results)
    ]
    summary = coupling_quantiles(results)
    threshold = 16.0 * leading_term_bottom_to_top(n, k)
    tail = float(np.mean([s.T > threshold for s in results]))
    wilson = b2t_lower_bound(n, k).T
    checks = [
        ("matched_history", all(s.matched_history_ok for s in results)),
        ("upper_tail", tail <= 0.05),
        ("median_vs_wilson", summary.median >= 0.5 * wilson),
    ]
    info = [
        ("n", n),
        ("k", k),
        ("samples", samples),
        ("mean_T", summary.mean),
        ("median_T", summary.median),
        ("q95_T", summary.q95),
        ("upper_threshold", threshold),
        ("tail_fraction", tail),
        ("wilson_T", wilson),
    ]
    return rows, info, checks


def _preset_couple_mtf(cfg):
    fam = cfg.family or "a"
    n = cfg.n if cfg.n is not None else 8
    samples = cfg.samples if cfg.samples is not None else 2000
    _require(samples >= 1, "need samples >= 1")
    w = example_weights(fam, n)
    spec = ShuffleSpec.move_to_front(w)
    tau = tau_u(w)
    master = RngStream(cfg.seed)
    results = [
        couple_mtf(spec, master.stream(i), cap=cfg.cap) for i in range(samples)
    ]
    rows = [
        {
            "sample": i,
            "T": s.T,
            "touched_all_but_one_time": s.touched_all_but_one_time,
            "matched_history_ok": s.matched_history_ok,
        }
        for i, s in enumerate(results)
    ]
    summary = coupling_quantiles(results)
    tail = float(np.mean([s.T > tau for s in results]))
    slack = 3.0 * math.sqrt(0.25 * 0.75 / samples)
    checks = [
        ("matched_history", all(s.matched_history_ok for s in results)),
        ("domination", all(s.T <= s.touched_all_but_one_time for s in results)),
        ("coupon_tail", tail <= 0.25 + slack),
    ]
    info = [
        ("family", fam),
        ("n", n),
        ("samples", samples),
        ("tau_u", tau),
        ("mean_T", summary.mean),
        ("median_T", summary.median),
        ("q95_T", summary.q95),
        ("tail_fraction_at_tau_u", tail),
        ("tail_allowance", 0.25 + slack),
    ]
    return rows, info, checks


def _preset_u_stat(cfg):
    n = cfg.n if cfg.n is not None else 100
    _require(n >= 4 and n % 2 == 0, "the half-deck statistic needs even n >= 4")
    traces = cfg.samples if cfg.samples is not None else 10_000
    t_max = cfg.t_max if cfg.t_max is not None else 10_000
    _require(traces >= 2 and t_max >= 1, "need samples >= 2 and t_max >= 1")
    means = ustat_conditional_means(n)
    rows = [{"z": z, "mean_increment": float(m)} for z, m in enumerate(means)]
    finals = u_stat_final_values(n, 1, t_max, traces, RngStream(cfg.seed))
    var = float(finals.var(ddof=1))
    exhaustive = ustat_conditional_means(8)
    checks = [
        ("mean_zero_exhaustive_n8", bool(np.all(exhaustive == 0.0))),
        ("mean_zero_all_states", bool(np.all(means == 0.0))),
        ("variance_bound", var <= float(t_max)),
    ]
    info = [
        ("n", n),
        ("traces", traces),
        ("t_max", t_max),
        ("mean_U", float(finals.mean())),
        ("var_U", var),
        ("var_bound", float(t_max)),
    ]
    return rows, info, checks


def _single_card_tmix(spec, threshold=0.25, cap=None):
    n = spec.n
    p = single_card_matrix(spec).entries
    if cap is None:
        cap = 50 * n * n
    v = np.zeros(n)
    v[0] = 1.0
    target = 1.0 / n
    for t in range(cap + 1):
        if 0.5 * float(np.abs(v - target).sum()) <= threshold:
            return t
        v = v @ p
    raise CapExceededError(f"single-card walk not mixed after {cap} steps", steps=cap)


def _preset_open_k09n(cfg):
    ns = [cfg.n] if cfg.n is not None else [32, 64, 128]
    for n in ns:
        _require(8 <= n <= 256, "exploration grid needs 8 <= n <= 256")
    rows = []
    for n in ns:
        for k in (max(2, round(0.9 * n)), n):
            spec = bottom_to_top_spec(n, k)
            mags = np.sort(np.abs(matrix_spectrum(single_card_matrix(spec))))[::-1]
            rows.append(
                {
                    "kind": "bottom_k",
                    "n": n,
                    "k": k,
                    "second_eig_mag": float(mags[1]),
                    "single_card_tmix": _single_card_tmix(spec),
                    "gamma_times_n_over_log2": None,
                    "theta_over_three_quarter_w": None,
                }
            )
        # half-deck two-point root, started from the conjectured location
        ktp = n // 2 if (n // 2) % 2 else n // 2 - 1
        w = 2.0 * math.pi / n
        start = (1.0 - math.log(2.0) / n) * complex(math.cos(0.75 * w), math.sin(0.75 * w))
        row = {
            "kind": "two_point_half",
            "n": n,
            "k": ktp,
            "second_eig_mag": None,
            "single_card_tmix": None,
            "gamma_times_n_over_log2": None,
            "theta_over_three_quarter_w": None,
        }
        try:
            root = find_eigenvalue(char_poly("two_point", n, ktp), start)
        except NoConvergenceError:
            root = None
        if root is not None:
            row["gamma_times_n_over_log2"] = (1.0 - abs(root)) * n / math.log(2.0)
            row["theta_over_three_quarter_w"] = math.atan2(root.imag, root.real) / (0.75 * w)
        rows.append(row)
    info = [("n_values", " ".join(map(str, ns)))]
    return rows, info, []  # exploration only: nothing to pass or fail


_PRESETS = {
    "theorem-3-1": _preset_theorem_3_1,
    "tau-u": _preset_tau_u,
    "spectral-b2t": _preset_spectral_b2t,
    "spectral-two-point": _preset_spectral_two_point,
    "couple-b2t": _preset_couple_b2t,
    "couple-mtf": _preset_couple_mtf,
    "u-stat": _preset_u_stat,
    "open-k09n": _preset_open_k09n,
}


# ---------------------------------------------------------------------------
# drive one run


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    values = parse_config_file(args.config) if args.config else {}
    for key in _INT_KEYS | {"family"}:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    out = args.out or os.environ.get("SHUFFLEMIX_OUT") or values.get("out") or "."
    values["out"] = out
    cfg = ExperimentConfig(preset=args.preset, **values)
    if cfg.preset in _MC_PRESETS and cfg.seed is None:
        raise ConfigError(f"preset {cfg.preset} is Monte Carlo and needs --seed")
    return cfg


def run_experiment(cfg: ExperimentConfig) -> int:
    """Execute one preset, write its CSV and summary, return exit status."""
    rows, info, checks = _PRESETS[cfg.preset](cfg)
    os.makedirs(cfg.out, exist_ok=True)
    csv_path = os.path.join(cfg.out, f"{cfg.preset}.csv")
    if rows:
        cols = list(rows[0].keys())
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(cols)
            for row in rows:
                writer.writerow([_fmt(row.get(c)) for c in cols])
    passed = all(ok for _, ok in checks)
    lines = [("preset", cfg.preset)]
    info_keys = {key for key, _ in info}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if f.name != "preset" and value is not None and f.name not in info_keys:
            lines.append((f.name, value))
    lines += info
    lines += [(f"check_{name}", "pass" if ok else "fail") for name, ok in checks]
    lines.append(("overall", "pass" if passed else "fail"))
    with open(os.path.join(cfg.out, f"{cfg.preset}.summary.txt"), "w", encoding="utf-8") as fh:
        for key, value in lines:
            fh.write(f"{key}: {_fmt(value)}\n")
    return 0 if passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="shufflemix",
        description="Mixing-time experiments for biased random-to-top shuffles.",
    )
    parser.add_argument("preset", choices=sorted(_PRESETS))
    parser.add_argument("--config", metavar="FILE", help="flat key=value file")
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--family", choices=list("abcd"))
    parser.add_argument("--samples", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--t-max", dest="t_max", type=int)
    parser.add_argument("--cap", type=int)
    parser.add_argument("--out", metavar="DIR")
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return run_experiment(cfg)
    except (ConfigError, ValueError, TypeError, CapacityError) as exc:
        print(f"shufflemix: {exc}", file=sys.stderr)
        return 2
    except (CapExceededError, NoConvergenceError) as exc:
        print(f"shufflemix: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
