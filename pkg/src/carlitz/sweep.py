"""Per-cell checks, the JSONL result cache and the parallel sweep runner.

A cell is one (p, s, n, check).  Every cell produces a flat record with a
``status`` of ok, mismatch, skipped or precision_failure.  Records are sorted
by (p, s, n, check) before they are written, and wall-clock timings are left
out of written reports unless asked for, so output does not depend on the
number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass

from .classmod import PolyMatrix, check_conjecture, gamma_default_window, gamma_matrix_oracle, pn_poly
from .ff import ff_make
from .motcoh import epsilon_computed, epsilon_formula, epsilon_root_degrees, root_locus
from .tate import PrecisionError, TwistParams
from .zeta import DEFAULT_WORK_LIMIT, WorkLimitExceeded, Z_direct, Z_goss

CHECKS = ("conjecture", "epsilon", "roots", "cross", "gamma")
DEFAULT_CHECKS = ("conjecture", "epsilon", "roots", "cross")
STATUSES = ("ok", "mismatch", "skipped", "precision_failure")
ROOT_BUDGET = 4096
DEFAULT_CACHE = "carlitz_cache.jsonl"


@dataclass(frozen=True)
class SweepConfig:
    p: int
    s: int = 1
    n_min: int = 0
    n_max: int = 0
    checks: tuple[str, ...] = DEFAULT_CHECKS
    jobs: int = 1
    t_prec: int | None = None
    theta_floor: int | None = None
    work_limit: int = DEFAULT_WORK_LIMIT
    r_max: int = 4
    timings: bool = False

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise ValueError(f"n_min {self.n_min} > n_max {self.n_max}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")

    def cells(self) -> list[tuple[int, str]]:
        return [(n, c) for n in range(self.n_min, self.n_max + 1) for c in self.checks]


def precision_key(t_prec: int | None, theta_floor: int | None) -> str:
    t = "default" if t_prec is None else str(t_prec)
    f = "default" if theta_floor is None else str(theta_floor)
    return f"T={t};floor={f}"


def cell_key(rec: dict) -> tuple:
    return (rec["p"], rec["s"], rec["n"], rec["check"], rec["precision"])


def _sort_key(rec: dict) -> tuple:
    return (rec["p"], rec["s"], rec["n"], rec["check"])


def _coeffs(P) -> list[str]:
    return [str(c) for c in P.coeff_list()]


def _check_conjecture(field, n, **_):
    rep = check_conjecture(n, field).to_dict()
    status = "ok" if rep["equal"] and rep["rank_consistent"] else "mismatch"
    rep.pop("timings_ms")
    for k in ("p", "s", "q", "n"):
        rep.pop(k)
    return status, rep


def _check_epsilon(field, n, **_):
    params = TwistParams.of(n, field.q, field.p)
    if n < 1 or not params.divisible:
        return "skipped", {"reason": f"(q-1) = {field.q - 1} does not divide n = {n}" if n else "n = 0"}
    eps = epsilon_computed(params, field)
    formula = epsilon_formula(params, field)
    lcm_form = epsilon_root_degrees(params, field)
    body = {
        "m": params.m,
        "c": params.c,
        "ell": params.ell,
        "epsilon_computed": str(eps),
        "epsilon_formula": str(formula),
        "epsilon_root_degrees": str(lcm_form),
        "match": eps == formula,
        "match_root_degrees": eps == lcm_form,
    }
    return ("ok" if body["match"] else "mismatch"), body


def _check_roots(field, n, r_max=4, **_):
    params = TwistParams.of(n, field.q, field.p)
    if n < 1 or not params.divisible:
        return "skipped", {"reason": f"(q-1) = {field.q - 1} does not divide n = {n}" if n else "n = 0"}
    r_eff = min(r_max, int(math.log(ROOT_BUDGET, field.q) + 1e-9))
    rows = root_locus(params, field, r_eff, ROOT_BUDGET)
    ok = all(r.consistent and r.all_simple for r in rows)
    return ("ok" if ok else "mismatch"), {"r_max": r_eff, "rows": [r.to_dict() for r in rows]}


def _check_cross(field, n, work_limit=DEFAULT_WORK_LIMIT, **_):
    Zg = Z_goss(n, field)
    try:
        Zd = Z_direct(n, field, work_limit)
    except WorkLimitExceeded as exc:
        return "skipped", {"reason": str(exc), "Z_goss": _coeffs(Zg)}
    body = {"Z_goss": _coeffs(Zg), "Z_direct": _coeffs(Zd), "equal": Zd == Zg}
    return ("ok" if body["equal"] else "mismatch"), body


def gamma_with_retry(params: TwistParams, field, t_prec=None, theta_floor=None) -> tuple[PolyMatrix, tuple[int, int]]:
    """gamma_matrix_oracle at the requested window, retried once with the window doubled."""
    T, floor = gamma_default_window(params, field.q)
    T = T if t_prec is None else t_prec
    floor = floor if theta_floor is None else theta_floor
    try:
        return gamma_matrix_oracle(params, field, T, floor), (T, floor)
    except PrecisionError:
        T, floor = 2 * T, 2 * floor
        return gamma_matrix_oracle(params, field, T, floor), (T, floor)


def _check_gamma(field, n, t_prec=None, theta_floor=None, **_):
    params = TwistParams.of(n, field.q, field.p)
    if params.h < 1:
        return "skipped", {"reason": "h = 0: empty basis"}
    try:
        N, window = gamma_with_retry(params, field, t_prec, theta_floor)
    except PrecisionError as exc:
        return "precision_failure", {"reason": str(exc)}
    det_n = N.char_det()
    P = pn_poly(params, field)
    body = {"window": list(window), "det_gamma": _coeffs(det_n), "P_coeffs": _coeffs(P), "equal": det_n == P}
    return ("ok" if body["equal"] else "mismatch"), body


_RUNNERS = {
    "conjecture": _check_conjecture,
    "epsilon": _check_epsilon,
    "roots": _check_roots,
    "cross": _check_cross,
    "gamma": _check_gamma,
}


def run_cell(p: int, s: int, n: int, check: str, t_prec=None, theta_floor=None, work_limit=DEFAULT_WORK_LIMIT, r_max=4) -> dict:
    """Evaluate one cell and return its record."""
    field = ff_make(p, s)
    t0 = time.perf_counter()
    status, body = _RUNNERS[check](field, n, t_prec=t_prec, theta_floor=theta_floor, work_limit=work_limit, r_max=r_max)
    elapsed = round((time.perf_counter() - t0) * 1000, 3)
    rec = {
        "p": p,
        "s": s,
        "q": field.q,
        "n": n,
        "check": check,
        "precision": precision_key(t_prec, theta_floor),
        "status": status,
    }
    rec.update(body)
    rec["timings_ms"] = {"total": elapsed}
    return rec


def _run_cell_args(args):
    return run_cell(*args)


# --- cache

def load_cache(path: str | None) -> dict:
    """Latest record per cell key; unreadable lines (e.g. from an interrupted write) are ignored."""
    out = {}
    if not path or not os.path.exists(path):
        return out
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            try:
                rec = json.loads(line)
                out[cell_key(rec)] = rec
            except (json.JSONDecodeError, KeyError):
                continue
    return out


class CacheWriter:
    """Append-only JSONL writer; only the coordinating process writes."""

    def __init__(self, path: str | None):
        self.path = path
        self.fh = None
        if path:
            d = os.path.dirname(path)
            if d:
                os.makedirs(d, exist_ok=True)
            self.fh = open(path, "a", encoding="utf-8")

    def write(self, rec: dict) -> None:
        if self.fh:
            self.fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            self.fh.flush()

    def close(self) -> None:
        if self.fh:
            self.fh.close()


def run_sweep(cfg: SweepConfig, cache_path: str | None = None, progress=None) -> tuple[list[dict], dict]:
    """Run every cell of ``cfg``, reusing ok cells from the cache.  Returns (sorted records, summary)."""
    prec = precision_key(cfg.t_prec, cfg.theta_floor)
    cached = load_cache(cache_path)
    records = []
    todo = []
    for n, check in cfg.cells():
        rec = cached.get((cfg.p, cfg.s, n, check, prec))
        if rec is not None and rec.get("status") == "ok":
            records.append(rec)
        else:
            todo.append((cfg.p, cfg.s, n, check, cfg.t_prec, cfg.theta_floor, cfg.work_limit, cfg.r_max))
    n_cached = len(records)
    writer = CacheWriter(cache_path)
    try:
        if cfg.jobs == 1 or len(todo) <= 1:
            for args in todo:
                rec = run_cell(*args)
                writer.write(rec)
                records.append(rec)
                if progress:
                    progress(rec)
        else:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                futures = [pool.submit(_run_cell_args, a) for a in todo]
                for fut in as_completed(futures):
                    rec = fut.result()
                    writer.write(rec)
                    records.append(rec)
                    if progress:
                        progress(rec)
    finally:
        writer.close()
    records.sort(key=_sort_key)
    summary = {s: sum(r["status"] == s for r in records) for s in STATUSES}
    summary.update(cells=len(records), computed=len(todo), cached=n_cached)
    return records, summary


def exit_code(records: list[dict]) -> int:
    statuses = {r["status"] for r in records}
    if "mismatch" in statuses:
        return 1
    if "precision_failure" in statuses:
        return 3
    return 0


# --- emission

def strip_timings(rec: dict) -> dict:
    return {k: v for k, v in rec.items() if k != "timings_ms"}


def to_json(records: list[dict], timings: bool = False) -> str:
    rows = records if timings else [strip_timings(r) for r in records]
    return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"


def to_csv(records: list[dict], timings: bool = False) -> str:
    rows = records if timings else [strip_timings(r) for r in records]
    columns: list[str] = []
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(r.get(k)) for k in columns])
    return buf.getvalue()


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, ensure_ascii=False, separators=(",", ":"))
    return str(v)


def to_text(records: list[dict]) -> str:
    lines = []
    for r in records:
        extra = r.get("reason", "")
        lines.append(f"q={r['q']} n={r['n']} {r['check']}: {r['status']}" + (f" ({extra})" if extra else ""))
    return "\n".join(lines) + ("\n" if lines else "")
