"""Acceptance checks.  Each test prints one PASS/FAIL line and then asserts."""

from __future__ import annotations

import functools
import json
import random
import subprocess
import sys
import time

from carlitz.classmod import check_conjecture, gamma_matrix_oracle, pn_poly
from carlitz.ff import ff_make
from carlitz.motcoh import (
    en_compute,
    epsilon_computed,
    epsilon_formula,
    epsilon_root_degrees,
    gn_compute,
    root_locus,
    squarefree_root,
)
from carlitz.polyring import BiPoly, PolyT, gcd_t
from carlitz.tate import TateSeries, TwistParams
from carlitz.zeta import Z_direct, Z_goss
from series_checks import (
    beta_residual,
    nu_omega_residual,
    omega_functional_residual,
    solve_small_residual,
    xi_residual,
)

FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 9: (3, 2)}


def field(q):
    return ff_make(*FIELDS[q])


def params(n, F):
    return TwistParams.of(n, F.q, F.p)


def report(capsys, k, title, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {k}: {title}"
    if detail:
        line += f" ({detail})"
    if failures:
        line += f"; failures: {failures}"
    with capsys.disabled():
        print("\n" + line)
    assert not failures, line


def test_criterion_1_recursion_matches_enumeration(capsys):
    t0 = time.perf_counter()
    failures = []
    grid = [(2, 20), (3, 24), (4, 20), (5, 16)]
    for q, top in grid:
        F = field(q)
        for n in range(top + 1):
            if Z_direct(n, F) != Z_goss(n, F):
                failures.append((q, n))
    elapsed = time.perf_counter() - t0
    if elapsed > 120:
        failures.append(f"runtime {elapsed:.1f}s")
    report(capsys, 1, "Z_direct(n) = Z_goss(n) on the enumeration grid", failures, f"{elapsed:.1f}s")


@functools.lru_cache(maxsize=None)
def conjecture_sweep():
    t0 = time.perf_counter()
    reports = [check_conjecture(n, field(q)) for q in (2, 3, 4, 5) for n in range(101)]
    return reports, time.perf_counter() - t0


def test_criterion_2_pn_equals_zeta_polynomial(capsys):
    reports, elapsed = conjecture_sweep()
    failures = [(r.q, r.n) for r in reports if not r.equal]
    if elapsed > 60:
        failures.append(f"runtime {elapsed:.1f}s")
    report(capsys, 2, "P_n(x) = Z(x,-n) for q in {2,3,4,5}, 0 <= n <= 100", failures, f"{len(reports)} cells, {elapsed:.1f}s")


def test_criterion_3_epsilon_closed_form(capsys):
    failures = []
    # worked anchor over F_3
    F3 = field(3)
    p2 = params(2, F3)
    t = PolyT.monomial(F3, 1)
    anchor = (
        gn_compute(p2, F3) == BiPoly.theta(F3, 1, 2) + BiPoly.t(F3)
        and en_compute(p2, F3) == BiPoly.from_polyt(t**3 + t.scale(2))
        and epsilon_computed(p2, F3) == t**3 + t.scale(2)
    )
    if not anchor:
        failures.append("anchor q=3 n=2")
    lcm_ok = True
    cells = 0
    for q in (2, 3, 4, 5, 9):
        F = field(q)
        top = 30 if q == 9 else 60
        for n in range(q - 1, top + 1, q - 1):
            p = params(n, F)
            eps = epsilon_computed(p, F)
            cells += 1
            if eps != epsilon_formula(p, F):
                failures.append((q, n))
            lcm_ok = lcm_ok and eps == epsilon_root_degrees(p, F)
    detail = f"{cells} cells; lcm of t^(q^r)-t over (q^r-1)|n matches everywhere: {lcm_ok}"
    report(capsys, 3, "epsilon_computed = (t^(q^ell) - t)^(p^c)", failures, detail)


def test_criterion_4_root_locus(capsys):
    failures = []
    for q in (2, 3):
        F = field(q)
        for n in (1, 2, 3, 6, 8):
            p = params(n, F)
            if not p.divisible:
                continue
            eps = epsilon_computed(p, F)
            for row in root_locus(p, F, 4, eps=eps):
                if not row.consistent:
                    failures.append((q, n, row.r))
            root, _ = squarefree_root(eps)
            if gcd_t(root, root.derivative()) != PolyT.one(F):
                failures.append((q, n, "not squarefree"))
    report(capsys, 4, "zeros of eps_n in F_(q^r) exactly when (q^r - 1) | n, simple roots", failures)


def test_criterion_5_series_identities(capsys):
    failures = []
    rng = random.Random(20240)
    for q in (2, 3):
        F = field(q)
        for n in range(0, 19):
            p = params(n, F)
            for f in (BiPoly.constant(F, 1), BiPoly.theta(F), BiPoly.theta(F, 2)):
                if not beta_residual(p, F, f).is_zero():
                    failures.append(("beta", q, n, str(f)))
            if n < 1 or not p.divisible:
                continue
            if not omega_functional_residual(p, F).is_zero():
                failures.append(("omega", q, n))
            if not nu_omega_residual(p, F).is_zero():
                failures.append(("nu*omega", q, n))
            if not xi_residual(p, F).is_zero():
                failures.append(("xi", q, n))
            g = gn_compute(p, F)
            if g.deg_theta != p.m:
                failures.append(("deg g", q, n))
            if en_compute(p, F, g).deg_theta >= n:
                failures.append(("deg e", q, n))
            if gn_compute(params(F.p * n, F), F) != g**F.p:
                failures.append(("g_pn", q, n))
        for _ in range(20):
            n = rng.randint(0, 6)
            T, floor = rng.randint(1, 5), -rng.randint(6, 20)
            rows = [{e: rng.randrange(1, F.q) for e in range(floor, 0) if rng.random() < 0.3} for _ in range(T + 1)]
            h = TateSeries(F, rows, T, floor)
            if not solve_small_residual(h, n).is_zero():
                failures.append(("solve_small", q, n))
    report(capsys, 5, "series identities hold in their windows for q in {2,3}, n <= 18", failures)


def test_criterion_6_gamma_oracle(capsys):
    failures = []
    cells = 0
    for q in (2, 3):
        F = field(q)
        for n in range(q - 1, 13, q - 1):
            p = params(n, F)
            cells += 1
            try:
                N = gamma_matrix_oracle(p, F)
            except ArithmeticError as exc:
                failures.append((q, n, str(exc)))
                continue
            if N.char_det() != pn_poly(p, F):
                failures.append((q, n))
    report(capsys, 6, "det(I - xN) from the series side equals P_n", failures, f"{cells} cells")


def test_criterion_7_rank_pattern(capsys):
    reports, _ = conjecture_sweep()
    failures = []
    for r in reports:
        expected = 1 if r.n >= 1 and r.n % (r.q - 1) == 0 else 0
        if r.rank != expected:
            failures.append((r.q, r.n, "rank"))
        if r.equal and r.h_n != r.rank:
            failures.append((r.q, r.n, "h_n"))
    report(capsys, 7, "ord_(x=1) P_n = 1 exactly when (q-1) | n, n >= 1, and h_n agrees", failures)


def _sweep(cache, jobs, n_max=36):
    cmd = [sys.executable, "-m", "carlitz", "sweep", "--p", "3", "--n-min", "0", "--n-max", str(n_max), "--jobs", str(jobs), "--cache", str(cache), "--format", "json"]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_criterion_8_determinism_and_resume(capsys, tmp_path):
    failures = []
    c1, c8 = tmp_path / "one.jsonl", tmp_path / "eight.jsonl"
    code1, out1, _ = _sweep(c1, 1)
    code8, out8, _ = _sweep(c8, 8)
    if code1 != code8:
        failures.append(f"exit codes {code1} vs {code8}")
    if out1 != out8:
        failures.append("jobs 1 and jobs 8 outputs differ")
    # interrupt: drop the last third of the cache and tear the final line
    lines = c1.read_text().splitlines()
    keep = lines[: 2 * len(lines) // 3]
    c1.write_text("\n".join(keep) + "\n" + lines[len(keep)][:10])
    kept_ok = sum(json.loads(line)["status"] == "ok" for line in keep)
    total = len(lines)
    code, resumed, err = _sweep(c1, 4)
    if resumed != out1:
        failures.append("resumed output differs")
    if f"cached={kept_ok}" not in err or f"computed={total - kept_ok}" not in err:
        failures.append(f"resume recomputed ok cells: {err.strip()}")
    report(capsys, 8, "sweep output independent of --jobs; resume skips ok cells", failures, f"{total} cells")
