"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import io as stdio
import subprocess
import sys

import numpy as np
from scipy.linalg import eigvalsh

from framekit import instances as gen
from framekit.cli import main
from framekit.demos import REGISTRY
from framekit.frames import frame_operator, reconstruct
from framekit.fusion import (
    FusionSystem,
    analysis,
    combined_operator_bounds,
    construct_atomic,
    direct_sum_kfusion,
    fusion_frame_operator,
    fusion_reconstruct,
    intersect_system,
    kfusion_bounds,
    partition_kframe,
    verify_atomic,
)
from framekit.numkit import numerical_rank, opnorm, range_basis
from framekit.optools import douglas_check
from framekit.subspace import project

FIELDS = ("real", "complex")
RESULTS = {}


def _report(n, name, ok, detail):
    line = f"criterion {n:>2} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[n] = line
    print(line)
    return ok


def _energy(W, F):
    """``sum_i v_i^2 |P_{W_i} f|^2`` per column, straight from the projections."""
    return sum(v**2 * np.linalg.norm(project(V) @ F, axis=0) ** 2 for V, v in W.members)


def _adj(M):
    return np.conj(M).T


def test_c01_atomic_tightness():
    rng = gen.make_rng(101)
    worst_tight = worst_upper = 0.0
    for k in range(100):
        field = FIELDS[k % 2]
        n = int(rng.integers(2, 13))
        K = gen.operator(rng, n, field, rank_deficient=k % 4 >= 2)
        W = construct_atomic(K)
        F = gen.unit_vectors(rng, n, 10, field)
        gap = np.abs(_energy(W, F) - np.linalg.norm(_adj(K) @ F, axis=0) ** 2)
        worst_tight = max(worst_tight, gap.max())
        B = kfusion_bounds(W, K).B_opt
        worst_upper = max(worst_upper, B - opnorm(K) ** 2)
    ok = worst_tight <= 1e-9 and worst_upper <= 1e-9
    assert _report(1, "atomic tightness", ok, f"max |gap| {worst_tight:.2e}, max B - |K|^2 {worst_upper:.2e}")


def test_c02_atomic_equivalence():
    rng = gen.make_rng(202)
    disagree = deficient = 0
    for k in range(200):
        field = FIELDS[k % 2]
        n = int(rng.integers(2, 9))
        case = (k // 2) % 4
        W, K, _ = _kfusion_case(rng, n, field, case)
        if numerical_rank(np.linalg.svd(K, compute_uv=False)) < n:
            deficient += 1
        atomic = verify_atomic(W, K).is_atomic
        lower = kfusion_bounds(W, K).lower_ok
        disagree += atomic != lower
    ok = disagree == 0 and deficient >= 50
    assert _report(2, "atomic equivalence", ok, f"{disagree} disagreements, {deficient} rank-deficient K of 200")


def _kfusion_case(rng, n, field, case):
    if case == 0:
        return gen.fusion_system(rng, n, field=field), gen.operator(rng, n, field), True
    if case == 1:
        W = gen.fusion_system(rng, n, field=field)
        return W, gen.operator(rng, n, field, rank_deficient=True), True
    W, _ = gen.singular_system(rng, n, field)
    if case == 2:
        return W, gen.planted_operator(rng, W, field), True
    return W, gen.operator(rng, n, field), False


def test_c03_route_consistency():
    rng = gen.make_rng(303)
    worst_rel = 0.0
    worst_eig = -np.inf
    count = 0
    while count < 200:
        field = FIELDS[count % 2]
        n = int(rng.integers(2, 13))
        W, K, _ = _kfusion_case(rng, n, field, count % 3)
        rep = kfusion_bounds(W, K)
        if not rep.lower_ok:
            continue
        count += 1
        worst_rel = max(worst_rel, abs(rep.A_opt - rep.A_check) / rep.A_opt)
        S = fusion_frame_operator(W)
        gap = S - rep.A_opt * K @ _adj(K)
        lam = eigvalsh((gap + _adj(gap)) / 2)[0]
        worst_eig = max(worst_eig, -lam / opnorm(S))
    ok = worst_rel <= 1e-6 and worst_eig <= 1e-10
    assert _report(3, "quotient vs pencil", ok, f"max rel diff {worst_rel:.2e}, max -lambda_min/|S| {worst_eig:.2e}")


def test_c04_douglas():
    rng = gen.make_rng(404)
    planted_bad = disjoint_bad = 0
    worst = 0.0
    for k in range(200):
        field = FIELDS[k % 2]
        n = int(rng.integers(2, 13))
        r = int(rng.integers(1, n + 1))
        T = gen.low_rank(rng, n, r, field, cols=int(rng.integers(1, n + 3)))
        S = T @ gen.gaussian(rng, (T.shape[1], int(rng.integers(1, n + 1))), field)
        rep = douglas_check(S, T)
        if not (rep.range_inclusion and rep.majorization and rep.factorization):
            planted_bad += 1
        else:
            worst = max(worst, opnorm(T @ rep.factor_L - S))
    for k in range(200):
        field = FIELDS[k % 2]
        n = int(rng.integers(2, 13))
        r = int(rng.integers(1, n))
        T = gen.low_rank(rng, n, r, field, cols=n)
        S = gen.low_rank(rng, n, int(rng.integers(1, n - r + 1)), field, cols=n)
        # Oracle for disjointness: the two range bases together stay independent.
        both = np.hstack([range_basis(T), range_basis(S)])
        assert numerical_rank(np.linalg.svd(both, compute_uv=False)) == both.shape[1]
        rep = douglas_check(S, T)
        if rep.range_inclusion or rep.majorization or rep.factorization:
            disjoint_bad += 1
    ok = planted_bad == 0 and disjoint_bad == 0 and worst <= 1e-9
    assert _report(4, "Douglas equivalence", ok, f"planted failures {planted_bad}, disjoint failures {disjoint_bad}, max |TL - S| {worst:.2e}")


def test_c05_reconstruction():
    rng = gen.make_rng(505)
    worst = 0.0
    done = 0
    while done < 100:
        field = FIELDS[done % 2]
        n = int(rng.integers(2, 17))
        if done % 4 < 2:
            F = gen.frame(rng, n, field)
            S = frame_operator(F)
        else:
            W = gen.fusion_system(rng, n, field=field)
            S = fusion_frame_operator(W)
        if eigvalsh(S)[0] < 1e-6:
            continue
        f = gen.gaussian(rng, n, field)
        g = reconstruct(F, f) if done % 4 < 2 else fusion_reconstruct(W, analysis(W, f))
        worst = max(worst, np.linalg.norm(g - f) / np.linalg.norm(f))
        done += 1
    assert _report(5, "reconstruction", worst <= 1e-9, f"max relative error {worst:.2e}")


def test_c06_partition():
    rng = gen.make_rng(606)
    worst = -np.inf
    worst_uniform = -np.inf
    for k in range(100):
        field = FIELDS[k % 2]
        n = int(rng.integers(2, 9))
        F, K = gen.kframe(rng, n, field)
        order = rng.permutation(F.size)
        cuts = np.sort(rng.choice(np.arange(1, F.size), size=min(F.size - 1, int(rng.integers(0, 4))), replace=False))
        parts = [p.tolist() for p in np.split(order, cuts)]
        weights = None if k % 2 == 0 else gen.weights(rng, len(parts))
        W, cert = partition_kframe(F, K, parts, weights)
        worst = max(worst, cert.certified_A - cert.actual.A_opt, cert.actual.B_opt - cert.certified_B)
        if weights is None:
            # Each projection is at most I, so B <= |I|; allow only eigensolver roundoff.
            worst_uniform = max(worst_uniform, cert.actual.B_opt - len(parts) * (1 + 1e-12))
    ok = worst <= 1e-9 and worst_uniform <= 0
    assert _report(6, "partition bounds", ok, f"max violation {worst:.2e}, 1-uniform max B - |I| {worst_uniform:.2e}")


def test_c07_direct_sum():
    rng = gen.make_rng(707)
    worst = -np.inf
    for k in range(100):
        field = FIELDS[k % 2]
        m = int(rng.integers(1, 4))
        w = gen.weights(rng, m)
        systems, Ks = [], []
        for _ in range(2):
            n = int(rng.integers(2, 7))
            if rng.integers(2):
                W = gen.fusion_system(rng, n, m=m, field=field)
                K = gen.operator(rng, n, field, rank_deficient=bool(rng.integers(2)))
            else:
                W, _ = gen.singular_system(rng, n, field, m=m)
                K = None
            W = FusionSystem(W.subspaces, w)
            systems.append(W)
            Ks.append(gen.planted_operator(rng, W, field) if K is None else K)
        _, cert = direct_sum_kfusion(systems, Ks)
        worst = max(worst, cert.certified_A - cert.actual.A_opt, cert.actual.B_opt - cert.certified_B)
    assert _report(7, "direct sum bounds", worst <= 1e-9, f"max violation {worst:.2e}")


def test_c08_operator_algebra():
    rng = gen.make_rng(808)
    worst = -np.inf
    for k in range(100):
        field = FIELDS[k % 2]
        n = int(rng.integers(2, 9))
        W = gen.fusion_system(rng, n, field=field)
        p = int(rng.integers(1, 5))
        Ks = [gen.operator(rng, n, field, rank_deficient=bool(rng.integers(2))) * rng.uniform(0.2, 2) for _ in range(p)]
        rep = combined_operator_bounds(W, Ks, gen.gaussian(rng, p, field))
        worst = max(
            worst,
            rep.certified_sum_A - rep.actual_sum.A_opt,
            rep.certified_product_A - rep.actual_product.A_opt,
        )
    assert _report(8, "operator algebra bounds", worst <= 1e-8, f"max violation {worst:.2e}")


def test_c09_intersections():
    rng = gen.make_rng(909)
    worst_bessel = worst_pv = worst_k = -np.inf
    for k in range(100):
        field = FIELDS[k % 2]
        n = int(rng.integers(2, 9))
        W, V, U, v_idx = gen.commuting_family(rng, n, field)
        K = gen.reducing_operator(rng, U, v_idx, field)
        out, rep = intersect_system(W, V)
        worst_bessel = max(worst_bessel, rep.bessel_after - rep.bessel_before)
        P = project(V)
        X = gen.gaussian(rng, (n, 100), field)
        e = _energy(out, X)
        lhs = rep.certified_A * np.linalg.norm(_adj(P) @ X, axis=0) ** 2
        worst_pv = max(worst_pv, ((lhs - e) / np.maximum(e, 1e-300)).max(), ((e - rep.bessel_after * np.linalg.norm(X, axis=0) ** 2) / e.max()).max())
        out_k, rep_k = intersect_system(W, V, K)
        Y = P @ gen.gaussian(rng, (n, 100), field)
        e = _energy(out_k, Y)
        lhs = rep_k.certified_A * np.linalg.norm(_adj(K) @ Y, axis=0) ** 2
        worst_k = max(worst_k, ((lhs - e) / np.maximum(e, 1e-300)).max())
    ok = worst_bessel <= 1e-9 and worst_pv <= 1e-9 and worst_k <= 1e-9
    assert _report(9, "intersections", ok, f"Bessel increase {worst_bessel:.2e}, P_V rel violation {worst_pv:.2e}, restricted K rel violation {worst_k:.2e}")


def _cli_demo(theorem_id):
    out = stdio.StringIO()
    code = main(["demo", theorem_id, "--seed", "7", "--dim", "8"], out=out)
    return code, out.getvalue()


def test_c10_cli_determinism():
    mismatched, failed = [], []
    for theorem_id in REGISTRY:
        first, second = _cli_demo(theorem_id), _cli_demo(theorem_id)
        if first != second:
            mismatched.append(theorem_id)
        if first[0] != 0 or "verdict: PASS" not in first[1]:
            failed.append(theorem_id)
    # A fresh process must print the same report.
    proc = subprocess.run(
        [sys.executable, "-m", "framekit", "demo", "douglas", "--seed", "7", "--dim", "8"],
        capture_output=True, text=True,
    )
    if proc.stdout != _cli_demo("douglas")[1]:
        mismatched.append("douglas (subprocess)")
    ok = not mismatched and not failed
    assert _report(10, "CLI demo determinism", ok, f"{len(REGISTRY)} ids, mismatched {mismatched or 'none'}, failed {failed or 'none'}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    status = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            status = 1
    sys.exit(status)
