"""Randomized property runs, one per registered theorem id.

Each run draws instances from a seeded PCG64 generator, evaluates the
property by a route independent of the code path that produced the instance,
and reports the worst slack seen. Runs are deterministic given
``(theorem_id, seed, dim, field)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import instances as gen
from .exceptions import UnknownTheorem
from .fusion import (
    FusionSystem,
    combined_operator_bounds,
    construct_atomic,
    direct_sum_kfusion,
    fusion_bounds,
    fusion_frame_operator,
    intersect_system,
    kfusion_bounds,
    kfusion_via_quotient,
    partition_kframe,
    synthesis_map,
    verify_atomic,
)
from .numkit import DEFAULT_TOL, adjoint, hermitian_part, opnorm, pinv, psd_min_eig, range_contains
from .optools import douglas_check
from .subspace import Subspace, direct_sum, intersect, project


@dataclass
class DemoResult:
    theorem: str
    seed: int
    dim: int
    field: str
    instances: int
    max_slack: float
    threshold: float
    failures: int

    @property
    def passed(self):
        return self.failures == 0 and self.max_slack <= self.threshold

    def render(self):
        return "\n".join(
            [
                f"theorem: {self.theorem}",
                f"seed: {self.seed}  dim: {self.dim}  field: {self.field}",
                f"instances: {self.instances}",
                f"max_slack: {self.max_slack:.6e} (threshold {self.threshold:.1e})",
                f"failures: {self.failures}",
                f"verdict: {'PASS' if self.passed else 'FAIL'}",
            ]
        )


class _Tally:
    def __init__(self, threshold):
        self.threshold = threshold
        self.instances = 0
        self.max_slack = 0.0
        self.failures = 0

    def slack(self, value):
        value = float(value)
        if math.isnan(value):
            self.failures += 1
        else:
            self.max_slack = max(self.max_slack, value)

    def check(self, ok):
        if not ok:
            self.failures += 1


def _dim(rng, dim):
    return int(rng.integers(2, max(dim, 2) + 1))


def _energy(W, F):
    """``sum_i v_i^2 |P_{W_i} f|^2`` for each column ``f`` of ``F``."""
    total = np.zeros(F.shape[1])
    for V, v in W.members:
        total += v**2 * np.linalg.norm(project(V) @ F, axis=0) ** 2
    return total


def _kfusion_case(rng, n, field, case):
    """(W, K, expected) for the four standard K-fusion scenarios."""
    if case == 0:
        return gen.fusion_system(rng, n, field=field), gen.operator(rng, n, field), True
    if case == 1:
        W = gen.fusion_system(rng, n, field=field)
        return W, gen.operator(rng, n, field, rank_deficient=True), True
    W, _ = gen.singular_system(rng, n, field)
    if case == 2:
        return W, gen.planted_operator(rng, W, field), True
    return W, gen.operator(rng, n, field), False


def demo_thm32(rng, dim, field, tol):
    t = _Tally(1e-9)
    for i in range(100):
        n = _dim(rng, dim)
        K = gen.operator(rng, n, field, rank_deficient=bool(i % 2))
        W = construct_atomic(K, gen.unitary(rng, n, field), tol)
        F = gen.unit_vectors(rng, n, 10, field)
        t.slack(np.max(np.abs(_energy(W, F) - np.linalg.norm(adjoint(K) @ F, axis=0) ** 2)))
        t.slack(max(fusion_bounds(W, tol).B_opt - opnorm(K) ** 2, 0.0))
        t.instances += 1
    return t


def demo_thm33(rng, dim, field, tol):
    t = _Tally(0.0)
    for i in range(200):
        n = _dim(rng, dim)
        W, K, expected = _kfusion_case(rng, n, field, i % 4)
        rep = verify_atomic(W, K, tol)
        lower = kfusion_bounds(W, K, tol)
        t.check(rep.is_atomic == (lower.lower_ok and lower.A_opt > tol.psd_tol))
        t.check(rep.is_atomic == expected)
        t.check(rep.consistent)
        t.instances += 1
    return t


def demo_thm37a(rng, dim, field, tol):
    t = _Tally(1e-9)
    for _ in range(100):
        n = _dim(rng, dim)
        W = gen.fusion_system(rng, n, field=field)
        fb = fusion_bounds(W, tol)
        if not fb.lower_ok:
            continue
        K = gen.operator(rng, n, field, rank_deficient=bool(rng.integers(2)))
        kb = kfusion_bounds(W, K, tol)
        t.check(kb.lower_ok)
        t.slack(max(fb.A_opt / opnorm(K) ** 2 - kb.A_opt, 0.0))
        t.instances += 1
    return t


def demo_thm37b(rng, dim, field, tol):
    t = _Tally(1e-9)
    for i in range(100):
        n = _dim(rng, dim)
        W, K, _ = _kfusion_case(rng, n, field, (1, 2)[i % 2])
        kb = kfusion_bounds(W, K, tol)
        t.check(kb.lower_ok)
        s = np.linalg.svd(K, compute_uv=False)
        smin = s[s > tol.rank_tol * s[0]][-1]
        # |K^{*+}| = 1 / smallest nonzero singular value of K.
        floor = kb.A_opt * smin**2
        F = K @ gen.gaussian(rng, (n, 100), field)
        F = F / np.linalg.norm(F, axis=0)
        e = _energy(W, F)
        t.slack(np.max(np.maximum(floor - e, 0.0)))
        t.slack(np.max(np.maximum(e - kb.B_opt, 0.0)))
        t.instances += 1
    return t


def demo_cor34(rng, dim, field, tol):
    t = _Tally(1e-6)
    for i in range(100):
        n = _dim(rng, dim)
        W = gen.fusion_system(rng, n, field=field) if i % 2 else gen.singular_system(rng, n, field)[0]
        S = fusion_frame_operator(W)
        rep = verify_atomic(W, S, tol)
        t.check(rep.is_atomic and rep.consistent)
        # For K = S_W the optimal constant is 1 / |S_W|.
        t.slack(abs(rep.lower_A * opnorm(S) - 1.0))
        t.instances += 1
    return t


def _probe_not_psd(W, K, tol):
    """True iff no small positive A makes ``S_W - A K K^*`` PSD."""
    S = fusion_frame_operator(W)
    G = K @ adjoint(K)
    probe = 1e-6 * opnorm(S) / opnorm(G) if opnorm(S) > 0 else 1e-6
    return psd_min_eig(hermitian_part(S - probe * G), tol) < -tol.psd_tol * max(1.0, opnorm(S))


def demo_thm42(rng, dim, field, tol):
    t = _Tally(1e-6)
    for i in range(200):
        n = _dim(rng, dim)
        W, K, expected = _kfusion_case(rng, n, field, i % 4)
        bounded, norm = kfusion_via_quotient(W, K, tol)
        kb = kfusion_bounds(W, K, tol)
        t.check(bounded == kb.lower_ok == expected)
        if bounded:
            t.slack(abs(kb.A_opt * norm**2 - 1.0))
        else:
            t.check(_probe_not_psd(W, K, tol))
        t.instances += 1
    return t


def demo_cor43(rng, dim, field, tol):
    t = _Tally(0.0)
    for i in range(100):
        n = _dim(rng, dim)
        W = gen.fusion_system(rng, n, field=field) if i % 2 else gen.singular_system(rng, n, field)[0]
        invertible = np.linalg.eigvalsh(fusion_frame_operator(W))[0] > tol.psd_tol
        t.check(fusion_bounds(W, tol).lower_ok == invertible)
        t.check(kfusion_bounds(W, np.eye(n), tol).lower_ok == invertible)
        t.check(invertible == bool(i % 2))
        t.instances += 1
    return t


def demo_thm44(rng, dim, field, tol):
    t = _Tally(1e-6)
    for i in range(200):
        n = _dim(rng, dim)
        W, K, expected = _kfusion_case(rng, n, field, i % 4)
        kb = kfusion_bounds(W, K, tol)
        t.check(kb.lower_ok == expected)
        S = fusion_frame_operator(W)
        if kb.lower_ok:
            t.slack(abs(kb.A_opt - kb.A_check) / kb.A_opt)
            gap = psd_min_eig(hermitian_part(S - kb.A_opt * K @ adjoint(K)), tol)
            t.check(gap >= -1e-10 * opnorm(S))
        else:
            t.check(_probe_not_psd(W, K, tol))
        t.instances += 1
    return t


def demo_thm45(rng, dim, field, tol):
    t = _Tally(1e-10)
    for i in range(100):
        n = _dim(rng, dim)
        W, K, expected = _kfusion_case(rng, n, field, i % 4)
        L = synthesis_map(W)
        direct = sum(v**2 * project(V) for V, v in W.members)
        t.slack(opnorm(L @ adjoint(L) - direct))
        t.check(range_contains(L, K, tol) == kfusion_bounds(W, K, tol).lower_ok == expected)
        t.instances += 1
    return t


def _random_partition(rng, m):
    parts = int(rng.integers(1, m + 1))
    labels = rng.permutation(np.concatenate([np.arange(parts), rng.integers(0, parts, m - parts)]))
    return [list(np.flatnonzero(labels == p)) for p in range(parts)]


def _partition_demo(rng, dim, field, tol, weighted):
    t = _Tally(1e-9)
    for _ in range(100):
        n = _dim(rng, dim)
        F, K = gen.kframe(rng, n, field)
        parts = _random_partition(rng, F.size)
        w = gen.weights(rng, len(parts)) if weighted else None
        W, cert = partition_kframe(F, K, parts, w, tol)
        t.slack(max(cert.certified_A - cert.actual.A_opt, 0.0))
        t.slack(max(cert.actual.B_opt - cert.certified_B, 0.0))
        X = gen.unit_vectors(rng, n, 20, field)
        e = _energy(W, X)
        t.slack(np.max(np.maximum(cert.certified_A * np.linalg.norm(adjoint(K) @ X, axis=0) ** 2 - e, 0)))
        t.instances += 1
    return t


def demo_thm46(rng, dim, field, tol):
    return _partition_demo(rng, dim, field, tol, weighted=False)


def demo_cor47(rng, dim, field, tol):
    return _partition_demo(rng, dim, field, tol, weighted=True)


def demo_thm49(rng, dim, field, tol):
    from scipy.linalg import block_diag

    t = _Tally(1e-9)
    for _ in range(100):
        p = int(rng.integers(1, 4))
        m = int(rng.integers(2, 5))
        shared = gen.weights(rng, m)
        systems, Ks = [], []
        for _ in range(p):
            n = _dim(rng, max(2, dim // 2))
            if rng.integers(2):
                W = gen.fusion_system(rng, n, m=m, field=field)
                K = gen.operator(rng, n, field, rank_deficient=bool(rng.integers(2)))
            else:
                W, _ = gen.singular_system(rng, n, field, m=m)
                K = gen.planted_operator(rng, W, field)
            systems.append(FusionSystem(W.subspaces, shared))
            Ks.append(K)
        out, cert = direct_sum_kfusion(systems, Ks, tol)
        t.slack(max(cert.certified_A - cert.actual.A_opt, 0.0))
        t.slack(max(cert.actual.B_opt - cert.certified_B, 0.0))
        P_sum = project(direct_sum([W.subspaces[0] for W in systems]))
        t.slack(opnorm(P_sum - block_diag(*[project(W.subspaces[0]) for W in systems])))
        t.check(opnorm(project(out.subspaces[0]) - P_sum) <= tol.eq_tol)
        t.instances += 1
    return t


def demo_thm410(rng, dim, field, tol):
    t = _Tally(1e-8)
    for i in range(100):
        n = _dim(rng, dim)
        count = int(rng.integers(1, 5))
        if i % 2:
            W = gen.fusion_system(rng, n, field=field)
            Ks = [gen.operator(rng, n, field, rank_deficient=bool(rng.integers(2))) for _ in range(count)]
        else:
            W, _ = gen.singular_system(rng, n, field)
            Ks = [gen.planted_operator(rng, W, field) for _ in range(count)]
        coeffs = gen.gaussian(rng, count, "real")
        rep = combined_operator_bounds(W, Ks, coeffs, tol)
        t.slack(max(rep.certified_sum_A - rep.actual_sum.A_opt, 0.0))
        t.slack(max(rep.certified_product_A - rep.actual_product.A_opt, 0.0))
        t.instances += 1
    return t


def demo_lem411(rng, dim, field, tol):
    t = _Tally(1e-9)
    for _ in range(100):
        n = _dim(rng, dim)
        W, V, U, _ = gen.commuting_family(rng, n, field, cover=bool(rng.integers(2)))
        out, rep = intersect_system(W, V, tol=tol)
        t.slack(max(rep.bessel_after - rep.bessel_before, 0.0))
        # Member-wise version: each W_i meets its own V_i from the same basis.
        Vs = [Subspace(n, U[:, rng.random(n) < 0.5]) for _ in W.subspaces]
        S_cap = sum(v**2 * project(intersect(Wi, Vi, tol)) for (Wi, v), Vi in zip(W.members, Vs))
        before = np.linalg.eigvalsh(fusion_frame_operator(W))[-1]
        t.slack(max(np.linalg.eigvalsh(S_cap)[-1] - before, 0.0))
        t.instances += 1
    return t


def demo_thm412(rng, dim, field, tol):
    t = _Tally(1e-9)
    for _ in range(100):
        n = _dim(rng, dim)
        W, V, _, _ = gen.commuting_family(rng, n, field, cover=True)
        fb = fusion_bounds(W, tol)
        out, rep = intersect_system(W, V, tol=tol)
        t.check(rep.holds)
        X = gen.unit_vectors(rng, n, 100, field)
        e = _energy(out, X)
        lower = fb.A_opt * np.linalg.norm(project(V) @ X, axis=0) ** 2
        t.slack(np.max(np.maximum(lower - e, 0.0)))
        t.slack(np.max(np.maximum(e - fb.B_opt, 0.0)))
        t.instances += 1
    return t


def demo_thm413(rng, dim, field, tol):
    t = _Tally(1e-9)
    for _ in range(100):
        n = _dim(rng, dim)
        W, V, U, v_idx = gen.commuting_family(rng, n, field, cover=bool(rng.integers(2)))
        covered = np.linalg.norm(synthesis_map(W).conj().T @ U, axis=0) > 1e-12
        K = gen.reducing_operator(rng, U, v_idx, field, zero_rows=np.flatnonzero(~covered))
        kb = kfusion_bounds(W, K, tol)
        t.check(kb.lower_ok)
        out, rep = intersect_system(W, V, K, tol)
        t.check(rep.holds)
        P = project(V)
        floor = kb.A_opt / opnorm(pinv(P, tol)) ** 2
        X = P @ gen.gaussian(rng, (n, 100), field)
        X = X / np.linalg.norm(X, axis=0)
        e = _energy(out, X)
        if math.isfinite(floor):  # K = 0 makes the lower inequality vacuous
            kx = np.linalg.norm(adjoint(K) @ X, axis=0) ** 2
            t.slack(np.max(np.maximum(floor * kx - e, 0.0)))
        t.slack(np.max(np.maximum(e - kb.B_opt, 0.0)))
        t.instances += 1
    return t


def demo_douglas(rng, dim, field, tol):
    t = _Tally(1e-9)
    for _ in range(200):
        n = _dim(rng, dim)
        k = int(rng.integers(1, n + 1))
        T = gen.gaussian(rng, (n, k), field) @ gen.gaussian(rng, (k, int(rng.integers(1, n + 1))), field)
        L = gen.gaussian(rng, (T.shape[1], int(rng.integers(1, n + 1))), field)
        S = T @ L
        rep = douglas_check(S, T, tol)
        t.check(rep.range_inclusion and rep.majorization and rep.factorization)
        t.slack(opnorm(T @ rep.factor_L - S))
        if rep.witness is not None:
            # alpha_min is attained: the quadratic form vanishes at the witness.
            f = rep.witness
            form = rep.alpha_min * np.linalg.norm(adjoint(T) @ f) ** 2 - np.linalg.norm(adjoint(S) @ f) ** 2
            t.check(abs(form) <= 1e-6 * max(1.0, opnorm(S) ** 2))
        t.instances += 1
    for i in range(200):
        n = _dim(rng, dim)
        U = gen.unitary(rng, n, field)
        k = int(rng.integers(1, n))
        T = U[:, :k] @ gen.gaussian(rng, (k, k), field)
        S = U[:, k:] @ gen.gaussian(rng, (n - k, int(rng.integers(1, n + 1))), field)
        if i % 2:
            S = S + T @ gen.gaussian(rng, (k, S.shape[1]), field)
        rep = douglas_check(S, T, tol)
        t.check(not (rep.range_inclusion or rep.majorization or rep.factorization))
        t.instances += 1
    return t


REGISTRY = {
    "thm3.2": demo_thm32,
    "thm3.3": demo_thm33,
    "thm3.7a": demo_thm37a,
    "thm3.7b": demo_thm37b,
    "cor3.4": demo_cor34,
    "thm4.2": demo_thm42,
    "cor4.3": demo_cor43,
    "thm4.4": demo_thm44,
    "thm4.5": demo_thm45,
    "thm4.6": demo_thm46,
    "cor4.7": demo_cor47,
    "thm4.9": demo_thm49,
    "thm4.10": demo_thm410,
    "lem4.11": demo_lem411,
    "thm4.12": demo_thm412,
    "thm4.13": demo_thm413,
    "douglas": demo_douglas,
}


def run_demo(theorem_id, seed=0, dim=8, field="real", tol=DEFAULT_TOL):
    """Run the property check registered under ``theorem_id``."""
    try:
        fn = REGISTRY[theorem_id]
    except KeyError:
        raise UnknownTheorem(
            f"unknown theorem id {theorem_id!r}; known: {', '.join(REGISTRY)}"
        ) from None
    tally = fn(gen.make_rng(seed), dim, field, tol)
    return DemoResult(
        theorem=theorem_id,
        seed=seed,
        dim=dim,
        field=field,
        instances=tally.instances,
        max_slack=tally.max_slack,
        threshold=tally.threshold,
        failures=tally.failures,
    )
