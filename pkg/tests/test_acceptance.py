"""Acceptance criteria 1-12; each test records one PASS/FAIL line for the terminal summary."""

from __future__ import annotations

import random
import time
from itertools import product
from math import comb, sqrt

import numpy as np
import scipy.linalg

import resource_tables as ref
from paldus.applications import (
    block_structure,
    csf_acceptance,
    csf_success_probability,
    dfs_roundtrip,
    largest_sector,
    prepare_uniform_csf,
    random_payload,
)
from paldus.circuit import paldus_circuit, run, run_isometry_check
from paldus.combinatorics import StepVector, UgaLabel, dimension_identities
from paldus.gtstates import build_gt_state, gt_basis_oracle
from paldus.operators import (
    SparseOperator,
    commutator,
    hubbard,
    ladder_E,
    ladder_Espin,
    observables,
    random_spinfree_coefficients,
    spinfree_hamiltonian,
    u2_evolution,
    u2_hamiltonian,
    ud_factor_check,
)
from paldus.resources import (
    Strategy,
    data_lookup_cost,
    givens_rotation_cost,
    incrementer_cost,
    n_elements,
    rotation_lookup_cost,
    total_paldus_cost,
)
from paldus.symfunc import identity_suite

R2 = 1 / sqrt(2)

D1_TABLE = {
    (0, 0, 0, "00"): {"00": 1.0},
    (1, 1, 1, "10"): {"10": 1.0},
    (1, 1, -1, "10"): {"01": 1.0},
    (2, 0, 0, "11"): {"11": 1.0},
}

D2_TABLE = {
    (0, 0, 0, "00,00"): {"0000": 1},
    (4, 0, 0, "11,11"): {"1111": 1},
    (1, 1, 1, "00,10"): {"0010": 1},
    (1, 1, 1, "10,00"): {"1000": 1},
    (1, 1, -1, "00,10"): {"0001": 1},
    (1, 1, -1, "10,00"): {"0100": 1},
    (3, 1, -1, "11,10"): {"1101": 1},
    (3, 1, -1, "10,11"): {"0111": 1},
    (3, 1, 1, "11,10"): {"1110": 1},
    (3, 1, 1, "10,11"): {"1011": 1},
    (2, 2, 2, "10,10"): {"1010": 1},
    (2, 2, 0, "10,10"): {"1001": R2, "0110": R2},
    (2, 2, -2, "10,10"): {"0101": 1},
    (2, 0, 0, "00,11"): {"0011": 1},
    (2, 0, 0, "10,01"): {"1001": R2, "0110": -R2},
    (2, 0, 0, "11,00"): {"1100": 1},
}


def _table_errors(d, table):
    """Worst amplitude error of the oracle and of the circuit against a printed table."""
    oracle = {lab: vec for lab, vec in gt_basis_oracle(d)}
    circ = paldus_circuit(d)
    lay = circ.layout
    inverse = circ.inverse()
    size = 1 << (2 * d)
    worst_oracle = worst_circuit = 0.0
    for (n, two_s, two_m, step), amps in table.items():
        lab = UgaLabel(n, two_s, two_m, StepVector.parse(step))
        want = np.zeros(size)
        for bits, a in amps.items():
            want[int(bits, 2)] = a
        worst_oracle = max(worst_oracle, np.abs(oracle[lab] - want).max())
        # forward: the printed state lands on its label
        vec = np.zeros(1 << lay.width, dtype=complex)
        vec[:size] = want
        out = run(circ, vec)
        worst_circuit = max(worst_circuit, abs(out[lay.encode_label(lab)] - 1))
        # backward: the label unfolds into the printed amplitudes with clean registers
        basis = np.zeros(1 << lay.width, dtype=complex)
        basis[lay.encode_label(lab)] = 1
        back = run(inverse, basis)
        worst_circuit = max(worst_circuit, np.abs(back[:size] - want).max(), np.abs(back[size:]).max())
    return len(oracle), worst_oracle, worst_circuit


def test_criterion_01_d1_table(record):
    t0 = time.perf_counter()
    count, e_oracle, e_circuit = _table_errors(1, D1_TABLE)
    dt = time.perf_counter() - t0
    ok = count == 4 and e_oracle < 1e-12 and e_circuit < 1e-12 and dt < 1
    record(1, ok, f"oracle err={e_oracle:.1e} circuit err={e_circuit:.1e} time={dt:.3f}s")
    assert ok


def test_criterion_02_d2_table(record):
    t0 = time.perf_counter()
    count, e_oracle, e_circuit = _table_errors(2, D2_TABLE)
    dt = time.perf_counter() - t0
    ok = count == 16 and len(D2_TABLE) == 16 and e_oracle < 1e-12 and e_circuit < 1e-12 and dt < 1
    record(2, ok, f"16 states, oracle err={e_oracle:.1e} circuit err={e_circuit:.1e} time={dt:.3f}s")
    assert ok


def test_criterion_03_isometry(record):
    reports = [run_isometry_check(d, raise_on_fail=False) for d in (1, 2, 3, 4)]
    worst = max(abs(1 - r.min_overlap) for r in reports)
    ok = all(r.ok and r.n_labels == 4**r.d for r in reports) and reports[-1].seconds < 120
    record(3, ok, f"max |1-overlap|={worst:.1e} d=4 time={reports[-1].seconds:.1f}s backend={reports[-1].backend}")
    assert ok


def _brute_force_count(d):
    """Count step strings with every prefix spin nonnegative by scanning all 4^d strings."""
    by_sector = {}
    for steps in product(range(4), repeat=d):
        two_s, bad = 0, False
        for s in steps:
            two_s += {0: 0, 1: 1, 2: -1, 3: 0}[s]
            bad |= two_s < 0
        if not bad:
            key = (sum(bin(s).count("1") for s in steps), two_s)
            by_sector[key] = by_sector.get(key, 0) + 1
    return by_sector


def test_criterion_04_dimension_identities(record):
    t0 = time.perf_counter()
    ok = True
    for d in range(1, 9):
        rep = dimension_identities(d, enumerate_up_to=6)
        ok &= rep.ok and rep.total_step_vectors == comb(2 * d + 1, d) and rep.weighted_total == 4**d
        ok &= rep.enumerated == (d <= 6)
        if d <= 6:
            brute = _brute_force_count(d)
            ok &= brute == {(n, s): dim for n, s, dim, _ in rep.table}
    dt = time.perf_counter() - t0
    ok &= dt < 10
    record(4, ok, f"d=1..8 by formula, d=1..6 by enumeration and brute force, time={dt:.2f}s")
    assert ok


def test_criterion_05_givens_count(record):
    counts = [paldus_circuit(d).nontrivial_givens() for d in range(1, 11)]
    want = [d * (d + 1) * (d + 2) // 6 for d in range(1, 11)]
    ok = counts == want and counts[2] == 10
    record(5, ok, f"counts={counts}")
    assert ok


def _commutator_residual(d):
    idx = range(1, d + 1)
    worst = 0.0
    for i, j, k, l in product(idx, repeat=4):
        rhs = SparseOperator.zero(2 * d)
        if j == k:
            rhs = rhs + ladder_E(i, l, d)
        if i == l:
            rhs = rhs - ladder_E(k, j, d)
        worst = max(worst, (commutator(ladder_E(i, j, d), ladder_E(k, l, d)) - rhs).norm())
    for mu, nu, s, t in product(("up", "down"), repeat=4):
        rhs = SparseOperator.zero(2 * d)
        if nu == s:
            rhs = rhs + ladder_Espin(mu, t, d)
        if mu == t:
            rhs = rhs - ladder_Espin(s, nu, d)
        worst = max(worst, (commutator(ladder_Espin(mu, nu, d), ladder_Espin(s, t, d)) - rhs).norm())
    for i, j in product(idx, repeat=2):
        for mu, nu in product(("up", "down"), repeat=2):
            worst = max(worst, commutator(ladder_E(i, j, d), ladder_Espin(mu, nu, d)).norm())
    return worst


def test_criterion_06_commutators(record):
    worst = max(_commutator_residual(2), _commutator_residual(3))
    rng = np.random.default_rng(6)
    n_op, _, s2 = observables(2)
    worst_h = 0.0
    for _ in range(20):
        h = spinfree_hamiltonian(2, *random_spinfree_coefficients(2, rng))
        worst_h = max(worst_h, commutator(h, s2).norm(), commutator(h, n_op).norm())
    ok = worst < 1e-12 and worst_h < 1e-12
    record(6, ok, f"generator residual={worst:.1e} [H,S^2],[H,N] residual={worst_h:.1e} (20 random H)")
    assert ok


def test_criterion_07_block_diagonal(record):
    rng = np.random.default_rng(7)
    worst_cross = worst_m = 0.0
    t3 = 0.0
    for d in (2, 3):
        t0 = time.perf_counter()
        hams = [spinfree_hamiltonian(d, *random_spinfree_coefficients(d, rng)) for _ in range(10)]
        hams += [hubbard(d, 1.0, u) for u in (0.0, 2.0, 4.0)]
        for h in hams:
            rep = block_structure(d, h)
            worst_cross = max(worst_cross, rep.cross_sector)
            worst_m = max(worst_m, rep.m_factor)
        if d == 3:
            t3 = time.perf_counter() - t0
    ok = worst_cross < 1e-9 and worst_m < 1e-9 and t3 < 60
    record(7, ok, f"cross-sector={worst_cross:.1e} M-factor={worst_m:.1e} d=3 time={t3:.1f}s")
    assert ok


def test_criterion_08_matchgates(record):
    rng = np.random.default_rng(8)
    worst_u2 = worst_ud = 0.0
    for d in (2, 3):
        for _ in range(5):
            alphas = rng.normal(size=4)
            want = scipy.linalg.expm(1j * u2_hamiltonian(d, alphas).to_matrix())
            worst_u2 = max(worst_u2, np.abs(u2_evolution(d, alphas) - want).max())
        for _ in range(10):
            worst_ud = max(worst_ud, ud_factor_check(d, rng.normal(size=(d, d))))
    ok = worst_u2 < 1e-9 and worst_ud < 1e-9
    record(8, ok, f"u(2) tensor power err={worst_u2:.1e} u(d) factor residual={worst_ud:.1e}")
    assert ok


def test_criterion_09_csf_preparation(record):
    exact = {d: csf_success_probability(d) for d in (1, 2)}
    exact_ok = abs(exact[1] - 0.75) < 1e-12 and abs(exact[2] - 0.625) < 1e-12
    exact_ok &= all(abs(exact[d] - comb(2 * d + 1, d) / 4**d) < 1e-12 for d in exact)
    stats = csf_acceptance(2, 10_000, seed=2024)
    overlaps = [prepare_uniform_csf(d, seed=d).overlap for d in (1, 2, 3)]
    ok = exact_ok and abs(stats.z_score) <= 3 and min(overlaps) >= 1 - 1e-9
    record(
        9,
        ok,
        f"P(d=1)={exact[1]:.12f} P(d=2)={exact[2]:.12f} rate={stats.rate:.4f} z={stats.z_score:+.2f} "
        f"min overlap={min(overlaps):.12f}",
    )
    assert ok


def test_criterion_10_dfs(record):
    rng = np.random.default_rng(10)
    worst_f, worst_m = 1.0, 0.0
    for d in (2, 3):
        sector = largest_sector(d)
        payload = random_payload(d, sector, rng)
        for _ in range(100):
            noise = rng.normal(size=4)
            noise[3] = noise[3] if abs(noise[3]) > 1e-3 else 0.5
            two_m = int(rng.choice(range(-sector[1], sector[1] + 1, 2)))
            res = dfs_roundtrip(d, payload, noise, twoM=two_m)
            worst_f = min(worst_f, res.fidelity)
            worst_m = max(worst_m, res.m_residual)
    ok = worst_f >= 1 - 1e-9 and worst_m < 1e-9
    record(10, ok, f"min fidelity={worst_f:.15f} max M-state residual={worst_m:.1e} (200 draws)")
    assert ok


def test_criterion_11_symmetric_functions(record):
    checks = identity_suite(seed=11, trials=100, tol=1e-8)
    names = {c.name for c in checks}
    ok = all(c.passed for c in checks) and {"dual-cauchy-2x2", "dual-cauchy-3x2", "dual-cauchy-4x2", "dual-pieri"} <= names
    ok &= any(n.startswith("branching") for n in names)
    record(11, ok, "; ".join(f"{c.name} {c.max_rel:.1e}" for c in checks))
    assert ok


def test_criterion_12_resource_tables(record):
    rnd = random.Random(12)
    grid = [(rnd.randint(1, 64), rnd.randint(1, 64), rnd.choice([1, 2, 4, 8]), rnd.choice(list(Strategy))) for _ in range(200)]
    mismatches = 0
    for d, q, k, s in grid:
        g = givens_rotation_cost(d, q, k, s)
        mismatches += (g.toffoli, g.cleanQubits, g.dirtyQubits) != (
            ref.GIVENS_TOFFOLI[s.value](d, q, k),
            ref.GIVENS_CLEAN[s.value](d, q, k),
            ref.GIVENS_DIRTY[s.value](d, q, k),
        )
        mismatches += incrementer_cost(d).toffoli != ref.c_inc(d)
        mismatches += total_paldus_cost(min(d, 24), q, k, s).toffoli != ref.total(min(d, 24), q, k, s.value)
        if s is not Strategy.MultiIndexData:
            I = n_elements(d)
            for phase in ("compute", "uncompute"):
                lk = data_lookup_cost(I, q, k, s, phase)
                mismatches += (lk.toffoli, lk.cleanQubits) != (ref.LOOKUP_TOFFOLI[(s.value, phase)](I, q, k), ref.LOOKUP_CLEAN[s.value](I, q, k))
            rot = rotation_lookup_cost(I, q, k, s)
            mismatches += (rot.toffoli, rot.cleanQubits) != (ref.ROTATION_TOFFOLI[s.value](I, q, k), ref.ROTATION_CLEAN[s.value](I, q, k))

    def drift(s, k):
        r16 = total_paldus_cost(16, 17, k, s).toffoli / 16**3
        r32 = total_paldus_cost(32, 17, k, s).toffoli / 32**3
        return abs(r32 - r16) / r32

    checked = {f"{s.value}@k=1": drift(s, 1) for s in (Strategy.UnaryIteration, Strategy.CleanSelectSwap, Strategy.DirtySelectSwap)}
    checked["UnaryIteration@k=4"] = drift(Strategy.UnaryIteration, 4)
    multi = drift(Strategy.MultiIndexData, 1)
    ok = mismatches == 0 and max(checked.values()) < 0.2
    detail = ", ".join(f"{k} {v:.0%}" for k, v in checked.items())
    record(12, ok, f"grid mismatches={mismatches}; d^3 drift 16->32: {detail}; MultiIndexData@k=1 {multi:.0%} (not yet asymptotic)")
    assert ok
