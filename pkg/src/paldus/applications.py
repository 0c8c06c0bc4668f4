"""Protocols built on the transform: spin projection, CSF preparation, DFS, matrix elements."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .circuit import (
    Circuit,
    Gate,
    RegisterLayout,
    StateVector,
    generic_gate,
    inc_m,
    inc_n,
    inc_s,
    paldus_circuit,
    paldus_isometry_matrix,
    run,
)
from .combinatorics import StepVector, UgaLabel, enumerate_step_vectors
from .errors import InvalidPayload, LocalityViolation, ValidationError, ZeroNorm
from .operators import ladder_E, wv_gate


def _d_of(vec: np.ndarray) -> int:
    n = int(vec.size).bit_length() - 1
    if (1 << n) != vec.size or n % 2:
        raise ValidationError("state must live on an even number of qubits")
    return n // 2


@lru_cache(maxsize=8)
def _circuits(d: int) -> tuple[Circuit, Circuit]:
    c = paldus_circuit(d)
    return c, c.inverse()


def _register_fields(lay: RegisterLayout) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    idx = np.arange(1 << lay.width, dtype=np.int64) >> (2 * lay.d)
    m = idx & ((1 << lay.n_M) - 1)
    m = np.where(m >= 1 << (lay.n_M - 1), m - (1 << lay.n_M), m)
    s = (idx >> lay.n_M) & ((1 << lay.n_S) - 1)
    n = idx >> (lay.n_M + lay.n_S)
    return n, s, m


# ------------------------------------------------------------------ spin projection


def project_spin(state: np.ndarray | StateVector, twoS: int) -> tuple[float, np.ndarray]:
    """Probability of total spin ``twoS/2`` and the normalised post-measurement state."""
    vec = np.asarray(state.data if isinstance(state, StateVector) else state, dtype=complex)
    d = _d_of(vec)
    if d > 4:
        raise ValidationError("spin projection is simulated densely only for d <= 4")
    fwd, bwd = _circuits(d)
    lay = fwd.layout
    assert lay is not None
    full = np.zeros(1 << lay.width, dtype=complex)
    full[: vec.size] = vec
    out = run(fwd, full)
    _, s_field, _ = _register_fields(lay)
    out[s_field != twoS] = 0
    prob = float(np.vdot(out, out).real)
    if prob < 1e-14:
        raise ZeroNorm(f"no weight in 2S={twoS}")
    back = run(bwd, out / np.sqrt(prob))
    return prob, back[: vec.size].copy()


def spin_distribution(state: np.ndarray | StateVector) -> dict[int, float]:
    vec = np.asarray(state.data if isinstance(state, StateVector) else state, dtype=complex)
    d = _d_of(vec)
    fwd, _ = _circuits(d)
    lay = fwd.layout
    assert lay is not None
    full = np.zeros(1 << lay.width, dtype=complex)
    full[: vec.size] = vec
    out = run(fwd, full)
    _, s_field, _ = _register_fields(lay)
    probs = np.abs(out) ** 2
    return {s: float(probs[s_field == s].sum()) for s in range(d + 1)}


# ------------------------------------------------------------------ CSF preparation


@dataclass
class CsfResult:
    state: StateVector
    attempts: int
    overlap: float


@dataclass
class CsfStatistics:
    d: int
    trials: int
    accepted: int
    expected: float
    seed: int

    @property
    def rate(self) -> float:
        return self.accepted / self.trials

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.expected * (1 - self.expected) / self.trials))

    @property
    def z_score(self) -> float:
        return (self.rate - self.expected) / self.sigma if self.sigma else 0.0


class _CsfProtocol:
    """Hadamards on a pair, M increment, sign-bit measurement; one orbital at a time."""

    def __init__(self, d: int):
        if d > 4:
            raise ValidationError("CSF preparation is simulated for d <= 4")
        self.d = d
        self.layout = RegisterLayout(d)
        lay = self.layout
        self.steps = []
        for i in range(1, d + 1):
            a, b = lay.pair(i)
            c = Circuit(lay.width, [Gate("Hadamard", (a,)), Gate("Hadamard", (b,))], lay) + inc_m(d, i, lay)
            self.steps.append(c)
        fin = Circuit(lay.width, layout=lay)
        for i in range(1, d + 1):
            fin = fin + inc_s(d, i, lay) + inc_n(d, i, lay)
        self.finish = fin
        sign_bit = 1 << (lay.width - 1 - lay.m_qubits[0])
        idx = np.arange(1 << lay.width, dtype=np.int64)
        self.negative = (idx & sign_bit) != 0

    def blank(self) -> np.ndarray:
        v = np.zeros(1 << self.layout.width, dtype=complex)
        v[0] = 1
        return v

    def step(self, vec: np.ndarray, i: int) -> tuple[np.ndarray, float]:
        """Apply step ``i`` (0-based) and project on a nonnegative M; returns (unnormalised, prob)."""
        out = run(self.steps[i], vec)
        out[self.negative] = 0
        return out, float(np.vdot(out, out).real)


def csf_step_probabilities(d: int) -> list[float]:
    """Exact conditional success probability of each step, from projector norms."""
    proto = _CsfProtocol(d)
    vec = proto.blank()
    probs = []
    for i in range(d):
        vec, p = proto.step(vec, i)
        probs.append(p)
        vec = vec / np.sqrt(p)
    return probs


def csf_success_probability(d: int) -> float:
    return float(np.prod(csf_step_probabilities(d)))


def uniform_csf_reference(d: int) -> np.ndarray:
    """Analytic superposition of every valid step vector with M = S, in the UGA layout."""
    lay = RegisterLayout(d)
    steps = enumerate_step_vectors(d)
    vec = np.zeros(1 << lay.width, dtype=complex)
    for sv in steps:
        vec[lay.encode(sv.n_particles, sv.two_s, sv.two_s, sv)] = 1
    return vec / np.sqrt(len(steps))


def prepare_uniform_csf(d: int, seed: int = 0, max_attempts: int = 10_000) -> CsfResult:
    """Repeat the measured protocol until every sign-bit outcome reads zero."""
    rng = np.random.default_rng(seed)
    proto = _CsfProtocol(d)
    for attempt in range(1, max_attempts + 1):
        vec = proto.blank()
        ok = True
        for i in range(d):
            vec, p = proto.step(vec, i)
            if rng.random() >= p:
                ok = False
                break
            vec = vec / np.sqrt(p)
        if ok:
            final = run(proto.finish, vec)
            ov = abs(np.vdot(uniform_csf_reference(d), final))
            return CsfResult(StateVector(final, proto.layout), attempt, float(ov))
    raise RuntimeError(f"no success in {max_attempts} attempts")


def csf_acceptance(d: int, trials: int, seed: int = 0) -> CsfStatistics:
    """Run the full protocol ``trials`` times (no restarts) and count successes."""
    rng = np.random.default_rng(seed)
    proto = _CsfProtocol(d)
    accepted = 0
    for _ in range(trials):
        vec = proto.blank()
        for i in range(d):
            vec, p = proto.step(vec, i)
            if rng.random() >= p:
                break
            vec = vec / np.sqrt(p)
        else:
            accepted += 1
    return CsfStatistics(d, trials, accepted, comb(2 * d + 1, d) / 4**d, seed)


# ------------------------------------------------------------------ DFS


def spin_matrices(two_s: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-S matrices in the basis ``M = S, S-1, ..., -S``."""
    s = two_s / 2
    ms = [s - k for k in range(two_s + 1)]
    jp = np.zeros((two_s + 1, two_s + 1), dtype=complex)
    for k in range(1, two_s + 1):
        m = ms[k]
        jp[k - 1, k] = np.sqrt(s * (s + 1) - m * (m + 1))
    jm = jp.conj().T
    return (jp + jm) / 2, (jp - jm) / 2j, np.diag(ms).astype(complex)


@dataclass
class DfsResult:
    fidelity: float
    sector: tuple[int, int]
    m_state: np.ndarray
    predicted_m_state: np.ndarray
    noise: tuple[float, float, float, float]
    extra: dict = field(default_factory=dict)

    @property
    def m_residual(self) -> float:
        return float(np.abs(self.m_state - self.predicted_m_state).max())


def _payload_vector(d: int, payload: Mapping[str | StepVector, complex]) -> tuple[np.ndarray, tuple[int, int]]:
    if not payload:
        raise InvalidPayload("empty payload")
    sectors = set()
    vec = np.zeros(1 << (2 * d), dtype=complex)
    for key, amp in payload.items():
        sv = StepVector.parse(key)
        if sv.d != d:
            raise InvalidPayload(f"step vector {sv} is not on {d} orbitals")
        sectors.add((sv.n_particles, sv.two_s))
        vec[int(sv.bitstring(), 2)] += amp
    if len(sectors) != 1:
        raise InvalidPayload(f"payload spans several (N, 2S) sectors: {sorted(sectors)}")
    norm = np.linalg.norm(vec)
    if norm < 1e-14:
        raise InvalidPayload("payload has zero norm")
    return vec / norm, sectors.pop()


def noise_circuit(d: int, noise: Sequence[float], width: int | None = None, offset: int = 0) -> Circuit:
    """One WV matchgate on each orbital pair."""
    g = wv_gate(*noise)
    c = Circuit(width if width is not None else 2 * d)
    for i in range(d):
        c.append(generic_gate(g, (offset + 2 * i, offset + 2 * i + 1)))
    return c


def dfs_roundtrip(
    d: int,
    payload: Mapping[str | StepVector, complex],
    noise: Sequence[float],
    twoM: int | None = None,
) -> DfsResult:
    """Encode with the inverse transform, apply collective u(2) noise, decode."""
    psi, (n, two_s) = _payload_vector(d, payload)
    two_m = two_s if twoM is None else twoM
    if abs(two_m) > two_s or (two_m - two_s) % 2:
        raise InvalidPayload(f"2M={two_m} not allowed for 2S={two_s}")
    fwd, bwd = _circuits(d)
    lay = fwd.layout
    assert lay is not None
    size = 1 << (2 * d)
    full = np.zeros(1 << lay.width, dtype=complex)
    base = lay.encode(n, two_s, two_m, 0)
    full[base : base + size] = psi

    sent = run(bwd, full)
    leak = float(np.linalg.norm(sent[size:]))
    if leak > 1e-9:
        raise ValidationError(f"encoded state leaves the occupation register dirty ({leak:.3e})")
    received = run(noise_circuit(d, noise), sent[:size])
    full_out = np.zeros_like(full)
    full_out[:size] = received
    out = run(fwd, full_out)

    amp = out.reshape(-1, size)  # rows: register value, columns: step register
    rho = amp.T @ amp.conj()
    fidelity = float(np.vdot(psi, rho @ psi).real)

    # register state left after projecting the step register on the payload
    reg = amp @ psi.conj()
    ms = list(range(two_s, -two_s - 1, -2))
    m_state = np.array([reg[lay.encode(n, two_s, m, 0) >> (2 * d)] for m in ms])
    ax, ay, az, an = noise
    jx, jy, jz = spin_matrices(two_s)
    w = scipy.linalg.expm(1j * (ax * jx + ay * jy + az * jz)) * np.exp(0.5j * n * an)
    e_m = np.zeros(two_s + 1, dtype=complex)
    e_m[ms.index(two_m)] = 1
    predicted = w @ e_m
    return DfsResult(fidelity, (n, two_s), m_state, predicted, tuple(float(x) for x in noise))


def random_payload(d: int, sector: tuple[int, int], rng: np.random.Generator) -> dict[str, complex]:
    steps = enumerate_step_vectors(d, sector)
    amps = rng.normal(size=len(steps)) + 1j * rng.normal(size=len(steps))
    amps /= np.linalg.norm(amps)
    return {str(sv): complex(a) for sv, a in zip(steps, amps)}


def largest_sector(d: int) -> tuple[int, int]:
    """Sector whose step register holds the most payload states.

    Only ``dim_irrep`` counts: the M factor is what the noise acts on. Ties go to
    the lowest spin, then to ``N`` closest to ``d``.
    """
    from .combinatorics import allowed_sectors, dim_irrep

    return max(allowed_sectors(d), key=lambda ns: (dim_irrep(d, ns[1], ns[0]), -ns[1], -abs(ns[0] - d), -ns[0]))


# ------------------------------------------------------------------ UGA matrix elements


@lru_cache(maxsize=4)
def _isometry(d: int) -> tuple[tuple[UgaLabel, ...], np.ndarray]:
    labels, r = paldus_isometry_matrix(d)
    return tuple(labels), r


@dataclass
class MatrixElements:
    d: int
    i: int
    j: int
    labels: list[UgaLabel]
    matrix: np.ndarray
    max_violation: float


def uga_matrix_elements(d: int, i: int, j: int, tol: float = 1e-10) -> MatrixElements:
    """``U_P E_ij U_P^dagger`` in the UGA basis, with the locality rules asserted."""
    if d > 3:
        raise ValidationError("UGA matrix elements are computed for d <= 3")
    if not (1 <= i <= d and 1 <= j <= d):
        raise ValidationError(f"orbital indices must lie in 1..{d}")
    labels, r = _isometry(d)
    e = ladder_E(i, j, d).to_matrix()
    mat = r @ e @ r.conj().T
    lo, hi = min(i, j), max(i, j)
    worst = 0.0
    for a, la in enumerate(labels):
        for b, lb in enumerate(labels):
            val = abs(mat[a, b])
            if val <= tol:
                continue
            same_sector = (la.n_particles, la.twoS, la.twoM) == (lb.n_particles, lb.twoS, lb.twoM)
            outside_equal = all(
                la.step.pair(k) == lb.step.pair(k) for k in range(1, d + 1) if not lo <= k <= hi
            )
            if not (same_sector and outside_equal):
                worst = max(worst, val)
    if worst > tol:
        raise LocalityViolation(f"E_{i}{j} has a forbidden element of size {worst:.3e}")
    return MatrixElements(d, i, j, list(labels), mat, worst)


# ------------------------------------------------------------------ Schur emulation


def schur_encoder(d: int) -> Circuit:
    """Qubit ``k`` at position ``2k`` with a clean ancilla at ``2k+1``: 0 -> 10, 1 -> 01."""
    c = Circuit(2 * d)
    for k in range(d):
        c.append(Gate("CNOT", (2 * k + 1,), (2 * k,), (1,)))
        c.append(Gate("CNOT", (2 * k,)))
    return c


def interleave_ancillas(qubit_state: np.ndarray) -> np.ndarray:
    """``d``-qubit state -> ``2d``-qubit state with a zero ancilla after every qubit."""
    q = np.asarray(qubit_state, dtype=complex)
    d = int(q.size).bit_length() - 1
    out = np.zeros(1 << (2 * d), dtype=complex)
    for x in range(q.size):
        y = 0
        for k in range(d):
            y = (y << 2) | (((x >> (d - 1 - k)) & 1) << 1)
        out[y] = q[x]
    return out


def schur_emulation(qubit_state: np.ndarray) -> StateVector:
    """Encode ``d`` qubits into singly occupied orbitals and apply the transform."""
    occ = run(schur_encoder(_d_of(interleave_ancillas(qubit_state))), interleave_ancillas(qubit_state))
    d = _d_of(occ)
    fwd, _ = _circuits(d)
    lay = fwd.layout
    full = np.zeros(1 << lay.width, dtype=complex)
    full[: occ.size] = occ
    return StateVector(run(fwd, full), lay)


# ------------------------------------------------------------------ block diagonalisation


@dataclass
class BlockReport:
    d: int
    cross_sector: float
    m_factor: float

    def ok(self, tol: float = 1e-9) -> bool:
        return self.cross_sector < tol and self.m_factor < tol


def block_structure(d: int, hamiltonian, time: float = 1.0) -> BlockReport:
    """Conjugate ``exp(-i t H)`` into the UGA basis and measure what breaks ``sum_{N,S} Q_{N,S} (x) 1_M``."""
    if d > 3:
        raise ValidationError("block structure is checked densely for d <= 3")
    labels, r = _isometry(d)
    h = hamiltonian.to_matrix() if hasattr(hamiltonian, "to_matrix") else np.asarray(hamiltonian)
    u = scipy.linalg.expm(-1j * time * h)
    v = r @ u @ r.conj().T
    sector = np.array([(lab.n_particles, lab.twoS) for lab in labels])
    same = (sector[:, None, :] == sector[None, :, :]).all(axis=2)
    cross = float(np.abs(v[~same]).max(initial=0.0))

    pos = {(lab.n_particles, lab.twoS, lab.twoM, lab.step): a for a, lab in enumerate(labels)}
    worst = 0.0
    for a, la in enumerate(labels):
        for b, lb in enumerate(labels):
            if not same[a, b]:
                continue
            top = v[pos[(la.n_particles, la.twoS, la.twoS, la.step)], pos[(lb.n_particles, lb.twoS, lb.twoS, lb.step)]]
            want = top if la.twoM == lb.twoM else 0.0
            worst = max(worst, abs(v[a, b] - want))
    return BlockReport(d, cross, float(worst))
