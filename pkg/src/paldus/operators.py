"""Sparse Pauli-string operators on ``2d`` qubits.

Qubits are interleaved as ``(1up, 1down, 2up, 2down, ...)`` and qubit 0 is the
most significant bit of a basis index, so ``|1001>`` is index ``0b1001``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .errors import NonHermitianInput

PRUNE = 1e-14

# single-letter products: (a, b) -> (phase, letter)
_MUL: dict[tuple[str, str], tuple[complex, str]] = {}
for _a in "IXYZ":
    _MUL[("I", _a)] = (1, _a)
    _MUL[(_a, "I")] = (1, _a)
    _MUL[(_a, _a)] = (1, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _MUL[(_a, _b)] = (1j, _c)
    _MUL[(_b, _a)] = (-1j, _c)


@lru_cache(maxsize=1 << 16)
def _mul_strings(p: str, q: str) -> tuple[complex, str]:
    phase: complex = 1
    letters = []
    for a, b in zip(p, q):
        ph, c = _MUL[(a, b)]
        phase *= ph
        letters.append(c)
    return phase, "".join(letters)


@dataclass(frozen=True)
class PauliString:
    phase: complex
    letters: str

    def __post_init__(self) -> None:
        if any(ch not in "IXYZ" for ch in self.letters):
            raise ValueError(f"bad Pauli letters {self.letters!r}")

    def __mul__(self, other: "PauliString") -> "PauliString":
        ph, letters = _mul_strings(self.letters, other.letters)
        return PauliString(self.phase * other.phase * ph, letters)


def _pauli_action(letters: str) -> tuple[int, int, int]:
    """(x mask, z mask, number of Y) with qubit 0 as the top bit."""
    n = len(letters)
    xm = zm = ny = 0
    for q, ch in enumerate(letters):
        bit = 1 << (n - 1 - q)
        if ch in "XY":
            xm |= bit
        if ch in "ZY":
            zm |= bit
        if ch == "Y":
            ny += 1
    return xm, zm, ny


def _parity(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    out = np.zeros_like(arr)
    while np.any(arr):
        out ^= arr & 1
        arr >>= 1
    return out


class SparseOperator:
    """Complex linear combination of Pauli strings on a fixed number of qubits."""

    __slots__ = ("n_qubits", "_terms")

    def __init__(self, n_qubits: int, terms: Mapping[str, complex] | None = None):
        self.n_qubits = int(n_qubits)
        clean: dict[str, complex] = {}
        for k, v in (terms or {}).items():
            if len(k) != self.n_qubits:
                raise ValueError(f"term {k!r} does not act on {self.n_qubits} qubits")
            v = complex(v)
            if abs(v) > PRUNE:
                clean[k] = clean.get(k, 0) + v
        self._terms = {k: v for k, v in clean.items() if abs(v) > PRUNE}

    @classmethod
    def identity(cls, n: int, coeff: complex = 1.0) -> "SparseOperator":
        return cls(n, {"I" * n: coeff})

    @classmethod
    def zero(cls, n: int) -> "SparseOperator":
        return cls(n)

    @property
    def terms(self) -> dict[str, complex]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __repr__(self) -> str:
        body = " + ".join(f"({v:.6g})*{k}" for k, v in sorted(self._terms.items()))
        return f"SparseOperator({self.n_qubits}, {body or '0'})"

    def _check(self, other: "SparseOperator") -> None:
        if other.n_qubits != self.n_qubits:
            raise ValueError("operators act on different numbers of qubits")

    def __add__(self, other: "SparseOperator | complex") -> "SparseOperator":
        if not isinstance(other, SparseOperator):
            other = SparseOperator.identity(self.n_qubits, other)
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return SparseOperator(self.n_qubits, out)

    __radd__ = __add__

    def __neg__(self) -> "SparseOperator":
        return SparseOperator(self.n_qubits, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "SparseOperator | complex") -> "SparseOperator":
        return self + (-other if isinstance(other, SparseOperator) else -complex(other))

    def __rsub__(self, other: complex) -> "SparseOperator":
        return (-self) + other

    def __mul__(self, c: complex) -> "SparseOperator":
        if isinstance(c, SparseOperator):
            return self @ c
        return SparseOperator(self.n_qubits, {k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c: complex) -> "SparseOperator":
        return self * (1.0 / c)

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        out: dict[str, complex] = {}
        for p, a in self._terms.items():
            for q, b in other._terms.items():
                ph, r = _mul_strings(p, q)
                out[r] = out.get(r, 0) + a * b * ph
        return SparseOperator(self.n_qubits, out)

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.n_qubits, {k: np.conj(v) for k, v in self._terms.items()})

    def norm(self) -> float:
        """Sum of absolute coefficients (an upper bound on the spectral norm)."""
        return float(sum(abs(v) for v in self._terms.values()))

    def is_zero(self, tol: float = 1e-12) -> bool:
        return self.norm() < tol

    def hermiticity_residual(self) -> float:
        return (self - self.adjoint()).norm()

    def to_matrix(self) -> np.ndarray:
        n = self.n_qubits
        dim = 1 << n
        cols = np.arange(dim, dtype=np.int64)
        mat = np.zeros((dim, dim), dtype=complex)
        for letters, coeff in self._terms.items():
            xm, zm, ny = _pauli_action(letters)
            # P|b> = i^ny (-1)^{popcount(b & zm)} |b ^ xm>, with Y = iXZ
            signs = 1 - 2 * _parity(cols & zm)
            mat[cols ^ xm, cols] += coeff * (1j**ny) * signs
        return mat

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=complex)
        idx = np.arange(vec.size, dtype=np.int64)
        out = np.zeros_like(vec)
        for letters, coeff in self._terms.items():
            xm, zm, ny = _pauli_action(letters)
            signs = 1 - 2 * _parity(idx & zm)
            out[idx ^ xm] += coeff * (1j**ny) * signs * vec
        return out

    def to_json(self) -> list[dict]:
        return [{"pauli": k, "re": float(v.real), "im": float(v.imag)} for k, v in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Sequence[Mapping] | str) -> "SparseOperator":
        if isinstance(data, str):
            data = json.loads(data)
        if not data:
            raise ValueError("cannot infer the qubit count of an empty operator list")
        n = len(data[0]["pauli"])
        return cls(n, {t["pauli"]: complex(t["re"], t["im"]) for t in data})


def commutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b - b @ a


def anticommutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b + b @ a


_SPINS = {"up": 0, "down": 1, "u": 0, "d": 1, "↑": 0, "↓": 1, 0: 0, 1: 1}


def spin_index(mu: str | int) -> int:
    try:
        return _SPINS[mu]
    except KeyError:
        raise ValueError(f"spin must be 'up' or 'down', got {mu!r}") from None


def qubit_of(i: int, mu: str | int) -> int:
    """Qubit carrying orbital ``i`` (1-based) with spin ``mu`` in the interleaved layout."""
    return 2 * (i - 1) + spin_index(mu)


@lru_cache(maxsize=None)
def _jw_cached(q: int, dagger: bool, n: int) -> SparseOperator:
    prefix = "Z" * q
    suffix = "I" * (n - q - 1)
    s = -0.5j if dagger else 0.5j
    return SparseOperator(n, {prefix + "X" + suffix: 0.5, prefix + "Y" + suffix: s})


def jw_mode(q: int, dagger: bool, n: int) -> SparseOperator:
    """Jordan-Wigner image of mode ``q`` (0-based) among ``n``."""
    if not 0 <= q < n:
        raise ValueError(f"mode {q} out of range for {n} qubits")
    return _jw_cached(q, bool(dagger), n)


def jw_op(i: int, mu: str | int, dagger: bool, d: int) -> SparseOperator:
    """Creation (``dagger=True``) or annihilation operator of orbital ``i`` and spin ``mu``."""
    if not 1 <= i <= d:
        raise ValueError(f"orbital {i} out of range 1..{d}")
    return jw_mode(qubit_of(i, mu), dagger, 2 * d)


@lru_cache(maxsize=None)
def ladder_E(i: int, j: int, d: int) -> SparseOperator:
    """Spin-summed ``E_ij = sum_mu a+_{i mu} a_{j mu}``."""
    return reduce(
        lambda acc, mu: acc + jw_op(i, mu, True, d) @ jw_op(j, mu, False, d),
        ("up", "down"),
        SparseOperator.zero(2 * d),
    )


@lru_cache(maxsize=None)
def _espin(mu: int, nu: int, d: int) -> SparseOperator:
    out = SparseOperator.zero(2 * d)
    for i in range(1, d + 1):
        out = out + jw_op(i, mu, True, d) @ jw_op(i, nu, False, d)
    return out


def ladder_Espin(mu: str | int, nu: str | int, d: int) -> SparseOperator:
    """Orbital-summed ``E_{mu nu} = sum_i a+_{i mu} a_{i nu}``."""
    return _espin(spin_index(mu), spin_index(nu), d)


@lru_cache(maxsize=None)
def observables(d: int) -> tuple[SparseOperator, SparseOperator, SparseOperator]:
    """Particle number, spin projection and total spin squared."""
    n_op = reduce(lambda acc, i: acc + ladder_E(i, i, d), range(1, d + 1), SparseOperator.zero(2 * d))
    m_op = 0.5 * (ladder_Espin("up", "up", d) - ladder_Espin("down", "down", d))
    s2 = m_op @ (m_op + 1.0) + ladder_Espin("down", "up", d) @ ladder_Espin("up", "down", d)
    return n_op, m_op, s2


def spin_components(d: int) -> tuple[SparseOperator, SparseOperator, SparseOperator]:
    """Total ``(S_x, S_y, S_z)`` built from the orbital-summed spin ladders."""
    ud = ladder_Espin("up", "down", d)
    du = ladder_Espin("down", "up", d)
    sx = 0.5 * (ud + du)
    sy = 0.5j * (du - ud)
    sz = observables(d)[1]
    return sx, sy, sz


def hubbard(d: int, t: float, U: float, periodic: bool = False) -> SparseOperator:
    """Fermi-Hubbard chain written with spin-summed ladder operators."""
    if d < 2:
        raise ValueError("the Hubbard chain needs d >= 2")
    bonds = [(i, i + 1) for i in range(1, d)]
    if periodic and d > 2:
        bonds.append((d, 1))
    h = SparseOperator.zero(2 * d)
    for i, j in bonds:
        h = h - t * (ladder_E(i, j, d) + ladder_E(j, i, d))
    for i in range(1, d + 1):
        e = ladder_E(i, i, d)
        h = h + (U / 2) * (e @ e - e)
    return h


def spinfree_hamiltonian(d: int, h: np.ndarray, v: np.ndarray | None = None) -> SparseOperator:
    """``sum h_ij E_ij + 1/2 sum v_{ij,kl} (E_ik E_jl - delta_jk E_il)``.

    ``v[i, j, k, l]`` holds ``v_{ij,kl}`` with 0-based indices.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (d, d):
        raise ValueError(f"h must be {d}x{d}")
    out = SparseOperator.zero(2 * d)
    for i in range(d):
        for j in range(d):
            if abs(h[i, j]) > PRUNE:
                out = out + h[i, j] * ladder_E(i + 1, j + 1, d)
    if v is not None:
        v = np.asarray(v, dtype=complex)
        if v.shape != (d, d, d, d):
            raise ValueError(f"v must have shape {(d, d, d, d)}")
        # group by (i, k): 1/2 E_ik (sum_{jl} v_ijkl E_jl)
        for i in range(d):
            for k in range(d):
                inner = SparseOperator.zero(2 * d)
                for j in range(d):
                    for l in range(d):
                        if abs(v[i, j, k, l]) > PRUNE:
                            inner = inner + v[i, j, k, l] * ladder_E(j + 1, l + 1, d)
                if len(inner):
                    out = out + 0.5 * (ladder_E(i + 1, k + 1, d) @ inner)
        for i in range(d):
            for l in range(d):
                c = sum(v[i, j, j, l] for j in range(d))
                if abs(c) > PRUNE:
                    out = out - 0.5 * c * ladder_E(i + 1, l + 1, d)
    res = out.hermiticity_residual()
    if res > 1e-10:
        raise NonHermitianInput(f"Hamiltonian is not Hermitian (residual {res:.3e})")
    return out


def random_spinfree_coefficients(d: int, rng: np.random.Generator, two_body: bool = True):
    """Random ``(h, v)`` with the symmetries that make the Hamiltonian Hermitian."""
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = (a + a.conj().T) / 2
    if not two_body:
        return h, None
    v = rng.normal(size=(d,) * 4) + 1j * rng.normal(size=(d,) * 4)
    v = (v + v.transpose(1, 0, 3, 2)) / 2  # v_ijkl = v_jilk
    v = (v + v.transpose(2, 3, 0, 1).conj()) / 2  # v_ijkl = conj(v_klij)
    return h, v


# ---------------------------------------------------------------- u(2) and u(d)


def wv_gate(alpha_x: float, alpha_y: float, alpha_z: float, alpha_N: float) -> np.ndarray:
    """One-orbital factor of ``exp(i H_u2)`` on the basis ``|00>, |01>, |10>, |11>``.

    ``H_u2 = ax Sx + ay Sy + az Sz + (aN / 2) N``. V rotates the singly occupied
    block; W carries the number phase.
    """
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    # block basis (|01>, |10>): Sx = sx/2, Sy = -sy/2, Sz = -sz/2
    block = scipy.linalg.expm(0.5j * (alpha_x * sx - alpha_y * sy - alpha_z * sz))
    v = np.eye(4, dtype=complex)
    v[1:3, 1:3] = block
    w = np.diag([1.0, np.exp(0.5j * alpha_N), np.exp(0.5j * alpha_N), np.exp(1j * alpha_N)])
    return w @ v


def matchgate_residual(g: np.ndarray) -> float:
    """``|det A - det B|`` for the even block A = {00, 11} and odd block B = {01, 10}."""
    g = np.asarray(g)
    even = [0, 3]
    odd = [1, 2]
    leak = np.abs(g[np.ix_(even, odd)]).max() + np.abs(g[np.ix_(odd, even)]).max()
    a = g[np.ix_(even, even)]
    b = g[np.ix_(odd, odd)]
    return float(abs(np.linalg.det(a) - np.linalg.det(b)) + leak)


def u2_hamiltonian(d: int, alphas: Sequence[float]) -> SparseOperator:
    ax, ay, az, an = alphas
    sx, sy, sz = spin_components(d)
    n_op = observables(d)[0]
    return ax * sx + ay * sy + az * sz + (an / 2) * n_op


def u2_evolution(d: int, alphas: Sequence[float]) -> np.ndarray:
    """``(WV)^{(x) d}`` as a dense ``4^d`` matrix."""
    g = wv_gate(*alphas)
    return reduce(np.kron, [g] * d)


def ud_hamiltonian(d: int, beta: np.ndarray) -> SparseOperator:
    """Real-coefficient u(d) Hamiltonian in the Hermitian basis F.

    ``beta[i, i]`` multiplies ``F_ii = E_ii``; for ``i < j``, ``beta[i, j]``
    multiplies ``F_ij = (E_ij + E_ji)/2`` and ``beta[j, i]`` multiplies
    ``F^ij = i(E_ij - E_ji)/2``.
    """
    beta = np.asarray(beta, dtype=float)
    out = SparseOperator.zero(2 * d)
    for i in range(d):
        out = out + beta[i, i] * ladder_E(i + 1, i + 1, d)
        for j in range(i + 1, d):
            eij = ladder_E(i + 1, j + 1, d)
            eji = ladder_E(j + 1, i + 1, d)
            out = out + (beta[i, j] / 2) * (eij + eji) + (0.5j * beta[j, i]) * (eij - eji)
    return out


_FSWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]], dtype=complex)


def fswap_sequence(d: int) -> list[int]:
    """Left positions of the adjacent fSWAPs that take interleaved order to all-up then all-down."""
    order = [(spin, i) for i in range(d) for spin in (0, 1)]
    swaps = []
    changed = True
    while changed:
        changed = False
        for p in range(2 * d - 1):
            if order[p] > order[p + 1]:
                order[p], order[p + 1] = order[p + 1], order[p]
                swaps.append(p)
                changed = True
    return swaps


def fswap_reorder(d: int) -> np.ndarray:
    """Dense ``sigma``: product of ``d(d-1)/2`` adjacent fSWAPs."""
    n = 2 * d
    sigma = np.eye(1 << n, dtype=complex)
    for p in fswap_sequence(d):
        gate = np.kron(np.kron(np.eye(1 << p), _FSWAP), np.eye(1 << (n - p - 2)))
        sigma = gate @ sigma
    return sigma


def operator_schmidt_residual(u: np.ndarray, n_left: int, n_right: int) -> float:
    """Relative weight outside the leading operator-Schmidt term across a qubit cut."""
    dl, dr = 1 << n_left, 1 << n_right
    t = u.reshape(dl, dr, dl, dr).transpose(0, 2, 1, 3).reshape(dl * dl, dr * dr)
    s = np.linalg.svd(t, compute_uv=False)
    total = float(np.sum(s**2))
    return float(np.sqrt(np.sum(s[1:] ** 2) / total))


def ud_factor_check(d: int, beta: np.ndarray) -> float:
    """Operator-Schmidt residual of ``sigma exp(i H_ud) sigma^dagger`` across the up/down cut."""
    if d < 2:
        raise ValueError("d must be at least 2")
    h = ud_hamiltonian(d, beta).to_matrix()
    u = scipy.linalg.expm(1j * h)
    sigma = fswap_reorder(d)
    return operator_schmidt_residual(sigma @ u @ sigma.conj().T, d, d)


def dense(op: SparseOperator | np.ndarray) -> np.ndarray:
    return op.to_matrix() if isinstance(op, SparseOperator) else np.asarray(op)


def max_abs(mat: np.ndarray) -> float:
    return float(np.abs(mat).max()) if mat.size else 0.0


def expectation(op: SparseOperator, vec: np.ndarray) -> complex:
    vec = np.asarray(vec, dtype=complex)
    return complex(np.vdot(vec, op.apply(vec)))


__all__ = [
    "PauliString",
    "SparseOperator",
    "commutator",
    "anticommutator",
    "jw_op",
    "jw_mode",
    "ladder_E",
    "ladder_Espin",
    "observables",
    "spin_components",
    "hubbard",
    "spinfree_hamiltonian",
    "random_spinfree_coefficients",
    "wv_gate",
    "matchgate_residual",
    "u2_hamiltonian",
    "u2_evolution",
    "ud_hamiltonian",
    "fswap_sequence",
    "fswap_reorder",
    "operator_schmidt_residual",
    "ud_factor_check",
]
