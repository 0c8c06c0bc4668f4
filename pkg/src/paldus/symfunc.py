"""Schur polynomials and numeric checks of the identities behind Paldus duality.

Everything is evaluated at floating-point sample points. SSYT enumeration is
exponential, so keep partitions small (|lambda| <= 12, at most 6 variables).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateVariables


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, p: "Partition | Iterable[int]") -> "Partition":
        return p if isinstance(p, Partition) else cls(tuple(p))

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i] if i < len(self.parts) else 0

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self.parts) > n:
            raise ValueError(f"{self} has more than {n} parts")
        return self.parts + (0,) * (n - len(self.parts))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Tableau:
    shape: Partition
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if tuple(len(r) for r in self.entries) != self.shape.parts:
            raise ValueError("row lengths do not match the shape")
        for row in self.entries:
            if any(row[j] > row[j + 1] for j in range(len(row) - 1)):
                raise ValueError("rows must weakly increase")
        for i in range(1, len(self.entries)):
            for j, v in enumerate(self.entries[i]):
                if self.entries[i - 1][j] >= v:
                    raise ValueError("columns must strictly increase")

    def content(self, n: int) -> tuple[int, ...]:
        counts = [0] * n
        for row in self.entries:
            for v in row:
                counts[v - 1] += 1
        return tuple(counts)


def _rows(length: int, above: tuple[int, ...] | None, n: int) -> Iterable[tuple[int, ...]]:
    """Weakly increasing rows of given length, strictly below ``above`` column-wise."""

    def rec(j: int, lo: int, acc: list[int]):
        if j == length:
            yield tuple(acc)
            return
        low = max(lo, above[j] + 1 if above is not None else 1)
        for v in range(low, n + 1):
            acc.append(v)
            yield from rec(j + 1, v, acc)
            acc.pop()

    yield from rec(0, 1, [])


def ssyt(shape: Partition | Iterable[int], n: int) -> list[Tableau]:
    """All semistandard Young tableaux of ``shape`` with entries in ``1..n``."""
    lam = Partition.of(shape)
    return [Tableau(lam, rows) for rows in _ssyt_rows(lam.parts, n)]


@lru_cache(maxsize=None)
def _ssyt_rows(parts: tuple[int, ...], n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    out: list[tuple[tuple[int, ...], ...]] = []

    def rec(i: int, acc: list[tuple[int, ...]]):
        if i == len(parts):
            out.append(tuple(acc))
            return
        for row in _rows(parts[i], acc[-1] if acc else None, n):
            acc.append(row)
            rec(i + 1, acc)
            acc.pop()

    rec(0, [])
    return tuple(out)


@lru_cache(maxsize=None)
def _content_matrix(parts: tuple[int, ...], n: int) -> np.ndarray:
    lam = Partition(parts)
    rows = _ssyt_rows(parts, n)
    if not rows:
        return np.zeros((0, n), dtype=np.int64)
    return np.array([Tableau(lam, r).content(n) for r in rows], dtype=np.int64)


def schur_ssyt(lam: Partition | Iterable[int], x: Sequence[float]) -> float:
    """Schur polynomial as the sum of ``x^T`` over semistandard tableaux."""
    lam = Partition.of(lam)
    xv = np.asarray(x, dtype=float)
    if len(lam) > len(xv):
        return 0.0
    mat = _content_matrix(lam.parts, len(xv))
    if mat.shape[0] == 0:
        return 0.0
    return float(np.prod(xv[None, :] ** mat, axis=1).sum())


def schur_bialternant(lam: Partition | Iterable[int], x: Sequence[float]) -> float:
    """Schur polynomial as ``a_{lambda+delta} / a_delta``."""
    lam = Partition.of(lam)
    xv = np.asarray(x, dtype=float)
    n = len(xv)
    if n == 0:
        return 1.0 if lam.size == 0 else 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if abs(xv[i] - xv[j]) < 1e-12:
                raise DegenerateVariables(f"x[{i}] and x[{j}] coincide")
    if len(lam) > n:
        return 0.0
    lp = lam.padded(n)
    num = np.array([[xi ** (lp[j] + n - 1 - j) for j in range(n)] for xi in xv])
    den = np.array([[xi ** (n - 1 - j) for j in range(n)] for xi in xv])
    return float(np.linalg.det(num) / np.linalg.det(den))


def elementary(k: int, x: Sequence[float]) -> float:
    """Elementary symmetric polynomial ``e_k``."""
    coeffs = np.zeros(len(x) + 1)
    coeffs[0] = 1.0
    for xi in x:
        coeffs[1:] = coeffs[1:] + xi * coeffs[:-1]
    return float(coeffs[k]) if 0 <= k <= len(x) else 0.0


def partitions_in_box(rows: int, cols: int) -> list[Partition]:
    """Partitions fitting in a ``rows x cols`` rectangle."""
    out = []

    def rec(i: int, cap: int, acc: list[int]):
        if i == rows:
            out.append(Partition(tuple(acc)))
            return
        for p in range(cap, -1, -1):
            acc.append(p)
            rec(i + 1, p, acc)
            acc.pop()

    rec(0, cols, [])
    return out


def dual_cauchy_sides(m: int, n: int, x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Both sides of ``prod (1 + x_i y_j) = sum_lambda s_{lambda'}(x) s_lambda(y)``."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if len(xv) != m or len(yv) != n:
        raise ValueError("x must have m entries and y must have n entries")
    lhs = float(np.prod(1.0 + np.outer(xv, yv)))
    rhs = 0.0
    for lam in partitions_in_box(n, m):
        rhs += schur_ssyt(lam.conjugate(), xv) * schur_ssyt(lam, yv)
    return lhs, rhs


def check_dual_cauchy(m: int, n: int, x: Sequence[float], y: Sequence[float]) -> float:
    """Absolute residual of the dual Cauchy identity."""
    lhs, rhs = dual_cauchy_sides(m, n, x, y)
    return abs(lhs - rhs)


def dual_pieri_expand(lam: Partition | Iterable[int], k: int) -> list[Partition]:
    """Shapes ``mu`` such that ``mu / lambda`` is a vertical strip of ``k`` boxes."""
    lam = Partition.of(lam)
    if k < 0:
        raise ValueError("k must be nonnegative")
    rows = len(lam) + k
    out = set()
    for chosen in combinations(range(rows), k):
        mu = [lam[i] for i in range(rows)]
        for i in chosen:
            mu[i] += 1
        if all(mu[i] >= mu[i + 1] for i in range(rows - 1)):
            out.add(Partition(tuple(mu)))
    return sorted(out, reverse=True)


def branching_interleave(lam: Partition | Iterable[int], maxRows: int | None = None) -> list[Partition]:
    """Partitions ``mu`` with ``lambda_1 >= mu_1 >= lambda_2 >= ... >= mu_{n-1} >= lambda_n``.

    ``maxRows`` is the rank ``n`` of the unitary group being restricted; it
    defaults to one more than the number of nonzero parts.
    """
    lam = Partition.of(lam)
    n = len(lam) + 1 if maxRows is None else maxRows
    lp = lam.padded(n)
    ranges = [range(lp[i + 1], lp[i] + 1) for i in range(n - 1)]
    return sorted({Partition(tuple(mu)) for mu in product(*ranges)}, reverse=True)


def weyl_dimension(lam: Partition | Iterable[int], n: int) -> int:
    """Dimension of the U(n) irrep with highest weight ``lambda``."""
    lam = Partition.of(lam)
    if len(lam) > n:
        return 0
    lp = lam.padded(n)
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= lp[i] - lp[j] + j - i
            den *= j - i
    return num // den


@dataclass
class IdentityCheck:
    name: str
    trials: int
    max_rel: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel <= self.tol


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _random_partition(rng: np.random.Generator, rows: int, max_part: int) -> Partition:
    return Partition(tuple(sorted(rng.integers(0, max_part + 1, size=rows).tolist(), reverse=True)))


def identity_suite(seed: int = 0, trials: int = 100, tol: float = 1e-8) -> list[IdentityCheck]:
    """Dual Cauchy, dual Pieri and interlacing branching at random sample points."""
    rng = np.random.default_rng(seed)
    out = []
    for m, n in ((2, 2), (3, 2), (4, 2)):
        worst = 0.0
        for _ in range(trials):
            x = rng.uniform(0.1, 1.5, m)
            y = rng.uniform(0.1, 1.5, n)
            worst = max(worst, _rel(*dual_cauchy_sides(m, n, x, y)))
        out.append(IdentityCheck(f"dual-cauchy-{m}x{n}", trials, worst, tol))

    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 5))
        lam = _random_partition(rng, n, 3)
        k = int(rng.integers(1, n + 1))
        x = rng.uniform(0.1, 1.5, n)
        lhs = schur_ssyt(lam, x) * elementary(k, x)
        rhs = sum(schur_ssyt(mu, x) for mu in dual_pieri_expand(lam, k))
        worst = max(worst, _rel(lhs, rhs))
    out.append(IdentityCheck("dual-pieri", trials, worst, tol))

    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 5))
        lam = _random_partition(rng, n, 3)
        x = rng.uniform(0.1, 1.5, n - 1)
        lhs = schur_ssyt(lam, list(x) + [1.0])
        rhs = sum(schur_ssyt(mu, x) for mu in branching_interleave(lam, maxRows=n))
        worst = max(worst, _rel(lhs, rhs))
    out.append(IdentityCheck("branching", trials, worst, tol))
    return out
