"""Step vectors, (a, b, c) triples, Shavitt-graph branching and irrep dimensions.

A step vector on ``d`` orbitals is a string of ``2d`` bits read in pairs. Each
pair is one step: ``00`` (empty), ``10`` (spin raised), ``01`` (spin lowered),
``11`` (doubly occupied). Spins are stored doubled (``twoS``, ``twoM``) so that
everything here stays in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import (
    IdentityViolation,
    InvalidBranch,
    InvalidLabel,
    InvalidStepVector,
    OddLength,
)

# step digit -> bit pair, and back
STEP_BITS: dict[int, tuple[int, int]] = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}
BITS_STEP: dict[tuple[int, int], int] = {v: k for k, v in STEP_BITS.items()}

# digits in the order their bit pairs sort lexicographically (00 < 01 < 10 < 11)
_LEX_STEPS = (0, 2, 1, 3)


def _parse_bits(bits: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(bits, str):
        cleaned = bits.replace(",", "").replace(" ", "")
        if any(ch not in "01" for ch in cleaned):
            raise InvalidStepVector(f"not a bitstring: {bits!r}")
        return tuple(int(ch) for ch in cleaned)
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise InvalidStepVector(f"bits must be 0 or 1: {bits!r}")
    return out


def validate_step_vector(bits: str | Sequence[int]) -> bool:
    """True iff every prefix of whole steps has a nonnegative partial ``2S``."""
    b = _parse_bits(bits)
    if len(b) % 2:
        raise OddLength(f"step vector needs an even number of bits, got {len(b)}")
    two_s = 0
    for k in range(0, len(b), 2):
        two_s += b[k] - b[k + 1]
        if two_s < 0:
            return False
    return True


@dataclass(frozen=True, order=True)
class StepVector:
    """A valid step vector, orbital 1 leftmost."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = _parse_bits(self.bits)
        object.__setattr__(self, "bits", bits)
        if not validate_step_vector(bits):
            raise InvalidStepVector(f"partial spin goes negative: {self}")

    @classmethod
    def parse(cls, text: str | Sequence[int] | "StepVector") -> "StepVector":
        if isinstance(text, StepVector):
            return text
        return cls(_parse_bits(text))

    @classmethod
    def from_steps(cls, steps: Iterable[int]) -> "StepVector":
        bits: list[int] = []
        for s in steps:
            if s not in STEP_BITS:
                raise InvalidBranch(f"step digit must be 0..3, got {s}")
            bits.extend(STEP_BITS[s])
        return cls(tuple(bits))

    @property
    def d(self) -> int:
        return len(self.bits) // 2

    @property
    def steps(self) -> tuple[int, ...]:
        return tuple(BITS_STEP[self.bits[k], self.bits[k + 1]] for k in range(0, len(self.bits), 2))

    def pair(self, i: int) -> tuple[int, int]:
        """Bit pair of orbital ``i`` (1-based)."""
        return self.bits[2 * i - 2], self.bits[2 * i - 1]

    @property
    def n_particles(self) -> int:
        return sum(self.bits)

    @property
    def two_s(self) -> int:
        return sum(self.bits[0::2]) - sum(self.bits[1::2])

    def bitstring(self) -> str:
        return "".join(map(str, self.bits))

    def __str__(self) -> str:
        return ",".join(f"{self.bits[k]}{self.bits[k + 1]}" for k in range(0, len(self.bits), 2))


@dataclass(frozen=True)
class AbcTriple:
    """Counts of rows of length 2 (a), 1 (b) and 0 (c) in a two-column diagram."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c) < 0:
            raise InvalidBranch(f"negative field in {self}")

    @property
    def level(self) -> int:
        return self.a + self.b + self.c

    @property
    def n_particles(self) -> int:
        return 2 * self.a + self.b

    @property
    def two_s(self) -> int:
        return self.b


@dataclass(frozen=True)
class ShavittNode:
    level: int
    triple: AbcTriple

    def __post_init__(self) -> None:
        if self.triple.level != self.level:
            raise InvalidBranch(f"triple {self.triple} does not sit at level {self.level}")


@dataclass(frozen=True)
class UgaLabel:
    """Quantum numbers (N, 2S, 2M) together with the step vector they belong to."""

    n_particles: int
    twoS: int
    twoM: int
    step: StepVector

    def __post_init__(self) -> None:
        step = StepVector.parse(self.step) if not isinstance(self.step, StepVector) else self.step
        object.__setattr__(self, "step", step)
        if step.n_particles != self.n_particles:
            raise InvalidLabel(f"N={self.n_particles} but step {step} has weight {step.n_particles}")
        if step.two_s != self.twoS:
            raise InvalidLabel(f"2S={self.twoS} but step {step} gives 2S={step.two_s}")
        if abs(self.twoM) > self.twoS or (self.twoM - self.twoS) % 2:
            raise InvalidLabel(f"2M={self.twoM} not allowed for 2S={self.twoS}")

    @property
    def d(self) -> int:
        return self.step.d

    def __str__(self) -> str:
        return f"|N={self.n_particles}, 2S={self.twoS}, 2M={self.twoM}; {self.step}>"


def apply_step(t: AbcTriple, step: int) -> AbcTriple:
    """Lift a triple by one level along the given step."""
    if step == 0:
        return AbcTriple(t.a, t.b, t.c + 1)
    if step == 1:
        return AbcTriple(t.a, t.b + 1, t.c)
    if step == 2:
        if t.b < 1:
            raise InvalidBranch("step 2 needs b >= 1")
        return AbcTriple(t.a + 1, t.b - 1, t.c + 1)
    if step == 3:
        return AbcTriple(t.a + 1, t.b, t.c)
    raise InvalidBranch(f"step digit must be 0..3, got {step}")


def triple_path(s: StepVector) -> list[AbcTriple]:
    """Triples visited by a step vector, starting from the empty one."""
    path = [AbcTriple(0, 0, 0)]
    for st in s.steps:
        path.append(apply_step(path[-1], st))
    return path


def step_vector_labels(s: StepVector | str) -> tuple[int, int]:
    """Return ``(N, twoS)`` of a step vector."""
    sv = StepVector.parse(s)
    return sv.n_particles, sv.two_s


def shavitt_graph(d: int) -> tuple[list[ShavittNode], list[tuple[ShavittNode, ShavittNode, int]]]:
    """Nodes reachable from the empty triple in ``d`` levels, and the labelled arcs."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    root = ShavittNode(0, AbcTriple(0, 0, 0))
    levels = [[root]]
    arcs: list[tuple[ShavittNode, ShavittNode, int]] = []
    for lev in range(d):
        nxt: dict[AbcTriple, ShavittNode] = {}
        for node in levels[lev]:
            for st in range(4):
                try:
                    t = apply_step(node.triple, st)
                except InvalidBranch:
                    continue
                child = nxt.setdefault(t, ShavittNode(lev + 1, t))
                arcs.append((node, child, st))
        levels.append(sorted(nxt.values(), key=lambda n: (n.triple.a, n.triple.b)))
    return [n for lev in levels for n in lev], arcs


def _walk(d: int, two_s: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
    if len(prefix) == d:
        yield tuple(prefix)
        return
    for st in _LEX_STEPS:
        delta = {0: 0, 1: 1, 2: -1, 3: 0}[st]
        if two_s + delta < 0:
            continue
        prefix.append(st)
        yield from _walk(d, two_s + delta, prefix)
        prefix.pop()


def enumerate_step_vectors(d: int, filter: tuple[int, int] | None = None) -> list[StepVector]:
    """All valid step vectors on ``d`` orbitals in lexicographic bit order.

    ``filter`` is an optional ``(N, twoS)`` pair.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    out = []
    for steps in _walk(d, 0, []):
        sv = StepVector.from_steps(steps)
        if filter is not None and (sv.n_particles, sv.two_s) != tuple(filter):
            continue
        out.append(sv)
    return out


def allowed_sectors(d: int) -> list[tuple[int, int]]:
    """``(N, twoS)`` pairs with nonzero dimension, sorted by N then 2S."""
    if d < 1:
        raise ValueError("d must be at least 1")
    out = []
    for two_s in range(d + 1):
        for n in range(two_s, 2 * d - two_s + 1, 2):
            out.append((n, two_s))
    return sorted(out)


def _on_grid(d: int, two_s: int, n: int) -> bool:
    return 0 <= two_s <= d and two_s <= n <= 2 * d - two_s and (n - two_s) % 2 == 0


def dim_irrep(d: int, twoS: int, N: int) -> int:
    """Dimension of the U(d) irrep labelled by ``(N, S)``; zero off the grid.

    Hook-content form ``(2S+1)/(d+1) C(d+1, N/2-S) C(d+1, N/2+S+1)``.
    """
    if not _on_grid(d, twoS, N):
        return 0
    lo = (N - twoS) // 2
    hi = (N + twoS) // 2 + 1
    num = (twoS + 1) * comb(d + 1, lo) * comb(d + 1, hi)
    q, r = divmod(num, d + 1)
    assert r == 0
    return q


def dim_irrep_weyl(d: int, twoS: int, N: int) -> int:
    """Weyl-dimension form ``(2S+1)/(d+1) C(d+1, N/2-S) C(d+1, d-N/2-S)``."""
    if not _on_grid(d, twoS, N):
        return 0
    lo = (N - twoS) // 2
    num = (twoS + 1) * comb(d + 1, lo) * comb(d + 1, d - (N + twoS) // 2)
    q, r = divmod(num, d + 1)
    assert r == 0
    return q


def dim_irrep_printed_hook(d: int, twoS: int, N: int) -> float:
    """The hook-content expression with denominator ``N+1``.

    Kept only to document where it departs from enumeration; it agrees with
    :func:`dim_irrep` exactly when ``N == d``.
    """
    if not _on_grid(d, twoS, N):
        return 0.0
    lo = (N - twoS) // 2
    hi = (N + twoS) // 2 + 1
    return (twoS + 1) * comb(d + 1, lo) * comb(d + 1, hi) / (N + 1)


def dim_spin(d: int, twoS: int) -> int:
    """Number of step vectors with a given ``2S`` (any N), by the telescoping formula."""
    if twoS < 0 or twoS > d:
        return 0
    k = d - twoS
    return comb(2 * d + 1, k) - (comb(2 * d + 1, k - 1) if k >= 1 else 0)


@dataclass
class DimensionReport:
    d: int
    table: list[tuple[int, int, int, int]]  # (N, 2S, dim, 2S+1)
    total_step_vectors: int
    weighted_total: int
    enumerated: bool
    weyl_agrees: bool
    printed_hook_mismatches: list[tuple[int, int, float, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.total_step_vectors == comb(2 * self.d + 1, self.d) and self.weighted_total == 4**self.d


def dimension_identities(d: int, enumerate_up_to: int = 8) -> DimensionReport:
    """Check the counting identities for ``d`` orbitals.

    ``sum_S T_S = C(2d+1, d)`` and ``sum_{S,N} (2S+1) T_{S,N} = 4^d`` are checked from the
    closed form; for ``d <= enumerate_up_to`` every ``T_{S,N}`` is also counted directly.
    """
    table = []
    weyl_ok = True
    mismatches = []
    for n, two_s in allowed_sectors(d):
        dim = dim_irrep(d, two_s, n)
        if dim_irrep_weyl(d, two_s, n) != dim:
            weyl_ok = False
        printed = dim_irrep_printed_hook(d, two_s, n)
        if printed != dim:
            mismatches.append((n, two_s, printed, dim))
        table.append((n, two_s, dim, two_s + 1))

    for two_s in range(d + 1):
        by_n = sum(dim for n, s, dim, _ in table if s == two_s)
        if by_n != dim_spin(d, two_s):
            raise IdentityViolation(f"d={d}, 2S={two_s}: sum over N is {by_n}, expected {dim_spin(d, two_s)}")

    total = sum(row[2] for row in table)
    weighted = sum(row[2] * row[3] for row in table)
    if total != comb(2 * d + 1, d):
        raise IdentityViolation(f"d={d}: sum_S T_S = {total} != C(2d+1, d) = {comb(2 * d + 1, d)}")
    if weighted != 4**d:
        raise IdentityViolation(f"d={d}: weighted sum {weighted} != 4^d")

    enumerated = d <= enumerate_up_to
    if enumerated:
        counts: dict[tuple[int, int], int] = {}
        for sv in enumerate_step_vectors(d):
            key = (sv.n_particles, sv.two_s)
            counts[key] = counts.get(key, 0) + 1
        for n, two_s, dim, _ in table:
            if counts.get((n, two_s), 0) != dim:
                raise IdentityViolation(
                    f"(d, 2S, N)=({d}, {two_s}, {n}): formula {dim}, enumeration {counts.get((n, two_s), 0)}"
                )
        if sum(counts.values()) != total:
            raise IdentityViolation(f"d={d}: enumeration found off-grid sectors")

    return DimensionReport(d, table, total, weighted, enumerated, weyl_ok, mismatches)


def all_labels(d: int) -> list[UgaLabel]:
    """Every UGA label on ``d`` orbitals, ordered by (N asc, 2S asc, 2M desc, step)."""
    out = []
    for n, two_s in allowed_sectors(d):
        steps = enumerate_step_vectors(d, (n, two_s))
        for two_m in range(two_s, -two_s - 1, -2):
            out.extend(UgaLabel(n, two_s, two_m, sv) for sv in steps)
    return out
