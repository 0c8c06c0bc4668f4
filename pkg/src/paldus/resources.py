"""Closed-form Toffoli and qubit counts for the fault-tolerant transform.

Every formula is evaluated with ceiling logarithms. ``k`` is the number of
select-swap registers and must be a power of two wherever it enters.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from math import ceil, log2

from .errors import InvalidK, ValidationError


class Strategy(str, enum.Enum):
    UnaryIteration = "UnaryIteration"
    CleanSelectSwap = "CleanSelectSwap"
    DirtySelectSwap = "DirtySelectSwap"
    MultiIndexData = "MultiIndexData"

    @classmethod
    def parse(cls, name: "str | Strategy") -> "Strategy":
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for s in cls:
            if s.value.lower() == key or s.name.lower().startswith(key):
                return s
        raise ValidationError(f"unknown strategy {name!r}; choose from {[s.value for s in cls]}")


@dataclass(frozen=True)
class CostEstimate:
    toffoli: int
    cleanQubits: int
    dirtyQubits: int
    strategy: Strategy
    tGates: int | None = None

    def __post_init__(self) -> None:
        if self.tGates is None:
            object.__setattr__(self, "tGates", 4 * self.toffoli)
        for name in ("toffoli", "cleanQubits", "dirtyQubits", "tGates"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be nonnegative")

    def to_json(self) -> dict:
        out = asdict(self)
        out["strategy"] = self.strategy.value
        return out


def clog2(x: int | float) -> int:
    """``ceil(log2(x))`` for ``x >= 1``, exact for integers."""
    if x < 1:
        raise ValidationError("log of a value below 1")
    if isinstance(x, int):
        return (x - 1).bit_length()
    return ceil(log2(x))


def cdiv(a: int, b: int) -> int:
    return -(-a // b)


def n_elements(d: int) -> int:
    """``I``: every (S, M) pair the multiplexer loops over."""
    return 8 * d * d + 6 * d + 1


def n_allowed(d: int) -> int:
    """``L``: the (S, M) pairs that actually occur."""
    return (d * d + 3 * d + 2) // 2


def q_from_epsilon(epsilon: float) -> int:
    if not 0 < epsilon < 1:
        raise ValidationError("epsilon must lie in (0, 1)")
    return ceil(log2(1 / epsilon))


def _check(q: int, k: int, needs_k: bool) -> None:
    if q < 1:
        raise ValidationError("q must be at least 1")
    if needs_k and (k < 1 or k & (k - 1)):
        raise InvalidK(f"k={k} is not a power of 2")


def givens_rotation_cost(d: int, q: int, k: int, strategy: Strategy | str) -> CostEstimate:
    """One multiplexed controlled Givens step over ``d`` orbitals."""
    st = Strategy.parse(strategy)
    if d < 1:
        raise ValidationError("d must be at least 1")
    _check(q, k, st is not Strategy.UnaryIteration)
    i, l = n_elements(d), n_allowed(d)
    if st is Strategy.UnaryIteration:
        return CostEstimate(2 * i + 3 * q, 2 * clog2(i) + 2 * q, 0, st)
    ik = cdiv(i, k)
    if st is Strategy.CleanSelectSwap:
        return CostEstimate(2 * ik + q * (k - 1) + k + 3 * q, clog2(i) + clog2(ik) + k * (q + 2) + 1, 0, st)
    if st is Strategy.DirtySelectSwap:
        return CostEstimate(2 * ik + 4 * q * (k - 1) + 4 * k + 3 * q, clog2(i) + clog2(ik) + 3 * q + 1, (k - 1) * q, st)
    tof = 2 * (2 * clog2(l) + 2 * cdiv(l, k) + 4 * q * (k - 1) + 4 * (d + 2)) + 3 * q
    clean = 2 * clog2(2 * d + 1) + 3 * clog2(l) + 3 * q + 1
    return CostEstimate(tof, clean, (k - 1) * q, st)


def data_lookup_cost(I: int, q: int, k: int, strategy: Strategy | str, phase: str = "compute") -> CostEstimate:
    """Data lookup over ``I`` items of ``q`` bits. Uncompute rows reuse the compute qubit counts."""
    st = Strategy.parse(strategy)
    if phase not in ("compute", "uncompute"):
        raise ValidationError("phase is 'compute' or 'uncompute'")
    if I < 1:
        raise ValidationError("I must be at least 1")
    if st is Strategy.MultiIndexData:
        raise ValidationError("the data lookup table has no multi-index row; see double_index_cost")
    _check(q, k, st is not Strategy.UnaryIteration)
    if st is Strategy.UnaryIteration:
        return CostEstimate(I, 2 * clog2(I) + q - 1, 0, st)
    ik = cdiv(I, k)
    if st is Strategy.CleanSelectSwap:
        tof = ik + q * (k - 1) if phase == "compute" else ik + k
        return CostEstimate(tof, clog2(I) + clog2(ik) + k * q - 1, 0, st)
    tof = 2 * ik + 4 * q * (k - 1) if phase == "compute" else 2 * ik + 4 * k
    return CostEstimate(tof, clog2(I) + clog2(ik) + q - 1, (k - 1) * q, st)


def rotation_lookup_cost(I: int, q: int, k: int, strategy: Strategy | str) -> CostEstimate:
    """Data-lookup rotations over ``I`` angles."""
    st = Strategy.parse(strategy)
    if I < 1:
        raise ValidationError("I must be at least 1")
    if st is Strategy.MultiIndexData:
        raise ValidationError("the rotation table has no multi-index row")
    _check(q, k, st is not Strategy.UnaryIteration)
    if st is Strategy.UnaryIteration:
        return CostEstimate(2 * I + 2 * q, 2 * clog2(I) + 2 * q, 0, st)
    ik = cdiv(I, k)
    if st is Strategy.CleanSelectSwap:
        return CostEstimate(2 * ik + q * (k - 1) + k + 2 * q, 2 * clog2(I) + clog2(ik) + (k + 2) * q, 0, st)
    return CostEstimate(2 * ik + 4 * q * (k - 1) + 4 * k + 4 * q, 2 * clog2(I) + clog2(ik) + 3 * q, (k - 1) * q, st)


def double_index_cost(I: int, L: int, q: int, k_c: int, k_d: int, unary_first: bool = False) -> int:
    """Toffoli total of the two-index lookup: clean select-swap first index, or unary when ``unary_first``."""
    _check(q, k_d, True)
    if not unary_first:
        _check(q, k_c, True)
    lg = clog2(L)
    head = 2 * lg + 2 * cdiv(L, k_d) + 4 * q * (k_d - 1)
    if unary_first:
        return head + 2 * I
    return head + 2 * cdiv(I, k_c) + lg * (k_c - 1) + k_c


@dataclass(frozen=True)
class IncrementerCost:
    toffoli: int
    conditionallyCleanQubits: int
    per_register: dict

    @property
    def tGates(self) -> int:
        return 4 * self.toffoli


def incrementer_cost(d: int) -> IncrementerCost:
    """N and S registers of ``2d+1`` values plus an M register of ``4d+1`` values."""
    if d < 1:
        raise ValidationError("d must be at least 1")
    small = 6 * (clog2(2 * d + 1) + 1)
    big = 6 * (clog2(4 * d + 1) + 1)
    cc = clog2(clog2(4 * d + 1) + 1)
    return IncrementerCost(2 * small + big, cc, {"N": small, "S": small, "M": big})


def total_paldus_cost(dMax: int, q: int, k: int, strategy: Strategy | str) -> CostEstimate:
    """Givens steps summed over ``d = 1..dMax``; each step also pays the incrementers sized for ``dMax``."""
    st = Strategy.parse(strategy)
    if dMax < 1:
        raise ValidationError("dMax must be at least 1")
    c_inc = incrementer_cost(dMax).toffoli
    tof = sum(givens_rotation_cost(d, q, k, st).toffoli + c_inc for d in range(1, dMax + 1))
    peak = givens_rotation_cost(dMax, q, k, st)
    return CostEstimate(tof, peak.cleanQubits, peak.dirtyQubits, st)


def phase_gradient_cost(q: int, epsilon: float) -> int:
    """One-off phase-gradient state estimate ``q * ceil(log2(1/eps))`` T gates; kept out of the totals."""
    return q * q_from_epsilon(epsilon)


def crossover(q: int, k: int, d_limit: int = 256) -> int | None:
    """Smallest ``dMax`` from which MultiIndexData stays cheaper than UnaryIteration up to ``d_limit``."""
    best = None
    for d in range(d_limit, 0, -1):
        multi = total_paldus_cost(d, q, k, Strategy.MultiIndexData).toffoli
        unary = total_paldus_cost(d, q, 1, Strategy.UnaryIteration).toffoli
        if multi < unary:
            best = d
        else:
            break
    return best


def comparison(d: int, q: int, k: int) -> list[dict]:
    """Per-step and total costs for every strategy at one ``(d, q, k)``."""
    rows = []
    for st in Strategy:
        step = givens_rotation_cost(d, q, k, st)
        tot = total_paldus_cost(d, q, k, st)
        rows.append(
            {
                "strategy": st.value,
                "d": d,
                "q": q,
                "k": k,
                "givensToffoli": step.toffoli,
                "totalToffoli": tot.toffoli,
                "totalT": tot.tGates,
                "cleanQubits": tot.cleanQubits,
                "dirtyQubits": tot.dirtyQubits,
            }
        )
    return rows
