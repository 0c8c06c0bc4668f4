"""Dense statevector simulation of the Paldus-transform circuit.

Registers are laid out as ``[N | S | M | d]``. Inside each register the most
significant bit is leftmost, ``2M`` is two's complement, and qubit 0 is the
top bit of a basis index. Before the transform the step register holds the
occupation bits ``x_{1up} x_{1down} ... x_{d down}``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from math import ceil, log2
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .combinatorics import StepVector, UgaLabel, all_labels
from .errors import (
    DomainError,
    IsometryViolation,
    NonUnitaryParam,
    ValidationError,
    WidthMismatch,
)
from .gtstates import build_gt_state, cg_angle

SCHEMA = "paldus-kit/1"
MAX_WIDTH = 26


def _check_simulable(width: int) -> None:
    if width > MAX_WIDTH:
        raise ValidationError(f"width {width} exceeds the simulator limit of {MAX_WIDTH}")


def _clog2(x: int) -> int:
    return max(1, ceil(log2(x))) if x > 1 else 1


# ------------------------------------------------------------------ layout


@dataclass(frozen=True)
class RegisterLayout:
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValidationError("d must be at least 1")

    @property
    def n_N(self) -> int:
        return _clog2(2 * self.d + 1)

    @property
    def n_S(self) -> int:
        return _clog2(self.d + 1)

    @property
    def n_M(self) -> int:
        return _clog2(2 * self.d + 1)

    @property
    def width(self) -> int:
        return self.n_N + self.n_S + self.n_M + 2 * self.d

    @property
    def s_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n_N, self.n_N + self.n_S))

    @property
    def m_qubits(self) -> tuple[int, ...]:
        start = self.n_N + self.n_S
        return tuple(range(start, start + self.n_M))

    @property
    def N_qubits(self) -> tuple[int, ...]:
        return tuple(range(0, self.n_N))

    @property
    def step_qubits(self) -> tuple[int, ...]:
        start = self.n_N + self.n_S + self.n_M
        return tuple(range(start, start + 2 * self.d))

    def pair(self, i: int) -> tuple[int, int]:
        """Qubits holding orbital ``i`` (1-based)."""
        base = self.n_N + self.n_S + self.n_M
        return base + 2 * i - 2, base + 2 * i - 1

    def m_bits(self, two_m: int) -> tuple[int, ...]:
        lo = -(1 << (self.n_M - 1))
        hi = (1 << (self.n_M - 1)) - 1
        if not lo <= two_m <= hi:
            raise DomainError(f"2M={two_m} does not fit in {self.n_M} two's-complement bits")
        v = two_m % (1 << self.n_M)
        return tuple((v >> (self.n_M - 1 - j)) & 1 for j in range(self.n_M))

    def s_bits(self, two_s: int) -> tuple[int, ...]:
        if not 0 <= two_s < (1 << self.n_S):
            raise DomainError(f"2S={two_s} does not fit in {self.n_S} bits")
        return tuple((two_s >> (self.n_S - 1 - j)) & 1 for j in range(self.n_S))

    def encode(self, n: int, two_s: int, two_m: int, bits: Sequence[int] | StepVector | int) -> int:
        if isinstance(bits, StepVector):
            occ = int(bits.bitstring(), 2)
        elif isinstance(bits, (int, np.integer)):
            occ = int(bits)
        else:
            occ = int("".join(map(str, bits)) or "0", 2)
        idx = n
        idx = (idx << self.n_S) | two_s
        idx = (idx << self.n_M) | (two_m % (1 << self.n_M))
        return (idx << (2 * self.d)) | occ

    def encode_label(self, label: UgaLabel) -> int:
        return self.encode(label.n_particles, label.twoS, label.twoM, label.step)

    def decode(self, index: int) -> tuple[int, int, int, str]:
        index = int(index)
        occ = index & ((1 << (2 * self.d)) - 1)
        rest = index >> (2 * self.d)
        m = rest & ((1 << self.n_M) - 1)
        rest >>= self.n_M
        s = rest & ((1 << self.n_S) - 1)
        n = rest >> self.n_S
        if m >= 1 << (self.n_M - 1):
            m -= 1 << self.n_M
        return n, s, m, format(occ, f"0{2 * self.d}b")

    def describe(self) -> str:
        return f"layout=uga d={self.d} nN={self.n_N} nS={self.n_S} nM={self.n_M} width={self.width}"


# ------------------------------------------------------------------ states


@dataclass
class StateVector:
    data: np.ndarray
    layout: RegisterLayout | None = None
    kind: str = "qubits"  # "uga", "occupation" or "qubits"

    def __post_init__(self) -> None:
        self.data = np.ascontiguousarray(self.data, dtype=complex)
        n = int(self.data.size).bit_length() - 1
        if self.data.ndim != 1 or (1 << n) != self.data.size:
            raise WidthMismatch("amplitude count must be a power of two")
        if self.layout is not None:
            self.kind = "uga"
            if self.layout.width != n:
                raise WidthMismatch(f"layout width {self.layout.width} but {n} qubits of data")

    @property
    def n_qubits(self) -> int:
        return int(self.data.size).bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def copy(self) -> "StateVector":
        return StateVector(self.data.copy(), self.layout, self.kind)

    @classmethod
    def occupation(cls, amps: np.ndarray | Mapping[str, complex], d: int | None = None) -> "StateVector":
        if isinstance(amps, Mapping):
            if d is None:
                d = len(next(iter(amps))) // 2
            vec = np.zeros(1 << (2 * d), dtype=complex)
            for bits, a in amps.items():
                vec[int(bits.replace(",", ""), 2)] += a
            amps = vec
        return cls(np.asarray(amps, dtype=complex), None, "occupation")

    @classmethod
    def basis(cls, layout: RegisterLayout, index: int) -> "StateVector":
        _check_simulable(layout.width)
        vec = np.zeros(1 << layout.width, dtype=complex)
        vec[index] = 1
        return cls(vec, layout)

    def embed(self, layout: RegisterLayout) -> "StateVector":
        """Occupation state on ``2d`` qubits -> UGA layout with registers at zero."""
        if self.n_qubits != 2 * layout.d:
            raise WidthMismatch(f"need {2 * layout.d} qubits, have {self.n_qubits}")
        _check_simulable(layout.width)
        vec = np.zeros(1 << layout.width, dtype=complex)
        vec[: self.data.size] = self.data
        return StateVector(vec, layout)

    def restrict(self) -> "StateVector":
        """Inverse of :meth:`embed`; the register part must be zero."""
        if self.layout is None:
            raise ValidationError("state has no register layout")
        size = 1 << (2 * self.layout.d)
        leak = float(np.linalg.norm(self.data[size:]))
        if leak > 1e-9:
            raise ValidationError(f"registers are not clean (leakage {leak:.3e})")
        return StateVector(self.data[:size].copy(), None, "occupation")

    def header(self) -> str:
        if self.layout is not None:
            return f"# {SCHEMA} {self.layout.describe()}"
        if self.kind == "occupation":
            return f"# {SCHEMA} layout=occupation d={self.n_qubits // 2} width={self.n_qubits}"
        return f"# {SCHEMA} layout=qubits width={self.n_qubits}"

    def to_lines(self, tol: float = 1e-15) -> list[str]:
        n = self.n_qubits
        lines = [self.header()]
        for idx in np.flatnonzero(np.abs(self.data) > tol):
            a = self.data[idx]
            lines.append(f"{int(idx):0{n}b} {a.real:.17g} {a.imag:.17g}")
        return lines

    def dumps(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    @classmethod
    def loads(cls, text: str) -> "StateVector":
        layout = None
        kind = "qubits"
        width = None
        entries = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                fields = dict(tok.split("=", 1) for tok in line[1:].split() if "=" in tok)
                kind = fields.get("layout", kind)
                if "width" in fields:
                    width = int(fields["width"])
                if kind == "uga":
                    layout = RegisterLayout(int(fields["d"]))
                    width = layout.width
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValidationError(f"bad state line: {raw!r}")
            entries.append((parts[0], complex(float(parts[1]), float(parts[2]))))
        if width is None:
            if not entries:
                raise ValidationError("empty state file without a width header")
            width = len(entries[0][0])
        vec = np.zeros(1 << width, dtype=complex)
        for bits, a in entries:
            if len(bits) != width:
                raise WidthMismatch(f"bitstring {bits} is not {width} bits wide")
            vec[int(bits, 2)] += a
        return cls(vec, layout, kind)


# ------------------------------------------------------------------ gates

GATE_KINDS = (
    "ControlledIncrement",
    "ControlledDecrement",
    "ControlledGivens",
    "Hadamard",
    "CNOT",
    "GenericUnitary",
)


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    control_values: tuple[int, ...] = ()
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        cv = tuple(int(v) for v in self.control_values) if self.control_values else (1,) * len(self.controls)
        object.__setattr__(self, "control_values", cv)
        if isinstance(self.params, Mapping):
            object.__setattr__(self, "params", tuple(sorted(self.params.items())))
        if len(cv) != len(self.controls):
            raise ValidationError("one control value per control qubit")
        if set(self.targets) & set(self.controls):
            raise ValidationError("targets and controls overlap")
        if len(set(self.targets)) != len(self.targets) or len(set(self.controls)) != len(self.controls):
            raise ValidationError("repeated qubit in gate")
        if self.kind == "ControlledGivens" and len(self.targets) != 2:
            raise ValidationError("Givens rotations act on a qubit pair")
        if self.kind in ("Hadamard", "CNOT") and len(self.targets) != 1:
            raise ValidationError(f"{self.kind} has a single target")

    def param(self, name: str, default=None):
        for k, v in self.params:
            if k == name:
                return v
        return default

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + self.controls

    def inverse(self) -> "Gate":
        if self.kind == "ControlledIncrement":
            return Gate("ControlledDecrement", self.targets, self.controls, self.control_values, self.params)
        if self.kind == "ControlledDecrement":
            return Gate("ControlledIncrement", self.targets, self.controls, self.control_values, self.params)
        if self.kind == "ControlledGivens":
            p = dict(self.params)
            p["adjoint"] = not bool(p.get("adjoint", False))
            return Gate(self.kind, self.targets, self.controls, self.control_values, p)
        if self.kind == "GenericUnitary":
            m = _matrix_param(self)
            return Gate(self.kind, self.targets, self.controls, self.control_values, {"matrix": _pack(m.conj().T)})
        return self

    def to_json(self) -> dict:
        params = {}
        for k, v in self.params:
            params[k] = v
        return {
            "kind": self.kind,
            "targets": list(self.targets),
            "controls": list(self.controls),
            "controlValues": list(self.control_values),
            "params": params,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Gate":
        params = dict(obj.get("params", {}))
        if "matrix" in params:
            params["matrix"] = _pack(_unpack(params["matrix"]))
        return cls(
            obj["kind"],
            tuple(obj["targets"]),
            tuple(obj.get("controls", ())),
            tuple(obj.get("controlValues", ())),
            params,
        )


def _pack(m: np.ndarray) -> tuple:
    m = np.asarray(m, dtype=complex)
    return tuple(tuple((float(z.real), float(z.imag)) for z in row) for row in m)


def _unpack(obj) -> np.ndarray:
    return np.array([[complex(a, b) for a, b in row] for row in obj], dtype=complex)


def _matrix_param(g: Gate) -> np.ndarray:
    return _unpack(g.param("matrix"))


def generic_gate(matrix: np.ndarray, targets: Sequence[int], controls: Sequence[int] = (), values=()) -> Gate:
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (1 << len(targets),) * 2:
        raise ValidationError("matrix size does not match the number of targets")
    if np.abs(m @ m.conj().T - np.eye(m.shape[0])).max() > 1e-10:
        raise NonUnitaryParam("matrix is not unitary")
    return Gate("GenericUnitary", tuple(targets), tuple(controls), tuple(values), {"matrix": _pack(m)})


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


@dataclass
class Circuit:
    width: int
    gates: list[Gate] = field(default_factory=list)
    layout: RegisterLayout | None = None

    def append(self, gate: Gate | Iterable[Gate]) -> "Circuit":
        if isinstance(gate, Gate):
            gate = [gate]
        for g in gate:
            if max(g.qubits, default=-1) >= self.width:
                raise WidthMismatch(f"gate on qubit {max(g.qubits)} exceeds width {self.width}")
            self.gates.append(g)
        return self

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise WidthMismatch("circuits have different widths")
        return Circuit(self.width, self.gates + other.gates, self.layout or other.layout)

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> "Circuit":
        return Circuit(self.width, [g.inverse() for g in reversed(self.gates)], self.layout)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def nontrivial_givens(self) -> int:
        return sum(
            1
            for g in self.gates
            if g.kind == "ControlledGivens" and g.param("twoM") != g.param("twoS") + 1
        )

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "width": self.width, "gates": [g.to_json() for g in self.gates]}
        if self.layout is not None:
            out["layout"] = {"d": self.layout.d, "nN": self.layout.n_N, "nS": self.layout.n_S, "nM": self.layout.n_M}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "Circuit":
        if isinstance(obj, str):
            obj = json.loads(obj)
        layout = RegisterLayout(obj["layout"]["d"]) if obj.get("layout") else None
        return cls(int(obj["width"]), [Gate.from_json(g) for g in obj["gates"]], layout)

    def unitary(self) -> np.ndarray:
        """Dense matrix (columns are images of basis states); only for small widths."""
        if self.width > 12:
            raise ValidationError("dense unitary limited to 12 qubits")
        dim = 1 << self.width
        out = np.zeros((dim, dim), dtype=complex)
        for k in range(dim):
            v = np.zeros(dim, dtype=complex)
            v[k] = 1
            out[:, k] = run(self, v)
        return out


# ------------------------------------------------------------------ simulation


def _ctrl_mask(gate: Gate, width: int) -> tuple[int, int]:
    mask = value = 0
    for q, v in zip(gate.controls, gate.control_values):
        bit = 1 << (width - 1 - q)
        mask |= bit
        if v:
            value |= bit
    return mask, value


def _apply_matrix(data: np.ndarray, width: int, gate: Gate, m: np.ndarray) -> None:
    psi = data.reshape([2] * width)
    sl: list[object] = [slice(None)] * width
    for q, v in zip(gate.controls, gate.control_values):
        sl[q] = v
    sub = psi[tuple(sl)]
    remaining = [q for q in range(width) if q not in gate.controls]
    k = len(gate.targets)
    pos = [remaining.index(t) for t in gate.targets]
    moved = np.moveaxis(sub, pos, list(range(sub.ndim - k, sub.ndim)))
    flat = moved.reshape(-1, 1 << k)
    moved[...] = (flat @ m.T).reshape(moved.shape)


def _apply_inplace(gate: Gate, data: np.ndarray, width: int) -> None:
    mask, value = _ctrl_mask(gate, width)
    kind = gate.kind
    if kind in ("ControlledIncrement", "ControlledDecrement"):
        delta = 1 if kind == "ControlledIncrement" else -1
        kernels.backend.register_add(data, width, gate.targets, mask, value, delta)
    elif kind == "ControlledGivens":
        ang = cg_angle(int(gate.param("twoS")), int(gate.param("twoM")))
        s = -ang.sin if gate.param("adjoint", False) else ang.sin
        qa, qb = gate.targets
        kernels.backend.givens(data, width, qa, qb, mask, value, ang.cos, s)
    elif kind == "Hadamard":
        _apply_matrix(data, width, gate, _H)
    elif kind == "CNOT":
        _apply_matrix(data, width, gate, _X)
    elif kind == "GenericUnitary":
        _apply_matrix(data, width, gate, _matrix_param(gate))
    else:  # pragma: no cover
        raise ValidationError(kind)


def _check_width(gate: Gate, width: int) -> None:
    if max(gate.qubits, default=-1) >= width:
        raise WidthMismatch(f"gate touches qubit {max(gate.qubits)} on a {width}-qubit state")


def apply(gate: Gate, state: StateVector) -> StateVector:
    """Return ``gate|state>`` as a new state."""
    width = state.n_qubits
    _check_width(gate, width)
    if abs(state.norm() - 1.0) > 1e-9:
        raise ValidationError(f"state is not normalised (norm {state.norm():.12f})")
    if gate.kind == "GenericUnitary":
        m = _matrix_param(gate)
        if np.abs(m @ m.conj().T - np.eye(m.shape[0])).max() > 1e-10:
            raise NonUnitaryParam("matrix is not unitary")
    out = state.copy()
    _apply_inplace(gate, out.data, width)
    return out


def run(circuit: Circuit, state: StateVector | np.ndarray) -> np.ndarray:
    """Apply every gate of ``circuit``; returns the amplitude array (input is not modified)."""
    data = np.array(state.data if isinstance(state, StateVector) else state, dtype=complex, copy=True)
    width = circuit.width
    if data.size != 1 << width:
        raise WidthMismatch(f"circuit width {width} but state has {data.size} amplitudes")
    for g in circuit.gates:
        _apply_inplace(g, data, width)
    return data


def simulate(circuit: Circuit, state: StateVector) -> StateVector:
    if abs(state.norm() - 1.0) > 1e-9:
        raise ValidationError(f"state is not normalised (norm {state.norm():.12f})")
    layout = circuit.layout if circuit.layout is not None else state.layout
    if layout is not None and layout.width != circuit.width:
        layout = None
    return StateVector(run(circuit, state), layout, state.kind if layout is None else "uga")


# ------------------------------------------------------------------ builders


def _controlled_add(reg: Sequence[int], control: int, up: bool) -> Gate:
    kind = "ControlledIncrement" if up else "ControlledDecrement"
    return Gate(kind, tuple(reg), (control,), (1,))


def inc_m(d: int, i: int, layout: RegisterLayout | None = None) -> Circuit:
    """``2M += x_{i up} - x_{i down}``."""
    lay = layout or RegisterLayout(d)
    up, down = lay.pair(i)
    c = Circuit(lay.width, layout=lay)
    c.append(_controlled_add(lay.m_qubits, up, True))
    c.append(_controlled_add(lay.m_qubits, down, False))
    return c


def inc_s(d: int, i: int, layout: RegisterLayout | None = None) -> Circuit:
    """``2S += d_{2i-1} - d_{2i}``."""
    lay = layout or RegisterLayout(d)
    a, b = lay.pair(i)
    c = Circuit(lay.width, layout=lay)
    c.append(_controlled_add(lay.s_qubits, a, True))
    c.append(_controlled_add(lay.s_qubits, b, False))
    return c


def inc_n(d: int, i: int, layout: RegisterLayout | None = None) -> Circuit:
    """``N += d_{2i-1} + d_{2i}``."""
    lay = layout or RegisterLayout(d)
    a, b = lay.pair(i)
    c = Circuit(lay.width, layout=lay)
    c.append(_controlled_add(lay.N_qubits, a, True))
    c.append(_controlled_add(lay.N_qubits, b, True))
    return c


def givens_gate(lay: RegisterLayout, i: int, two_s: int, two_m: int) -> Gate:
    controls = lay.s_qubits + lay.m_qubits
    values = lay.s_bits(two_s) + lay.m_bits(two_m)
    return Gate("ControlledGivens", lay.pair(i), controls, values, {"twoS": two_s, "twoM": two_m})


def givens_multiplexer(d: int, i: int, layout: RegisterLayout | None = None) -> Circuit:
    """Nontrivial controlled rotations of step ``i``: every incoming 2S < i, every outgoing 2M."""
    lay = layout or RegisterLayout(d)
    c = Circuit(lay.width, layout=lay)
    for two_s in range(0, i):
        for two_m in range(-two_s - 1, two_s + 1, 2):
            c.append(givens_gate(lay, i, two_s, two_m))
    return c


def cg_transform(d: int, i: int, layout: RegisterLayout | None = None, include_n: bool = True) -> Circuit:
    if not 1 <= i <= d:
        raise ValidationError(f"orbital {i} out of range 1..{d}")
    lay = layout or RegisterLayout(d)
    c = inc_m(d, i, lay) + givens_multiplexer(d, i, lay) + inc_s(d, i, lay)
    if include_n:
        c = c + inc_n(d, i, lay)
    return c


def paldus_circuit(d: int, includeN: bool = True, decoupleS: bool = False) -> Circuit:
    """Cascade of ``d`` Clebsch-Gordan transforms."""
    lay = RegisterLayout(d)
    c = Circuit(lay.width, layout=lay)
    for i in range(1, d + 1):
        c = c + cg_transform(d, i, lay, includeN)
    if decoupleS:
        for i in range(d, 0, -1):
            c = c + inc_s(d, i, lay).inverse()
    return c


def increment_cascade(reg: Sequence[int], control: int, up: bool = True) -> list[Gate]:
    """Multi-controlled-X cascade equal to a controlled (in/de)crement of ``reg`` (MSB first)."""
    gates = []
    k = len(reg)
    want = 1 if up else 0
    for j in range(k):
        lower = tuple(reg[j + 1 :])
        gates.append(Gate("CNOT", (reg[j],), (control,) + lower, (1,) + (want,) * len(lower)))
    return gates


def expand_incrementers(circuit: Circuit) -> Circuit:
    """Replace every register add by its CNOT cascade."""
    out = Circuit(circuit.width, layout=circuit.layout)
    for g in circuit.gates:
        if g.kind in ("ControlledIncrement", "ControlledDecrement") and len(g.controls) == 1 and g.control_values == (1,):
            out.append(increment_cascade(g.targets, g.controls[0], g.kind == "ControlledIncrement"))
        else:
            out.append(g)
    return out


# ------------------------------------------------------------------ verification


@dataclass
class IsometryReport:
    d: int
    n_labels: int
    min_overlap: float
    max_leakage: float
    failures: list[tuple[str, float]]
    seconds: float
    backend: str

    @property
    def ok(self) -> bool:
        return not self.failures


def run_isometry_check(d: int, tol: float = 1e-9, raise_on_fail: bool = True) -> IsometryReport:
    """Feed every GT state through the circuit and compare with its encoded label."""
    if d > 4:
        raise ValidationError("dense isometry check is limited to d <= 4")
    t0 = time.perf_counter()
    circ = paldus_circuit(d)
    lay = circ.layout
    assert lay is not None
    size = 1 << (2 * d)
    failures = []
    worst = 1.0
    leak = 0.0
    for label in all_labels(d):
        vec = np.zeros(1 << lay.width, dtype=complex)
        vec[:size] = build_gt_state(label, d)
        out = run(circ, vec)
        target = lay.encode_label(label)
        ov = abs(out[target])
        worst = min(worst, ov)
        leak = max(leak, float(np.sqrt(max(0.0, 1.0 - abs(out[target]) ** 2))))
        if abs(ov - 1.0) > tol:
            failures.append((str(label), float(ov)))
    report = IsometryReport(d, 4**d, worst, leak, failures, time.perf_counter() - t0, kernels.BACKEND)
    if failures and raise_on_fail:
        raise IsometryViolation(f"{len(failures)} labels fail: {failures[:5]}")
    return report


def paldus_isometry_matrix(d: int, labels: Sequence[UgaLabel] | None = None) -> tuple[list[UgaLabel], np.ndarray]:
    """Matrix ``R[a, x] = <label_a| U_P |0, x>`` from simulating every occupation basis input."""
    circ = paldus_circuit(d)
    lay = circ.layout
    assert lay is not None
    labs = list(labels) if labels is not None else all_labels(d)
    rows = np.array([lay.encode_label(lab) for lab in labs])
    size = 1 << (2 * d)
    r = np.zeros((len(labs), size), dtype=complex)
    for x in range(size):
        vec = np.zeros(1 << lay.width, dtype=complex)
        vec[x] = 1
        out = run(circ, vec)
        r[:, x] = out[rows]
    return labs, r


def transform_state(occ: StateVector | np.ndarray, d: int, inverse: bool = False) -> StateVector:
    """Apply ``U_P`` (or its inverse) to an occupation state embedded with clean registers."""
    circ = paldus_circuit(d)
    lay = circ.layout
    assert lay is not None
    if inverse:
        if not isinstance(occ, StateVector) or occ.layout is None:
            raise ValidationError("inverse transform expects a state in the UGA layout")
        return StateVector(run(circ.inverse(), occ), lay)
    src = occ if isinstance(occ, StateVector) else StateVector.occupation(occ)
    return StateVector(run(circ, src.embed(lay)), lay)
