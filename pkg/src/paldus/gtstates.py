"""Clebsch-Gordan angles and Gelfand-Tsetlin states in the occupation basis.

States are built orbital by orbital from a sparse map ``(2M so far, bits) ->
amplitude``. Coupling a singly occupied orbital to incoming spin ``S`` with
outgoing projection ``M`` uses

====================  ==============  ==============
step                  spin up (10)    spin down (01)
====================  ==============  ==============
raise S (step 10)     cos             sin
lower S (step 01)     -sin            cos
====================  ==============  ==============

with ``cos = sqrt((S+M+1/2)/(2S+1))``. Empty and doubly occupied orbitals
contribute a factor of one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isclose, sqrt

import numpy as np

from .combinatorics import StepVector, UgaLabel, all_labels
from .errors import DomainError, InvalidLabel


@dataclass(frozen=True)
class CGAngle:
    twoS: int
    twoM: int
    cos: float
    sin: float

    @property
    def theta(self) -> float:
        return float(np.arctan2(self.sin, self.cos))

    @property
    def trivial(self) -> bool:
        return self.twoM == self.twoS + 1

    def matrix(self) -> np.ndarray:
        """Action on the ``(|01>, |10>)`` block: columns are images of the inputs."""
        c, s = self.cos, self.sin
        return np.array([[c, -s], [s, c]])


def cg_angle(twoS: int, twoM: int) -> CGAngle:
    """CG rotation for incoming spin ``twoS/2`` and outgoing projection ``twoM/2``."""
    if twoS < 0 or abs(twoM) > twoS + 1 or (twoM - twoS - 1) % 2:
        raise DomainError(f"no coupling for 2S={twoS}, 2M={twoM}")
    # (S + M + 1/2) / (2S + 1) in doubled units
    num = twoS + twoM + 1
    den = 2 * (twoS + 1)
    c = sqrt(num / den)
    s = sqrt((den - num) / den)
    return CGAngle(twoS, twoM, c, s)


def _occupation_index(bits: str) -> int:
    return int(bits, 2) if bits else 0


def gt_amplitudes(label: UgaLabel) -> dict[str, float]:
    """Nonzero occupation-basis amplitudes of a GT state, keyed by bitstring."""
    step = label.step
    current: dict[tuple[int, str], float] = {(0, ""): 1.0}
    two_s = 0
    for st in step.steps:
        nxt: dict[tuple[int, str], float] = {}

        def push(key: tuple[int, str], amp: float) -> None:
            if amp != 0.0:
                nxt[key] = nxt.get(key, 0.0) + amp

        for (two_m, bits), amp in current.items():
            if st == 0:
                push((two_m, bits + "00"), amp)
            elif st == 3:
                push((two_m, bits + "11"), amp)
            else:
                up = cg_angle(two_s, two_m + 1)
                down = cg_angle(two_s, two_m - 1)
                if st == 1:
                    push((two_m + 1, bits + "10"), amp * up.cos)
                    push((two_m - 1, bits + "01"), amp * down.sin)
                else:
                    push((two_m + 1, bits + "10"), -amp * up.sin)
                    push((two_m - 1, bits + "01"), amp * down.cos)
        two_s += {0: 0, 1: 1, 2: -1, 3: 0}[st]
        current = nxt
    return {bits: amp for (two_m, bits), amp in current.items() if two_m == label.twoM}


def build_gt_state(label: UgaLabel, d: int | None = None) -> np.ndarray:
    """Dense real amplitude vector on ``2d`` qubits for a GT basis state."""
    if d is None:
        d = label.d
    if label.d != d:
        raise InvalidLabel(f"label has {label.d} orbitals, expected {d}")
    vec = np.zeros(1 << (2 * d))
    for bits, amp in gt_amplitudes(label).items():
        vec[_occupation_index(bits)] = amp
    norm = float(np.linalg.norm(vec))
    if not isclose(norm, 1.0, abs_tol=1e-12):
        raise InvalidLabel(f"state for {label} has norm {norm}")
    return vec


def gt_basis_oracle(d: int) -> list[tuple[UgaLabel, np.ndarray]]:
    """Every GT state on ``d`` orbitals, ordered by (N, 2S, -2M, step)."""
    if d > 6:
        raise ValueError("gt_basis_oracle is limited to d <= 6")
    return [(lab, build_gt_state(lab, d)) for lab in all_labels(d)]


def gt_basis_matrix(d: int) -> tuple[list[UgaLabel], np.ndarray]:
    """Labels and the matrix whose rows are the corresponding GT states."""
    pairs = gt_basis_oracle(d)
    return [p[0] for p in pairs], np.array([p[1] for p in pairs])


def sequential_cg_state(twoS: int, twoM: int, yamanouchi: str) -> dict[str, float]:
    """First-quantised spin state on ``len(yamanouchi)`` qubits by sequential coupling.

    ``yamanouchi[i]`` is ``'0'`` when spin is raised at site ``i`` and ``'1'``
    when it is lowered. Keys use ``'0'`` for up and ``'1'`` for down.
    """
    current: dict[tuple[int, str], float] = {(0, ""): 1.0}
    s = 0
    for y in yamanouchi:
        nxt: dict[tuple[int, str], float] = {}
        raise_ = y == "0"
        s_out = s + (1 if raise_ else -1)
        if s_out < 0:
            raise InvalidLabel(f"Yamanouchi symbol {yamanouchi} is not valid")
        for (m, bits), amp in current.items():
            for spin, dm in (("0", 1), ("1", -1)):
                m_out = m + dm
                if abs(m_out) > s_out:
                    continue
                # standard <s, m; 1/2, dm/2 | s_out, m_out> in doubled units
                if raise_:
                    num = s + 1 + (m_out if dm == 1 else -m_out)
                    coeff = sqrt(num / (2 * (s + 1)))
                else:
                    num = s + 1 - (m_out if dm == 1 else -m_out)
                    coeff = sqrt(num / (2 * (s + 1))) * (-1 if dm == 1 else 1)
                if coeff:
                    nxt[(m_out, bits + spin)] = nxt.get((m_out, bits + spin), 0.0) + amp * coeff
        s = s_out
        current = nxt
    if s != twoS:
        raise InvalidLabel(f"Yamanouchi symbol ends at 2S={s}, not {twoS}")
    return {bits: a for (m, bits), a in current.items() if m == twoM}


def step_from_yamanouchi(yamanouchi: str) -> StepVector:
    return StepVector.parse(",".join("10" if y == "0" else "01" for y in yamanouchi))
