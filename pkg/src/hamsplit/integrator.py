"""Splitting schemes, the long-run stepping loop, and symplecticity checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .errors import BlowUpError
from .models import FrequencyModel
from .spectral import State, is_real_state


@dataclass
class SchemeSpec:
    """Which splitting to use and with what step size."""

    kind: str                  # "lie" | "strang"
    h: float
    model: FrequencyModel
    linear_first: bool = False  # Lie ordering flag; default phi_H0 after phi_P
    substep_tol: float = 1e-12

    def __post_init__(self):
        if self.kind not in ("lie", "strang"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.h <= 0:
            raise ValueError("step size h must be > 0")


@dataclass
class DiagnosticsRecord:
    n: int
    t: float
    actions: np.ndarray
    norm: float
    max_action_drift: float


@dataclass
class RunResult:
    records: List[DiagnosticsRecord]
    final_state: State
    initial_actions: np.ndarray


def lie_step(z: State, scheme: SchemeSpec) -> State:
    """One step of the Lie splitting phi_H0^h o phi_P^h."""
    m, h = scheme.model, scheme.h
    if scheme.linear_first:
        return m.nonlinear_substep(m.linear_flow(z, h), h, scheme.substep_tol)
    return m.linear_flow(m.nonlinear_substep(z, h, scheme.substep_tol), h)


def strang_step(z: State, scheme: SchemeSpec) -> State:
    """One step of phi_P^{h/2} o phi_H0^h o phi_P^{h/2}."""
    m, h = scheme.model, scheme.h
    z = m.nonlinear_substep(z, h / 2, scheme.substep_tol)
    z = m.linear_flow(z, h)
    return m.nonlinear_substep(z, h / 2, scheme.substep_tol)


def one_step(z: State, scheme: SchemeSpec) -> State:
    return lie_step(z, scheme) if scheme.kind == "lie" else strang_step(z, scheme)


def run(z0: State, scheme: SchemeSpec, n_steps: int, record_every: int = 1,
        reality_tol: float = 1e-8, reality_hard_fail: bool = False,
        blowup_factor: float = 1e6) -> RunResult:
    """Iterate the scheme, recording diagnostics every record_every steps.

    The running max of the action drift between records is folded into the
    next record so sparse recording loses no drift information.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    record_every = max(1, record_every)
    I0 = z0.actions().copy()
    norm0 = z0.norm()
    check_reality = is_real_state(z0, reality_tol)

    z = z0.copy()
    records = [DiagnosticsRecord(0, 0.0, I0.copy(), norm0, 0.0)]
    pending_drift = 0.0
    for n in range(1, n_steps + 1):
        z = one_step(z, scheme)
        norm = z.norm()
        if not np.isfinite(norm) or norm > blowup_factor * max(norm0, 1e-300):
            raise BlowUpError(n)
        actions = z.actions()
        drift = float(np.max(np.abs(actions - I0)))
        pending_drift = max(pending_drift, drift)
        if n % record_every == 0 or n == n_steps:
            records.append(DiagnosticsRecord(
                n, n * scheme.h, actions, norm, pending_drift))
            pending_drift = 0.0
            if check_reality and not is_real_state(z, reality_tol):
                if reality_hard_fail:
                    raise BlowUpError(n, f"reality lost at step {n}")
                check_reality = False  # report once via records, keep running
    return RunResult(records=records, final_state=z, initial_actions=I0)


def symplectic_J(n_modes: int) -> np.ndarray:
    """The matrix of the symplectic form i sum dxi_a ^ deta_a in (xi, eta)."""
    J = np.zeros((2 * n_modes, 2 * n_modes), dtype=complex)
    J[:n_modes, n_modes:] = -1j * np.eye(n_modes)
    J[n_modes:, :n_modes] = 1j * np.eye(n_modes)
    return J


def symplecticity_defect(step: Callable[[State], State], z: State,
                         fd_eps: float) -> float:
    """max-norm of D^T J D - J for the finite-difference Jacobian of step.

    The substeps are holomorphic in (xi, eta), so real perturbations of each
    complex coordinate recover the full complex Jacobian.
    """
    if fd_eps <= 0:
        raise ValueError("fd_eps must be > 0")
    n = len(z.index_set)
    dim = 2 * n

    def pack(s: State) -> np.ndarray:
        return np.concatenate([s.xi, s.eta])

    def unpack(y: np.ndarray) -> State:
        return State(z.index_set, y[:n], y[n:])

    y0 = pack(z)
    D = np.empty((dim, dim), dtype=complex)
    for k in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[k] = fd_eps
        fp = pack(step(unpack(y0 + e)))
        fm = pack(step(unpack(y0 - e)))
        D[:, k] = (fp - fm) / (2 * fd_eps)
    J = symplectic_J(n)
    return float(np.max(np.abs(D.T @ J @ D - J)))
