"""States, Fourier/physical transforms and the aliasing collocation operator.

Conventions (d=1, shifted box [-K..K-1]):
    u(x_b) = (2pi)^{-1/2} sum_a xi_a exp(i a x_b),   x_b = pi b / K,
with 2K collocation points, so that
    sum_a |xi_a|^2 = (2pi/2K) sum_b |u(x_b)|^2     (Parseval, exact).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedSetError
from .indices import IndexSet, as_mode


@dataclass
class State:
    """Complex coefficient pair z = (xi, eta) over an index set."""

    index_set: IndexSet
    xi: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        self.xi = np.asarray(self.xi, dtype=complex)
        self.eta = np.asarray(self.eta, dtype=complex)
        n = len(self.index_set)
        if self.xi.shape != (n,) or self.eta.shape != (n,):
            raise ValueError("xi/eta must have one entry per mode")

    def norm(self) -> float:
        # overflow to inf is fine: the stepping loop treats it as blow-up
        with np.errstate(over="ignore"):
            return float(np.sqrt(np.sum(np.abs(self.xi) ** 2)
                                 + np.sum(np.abs(self.eta) ** 2)))

    def actions(self) -> np.ndarray:
        """I_a = xi_a eta_a (equals |xi_a|^2 on real states)."""
        return self.xi * self.eta

    def copy(self) -> "State":
        return State(self.index_set, self.xi.copy(), self.eta.copy())

    @classmethod
    def real_from_xi(cls, index_set: IndexSet, xi) -> "State":
        xi = np.asarray(xi, dtype=complex)
        return cls(index_set, xi, np.conj(xi))

    @classmethod
    def zero(cls, index_set: IndexSet) -> "State":
        n = len(index_set)
        return cls(index_set, np.zeros(n, complex), np.zeros(n, complex))


@dataclass
class PhysicalField:
    """Samples of a trigonometric polynomial at the collocation points."""

    samples: np.ndarray
    index_set: IndexSet

    @property
    def grid(self) -> np.ndarray:
        K = self.index_set.K
        return np.pi * np.arange(2 * K) / K

    @property
    def dx(self) -> float:
        return np.pi / self.index_set.K


def _require_fft_set(s: IndexSet):
    if s.kind != "shifted_box" or s.d != 1:
        raise UnsupportedSetError(
            "FFT transforms require a d=1 shifted box index set")


def _lex_to_fft(coeffs: np.ndarray, K: int) -> np.ndarray:
    # lex order is a = -K..K-1; FFT order is 0..K-1, -K..-1
    return np.roll(coeffs, -K)


def _fft_to_lex(coeffs: np.ndarray, K: int) -> np.ndarray:
    return np.roll(coeffs, K)


def to_physical(xi: np.ndarray, s: IndexSet) -> PhysicalField:
    """Evaluate u(x_b) = (2pi)^{-1/2} sum_a xi_a e^{i a x_b} on the grid."""
    _require_fft_set(s)
    K = s.K
    n = 2 * K
    samples = n * np.fft.ifft(_lex_to_fft(np.asarray(xi, complex), K))
    samples *= (2 * np.pi) ** -0.5
    return PhysicalField(samples=samples, index_set=s)


def from_physical(field: PhysicalField) -> np.ndarray:
    """Inverse of to_physical (exact up to round-off)."""
    s = field.index_set
    _require_fft_set(s)
    K = s.K
    coeffs = np.fft.fft(np.asarray(field.samples, complex)) / (2 * K)
    return _fft_to_lex(coeffs, K) * (2 * np.pi) ** 0.5


def conj_to_physical(eta: np.ndarray, s: IndexSet) -> PhysicalField:
    """Evaluate v(x_b) = (2pi)^{-1/2} sum_a eta_a e^{-i a x_b}.

    On a real state this is the complex conjugate of to_physical(xi).
    """
    _require_fft_set(s)
    K = s.K
    n = 2 * K
    samples = n * np.fft.ifft(_lex_to_fft(np.asarray(eta, complex), K))
    samples *= (2 * np.pi) ** -0.5
    # e^{-iax} sampling is the reversed-grid evaluation of e^{+iax}
    return PhysicalField(samples=np.roll(samples[::-1], 1), index_set=s)


def conj_from_physical(field: PhysicalField) -> np.ndarray:
    s = field.index_set
    _require_fft_set(s)
    K = s.K
    samples = np.roll(np.asarray(field.samples, complex), -1)[::-1]
    coeffs = np.fft.fft(samples) / (2 * K)
    return _fft_to_lex(coeffs, K) * (2 * np.pi) ** 0.5


def alias_project(full_coeffs: dict, s: IndexSet) -> np.ndarray:
    """Collocation operator Q: fold Z^d coefficients onto N_K modulo 2K.

    output_a = sum_b full_coeffs[a + 2K b].
    """
    _require_fft_set(s)
    K = s.K
    out = np.zeros(len(s), dtype=complex)
    for mode, c in full_coeffs.items():
        (a,) = as_mode(mode)
        folded = ((a + K) % (2 * K)) - K
        out[s.index_of((folded,))] += c
    return out


def is_real_state(z: State, tol: float) -> bool:
    """True iff z_{jbar} = conj(z_j), i.e. eta = conj(xi), within tol."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return bool(np.max(np.abs(z.eta - np.conj(z.xi))) <= tol)
