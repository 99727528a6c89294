"""Truncated polynomial algebra over C^{Z_K}: sparse coefficient maps from
canonical multi-indices, Poisson brackets, and composition with the linear
flow."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .indices import MultiIndex, SignedIndex, as_mode
from .spectral import State

COEFF_DROP = 0.0   # exact arithmetic on coefficients; keep everything nonzero


@dataclass
class Polynomial:
    """sum_j c_j z_j with canonical multi-index keys, graded by degree."""

    max_degree: int
    coeffs: Dict[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {j: complex(c) for j, c in self.coeffs.items()
                       if c != 0 and j.degree <= self.max_degree}

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, max_degree: int) -> "Polynomial":
        return cls(max_degree, {})

    @classmethod
    def monomial(cls, j: MultiIndex, c: complex,
                 max_degree: Optional[int] = None) -> "Polynomial":
        return cls(max_degree or j.degree, {j: c})

    def copy(self) -> "Polynomial":
        return Polynomial(self.max_degree, dict(self.coeffs))

    # -- structure ---------------------------------------------------------

    def sup_norm(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({j.degree for j in self.coeffs}))

    def homogeneous_part(self, ell: int) -> "Polynomial":
        return Polynomial(self.max_degree,
                          {j: c for j, c in self.coeffs.items()
                           if j.degree == ell})

    def truncated(self, cap: int) -> "Polynomial":
        return Polynomial(cap, {j: c for j, c in self.coeffs.items()
                                if j.degree <= cap})

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coeffs.values())

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out.get(j, 0.0) + c
        return Polynomial(max(self.max_degree, other.max_degree), out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "Polynomial":
        return Polynomial(self.max_degree,
                          {j: scalar * c for j, c in self.coeffs.items()})

    def conjugate_hamiltonian(self) -> "Polynomial":
        """coeff(jbar) := conj(coeff(j)); equals self for real Hamiltonians."""
        return Polynomial(self.max_degree,
                          {j.conj: np.conj(c) for j, c in self.coeffs.items()})

    # -- calculus ----------------------------------------------------------

    def derivative(self, j0: SignedIndex) -> "Polynomial":
        out: Dict[MultiIndex, complex] = {}
        for j, c in self.coeffs.items():
            mult = sum(1 for e in j if e == j0)
            if not mult:
                continue
            entries = list(j.entries)
            entries.remove(j0)
            key = MultiIndex(tuple(entries))
            out[key] = out.get(key, 0.0) + mult * c
        return Polynomial(self.max_degree, out)

    def compose_linear_flow(self, h: float, freqs) -> "Polynomial":
        """Q o phi_{H0}^h: each monomial picks up e^{-ih Omega(j)}."""
        from .indices import omega_of
        return Polynomial(self.max_degree, {
            j: c * np.exp(-1j * h * omega_of(j, freqs))
            for j, c in self.coeffs.items()})

    # -- evaluation --------------------------------------------------------

    def _factor(self, e: SignedIndex, z: State) -> complex:
        i = z.index_set.index_of(e.a)
        return z.xi[i] if e.delta == 1 else z.eta[i]

    def evaluate(self, z: State) -> complex:
        total = 0.0 + 0.0j
        for j, c in self.coeffs.items():
            term = c
            for e in j:
                term *= self._factor(e, z)
            total += term
        return total

    def gradient(self, z: State):
        """(dF/dxi, dF/deta) arrays over the index set."""
        n = len(z.index_set)
        gx = np.zeros(n, dtype=complex)
        ge = np.zeros(n, dtype=complex)
        for j, c in self.coeffs.items():
            vals = [self._factor(e, z) for e in j]
            for k, e in enumerate(j):
                term = c
                for i, v in enumerate(vals):
                    if i != k:
                        term *= v
                idx = z.index_set.index_of(e.a)
                if e.delta == 1:
                    gx[idx] += term
                else:
                    ge[idx] += term
        return gx, ge

    def hamiltonian_field(self, z: State):
        """X_F(z): (xi_dot, eta_dot) = (-i dF/deta, i dF/dxi)."""
        gx, ge = self.gradient(z)
        return -1j * ge, 1j * gx


def multiply(F: Polynomial, G: Polynomial, cap: int) -> Polynomial:
    out: Dict[MultiIndex, complex] = {}
    for j, c in F.coeffs.items():
        for k, d in G.coeffs.items():
            if j.degree + k.degree > cap:
                continue
            key = MultiIndex(j.entries + k.entries)
            out[key] = out.get(key, 0.0) + c * d
    return Polynomial(cap, out)


def poisson_bracket(F: Polynomial, G: Polynomial,
                    cap: Optional[int] = None) -> Polynomial:
    """{F, G} = i sum_a (dF/deta_a dG/dxi_a - dF/dxi_a dG/deta_a)."""
    cap = cap if cap is not None else max(F.max_degree + G.max_degree - 2, 0)
    modes = {e.a for j in F.coeffs for e in j} & \
            {e.a for k in G.coeffs for e in k}
    out = Polynomial.zero(cap)
    for a in modes:
        up, dn = SignedIndex(a, 1), SignedIndex(a, -1)
        out = out + 1j * multiply(F.derivative(dn), G.derivative(up), cap)
        out = out + (-1j) * multiply(F.derivative(up), G.derivative(dn), cap)
    return out
