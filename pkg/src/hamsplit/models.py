"""Concrete Hamiltonian models: NLS on the torus and the wave equation.

Each model carries the linear frequencies omega_a and knows how to apply the
exact flow of the nonlinear part over a step h.  The nonlinear substep of the
NLS model reduces at the collocation points to the uncoupled system

    u' = -i d2g(u, v),    v' = +i d1g(u, v),

which for gauge nonlinearities g = G(uv) has the closed form
u -> exp(-ih G'(uv)) u, v -> exp(+ih G'(uv)) v (uv is a pointwise invariant).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import SubstepFailureError
from .indices import IndexSet, as_mode, build_index_set, sup_norm
from .spectral import (PhysicalField, State, conj_from_physical,
                       conj_to_physical, from_physical, to_physical)


@dataclass(frozen=True)
class NonlinearSpec:
    """Polynomial nonlinearity g(u, v) = sum_{p,q} c_{pq} u^p v^q.

    kind "power_gauge" means g = G(uv) (all terms have p == q), which
    unlocks the exact phase-rotation substep.
    """

    kind: str
    terms: Tuple[Tuple[Tuple[int, int], complex], ...]

    @classmethod
    def gauge(cls, G_coeffs: Dict[int, float]) -> "NonlinearSpec":
        """g = G(uv) with G(s) = sum_k G_coeffs[k] s^k (k >= 2)."""
        terms = tuple(((k, k), complex(c)) for k, c in sorted(G_coeffs.items()))
        return cls(kind="power_gauge", terms=terms)

    @classmethod
    def cubic(cls, lam: float) -> "NonlinearSpec":
        """Cubic NLS: G(s) = lam s^2 / 2, i.e. the |psi|^2 psi nonlinearity."""
        return cls.gauge({2: lam / 2.0})

    @classmethod
    def general(cls, terms: Dict[Tuple[int, int], complex]) -> "NonlinearSpec":
        return cls(kind="general", terms=tuple(sorted(
            (pq, complex(c)) for pq, c in terms.items())))

    @classmethod
    def zero(cls) -> "NonlinearSpec":
        return cls(kind="power_gauge", terms=())

    @property
    def is_gauge(self) -> bool:
        return self.kind == "power_gauge"

    def g(self, u, v):
        out = np.zeros_like(np.asarray(u, complex))
        for (p, q), c in self.terms:
            out = out + c * u ** p * v ** q
        return out

    def d1(self, u, v):
        """dg/du."""
        out = np.zeros_like(np.asarray(u, complex))
        for (p, q), c in self.terms:
            if p:
                out = out + c * p * u ** (p - 1) * v ** q
        return out

    def d2(self, u, v):
        """dg/dv."""
        out = np.zeros_like(np.asarray(u, complex))
        for (p, q), c in self.terms:
            if q:
                out = out + c * q * u ** p * v ** (q - 1)
        return out

    def Gp(self, s):
        """G'(s) for gauge nonlinearities (d2 g = G'(uv) u)."""
        if not self.is_gauge:
            raise ValueError("Gp only defined for power_gauge nonlinearities")
        out = np.zeros_like(np.asarray(s, complex))
        for (k, _), c in self.terms:
            out = out + c * k * s ** (k - 1)
        return out


def paper_potential(a: int) -> float:
    """The convolution potential used in the numerical experiments."""
    return 2.0 / (10.0 + 2.0 * a * a)


@dataclass
class FrequencyModel:
    """Frequencies omega_a plus the exact nonlinear substep of one model."""

    kind: str                      # "nls" | "wave"
    index_set: IndexSet
    omega: np.ndarray              # lex order over index_set
    m: int                         # growth exponent: 2 for NLS, 1 for wave
    nonlin: Optional[NonlinearSpec] = None
    filter_vals: Optional[np.ndarray] = None   # Phi(h omega_a), or None
    # wave-only machinery
    wave_g: Optional[Callable] = None
    wave_G: Optional[Callable] = None
    wave_scale: Optional[np.ndarray] = None    # A^{-1/2} diagonal
    wave_basis: Optional[np.ndarray] = None    # [n_points, n_modes]
    wave_weight: float = 0.0

    def omega_at(self, a) -> float:
        return float(self.omega[self.index_set.index_of(as_mode(a))])

    # -- linear flow -------------------------------------------------------

    def linear_flow(self, z: State, h: float) -> State:
        phase = np.exp(-1j * self.omega * h)
        return State(z.index_set, z.xi * phase, z.eta * np.conj(phase))

    # -- nonlinear substep -------------------------------------------------

    def nonlinear_substep(self, z: State, h: float, tol: float = 1e-12) -> State:
        if h == 0:
            return z.copy()
        if self.kind == "wave":
            return self._wave_substep(z, h)
        if self.filter_vals is not None:
            return self._filtered_substep(z, h, tol)
        u = to_physical(z.xi, self.index_set).samples
        v = conj_to_physical(z.eta, self.index_set).samples
        if self.nonlin.is_gauge:
            theta = self.nonlin.Gp(u * v)
            u2 = np.exp(-1j * h * theta) * u
            v2 = np.exp(1j * h * theta) * v
        else:
            u2, v2 = _integrate_pointwise(u, v, h, self.nonlin, tol)
        xi = from_physical(PhysicalField(u2, self.index_set))
        eta = conj_from_physical(PhysicalField(v2, self.index_set))
        return State(z.index_set, xi, eta)

    # -- Hamiltonian data --------------------------------------------------

    def eval_P(self, z: State) -> complex:
        """P(z), including the mollifier when present."""
        if self.filter_vals is not None:
            z = State(z.index_set, z.xi * self.filter_vals,
                      z.eta * self.filter_vals)
        if self.kind == "wave":
            q = (z.xi + z.eta) / np.sqrt(2)
            w = self.wave_basis @ (self.wave_scale * q)
            return self.wave_weight * np.sum(self.wave_G(w))
        K = self.index_set.K
        u = to_physical(z.xi, self.index_set).samples
        v = conj_to_physical(z.eta, self.index_set).samples
        return (2 * np.pi / (2 * K)) * np.sum(self.nonlin.g(u, v))

    def grad_P(self, z: State) -> Tuple[np.ndarray, np.ndarray]:
        """(dP/dxi, dP/deta), including the mollifier chain rule."""
        if self.filter_vals is not None:
            zf = State(z.index_set, z.xi * self.filter_vals,
                       z.eta * self.filter_vals)
            gx, ge = replace(self, filter_vals=None).grad_P(zf)
            return gx * self.filter_vals, ge * self.filter_vals
        if self.kind == "wave":
            q = (z.xi + z.eta) / np.sqrt(2)
            force = self._wave_force(q)
            return force / np.sqrt(2), force / np.sqrt(2)
        u = to_physical(z.xi, self.index_set).samples
        v = conj_to_physical(z.eta, self.index_set).samples
        dxi = conj_from_physical(PhysicalField(self.nonlin.d1(u, v),
                                               self.index_set))
        deta = from_physical(PhysicalField(self.nonlin.d2(u, v),
                                           self.index_set))
        return dxi, deta

    def with_filter(self, Phi: Callable, h: float) -> "FrequencyModel":
        return replace(self, filter_vals=np.asarray(Phi(h * self.omega),
                                                    dtype=float))

    # -- internals ---------------------------------------------------------

    def _filtered_substep(self, z: State, h: float, tol: float) -> State:
        n = len(self.index_set)

        def rhs(t, y):
            zi = State(self.index_set,
                       y[:n] + 1j * y[n:2 * n],
                       y[2 * n:3 * n] + 1j * y[3 * n:])
            gx, ge = self.grad_P(zi)
            dxi = -1j * ge
            deta = 1j * gx
            return np.concatenate([dxi.real, dxi.imag, deta.real, deta.imag])

        y0 = np.concatenate([z.xi.real, z.xi.imag, z.eta.real, z.eta.imag])
        sol = solve_ivp(rhs, (0.0, h), y0, method="DOP853",
                        rtol=tol, atol=tol)
        if not sol.success:
            raise SubstepFailureError(sol.message)
        y = sol.y[:, -1]
        return State(self.index_set, y[:n] + 1j * y[n:2 * n],
                     y[2 * n:3 * n] + 1j * y[3 * n:])

    def _wave_force(self, q: np.ndarray) -> np.ndarray:
        w = self.wave_basis @ (self.wave_scale * q)
        return self.wave_weight * self.wave_scale * (
            self.wave_basis.T @ self.wave_g(w))

    def _wave_substep(self, z: State, h: float) -> State:
        # P depends on q only, so the exact flow is an impulse kick on p.
        q = (z.xi + z.eta) / np.sqrt(2)
        p = -1j * (z.xi - z.eta) / np.sqrt(2)
        if self.filter_vals is not None:
            force = self.filter_vals * self._wave_force(self.filter_vals * q)
        else:
            force = self._wave_force(q)
        p = p - h * force
        return State(z.index_set, (q + 1j * p) / np.sqrt(2),
                     (q - 1j * p) / np.sqrt(2))


def _integrate_pointwise(u, v, h, nonlin: NonlinearSpec, tol: float):
    """Exact-substep ODE u' = -i d2g(u,v), v' = +i d1g(u,v), vectorized."""
    n = len(u)

    def rhs(t, y):
        uu = y[:n] + 1j * y[n:2 * n]
        vv = y[2 * n:3 * n] + 1j * y[3 * n:]
        du = -1j * nonlin.d2(uu, vv)
        dv = 1j * nonlin.d1(uu, vv)
        return np.concatenate([du.real, du.imag, dv.real, dv.imag])

    y0 = np.concatenate([u.real, u.imag, v.real, v.imag])
    sol = solve_ivp(rhs, (0.0, h), y0, method="DOP853", rtol=tol, atol=tol)
    if not sol.success:
        raise SubstepFailureError(sol.message)
    y = sol.y[:, -1]
    return y[:n] + 1j * y[n:2 * n], y[2 * n:3 * n] + 1j * y[3 * n:]


def nls_model(K: int, Vhat, nonlin: NonlinearSpec) -> FrequencyModel:
    """NLS on the torus: omega_a = a^2 + Vhat(a) on the shifted box."""
    s = build_index_set("shifted_box", K, 1)
    if callable(Vhat):
        V = np.array([Vhat(a) for (a,) in s.modes], dtype=float)
    else:
        V = np.array([Vhat.get(a, 0.0) for (a,) in s.modes], dtype=float)
    a = np.array([a for (a,) in s.modes], dtype=float)
    return FrequencyModel(kind="nls", index_set=s, omega=a * a + V, m=2,
                          nonlin=nonlin)


def nls_nonlinear_flow(u: PhysicalField, h: float,
                       nonlin: NonlinearSpec) -> PhysicalField:
    """Gauge substep on a real-state field: pointwise phase rotation."""
    if not nonlin.is_gauge:
        raise ValueError("use general_nonlinear_substep for non-gauge g")
    s = np.abs(u.samples) ** 2
    return PhysicalField(np.exp(-1j * h * nonlin.Gp(s).real) * u.samples,
                         u.index_set)


def general_nonlinear_substep(u: PhysicalField, h: float,
                              nonlin: NonlinearSpec,
                              tol: float) -> PhysicalField:
    """Substep on a real-state field via the pointwise ODE (v = conj u)."""
    u2, _ = _integrate_pointwise(u.samples, np.conj(u.samples), h, nonlin, tol)
    return PhysicalField(u2, u.index_set)


def wave_model(K: int, m: float, g: Callable,
               G: Optional[Callable] = None,
               n_points: Optional[int] = None) -> FrequencyModel:
    """Wave equation on the circle, restricted to the even (cosine) subspace.

    omega_a = sqrt(a^2 + m) on a = 0..K; the nonlinearity is
    P(q) = integral of G(A^{-1/2} q) evaluated by trapezoid quadrature on an
    equidistant grid.  With m = 0 the singular a = 0 factor of A^{-1/2} is
    replaced by the identity.
    """
    if m < 0:
        raise ValueError("mass m must be >= 0")
    s = build_index_set("nonneg_box", K, 1)
    a = np.arange(K + 1, dtype=float)
    omega = np.sqrt(a * a + m)
    scale = np.empty(K + 1)
    nz = omega > 0
    scale[nz] = omega[nz] ** -0.5
    scale[~nz] = 1.0
    M = n_points or 4 * (K + 1)
    x = 2 * np.pi * np.arange(M) / M
    basis = np.empty((M, K + 1))
    basis[:, 0] = (2 * np.pi) ** -0.5
    for k in range(1, K + 1):
        basis[:, k] = np.cos(k * x) / np.sqrt(np.pi)
    if G is None:
        G = _primitive_of(g)
    return FrequencyModel(kind="wave", index_set=s, omega=omega, m=1,
                          wave_g=g, wave_G=G, wave_scale=scale,
                          wave_basis=basis, wave_weight=2 * np.pi / M)


def _primitive_of(g: Callable) -> Callable:
    from scipy.integrate import quad

    def G(w):
        w = np.asarray(w, dtype=float)
        return np.array([quad(g, 0.0, wi)[0] for wi in np.ravel(w)]
                        ).reshape(w.shape)

    return G


def wave_uv_to_state(model: FrequencyModel, u_coeffs, v_coeffs) -> State:
    """(u, v) cosine coefficients -> z = (xi, eta) via q = A^{1/2}u, p = A^{-1/2}v."""
    u_coeffs = np.asarray(u_coeffs, dtype=complex)
    v_coeffs = np.asarray(v_coeffs, dtype=complex)
    q = u_coeffs / model.wave_scale
    p = model.wave_scale * v_coeffs
    return State(model.index_set, (q + 1j * p) / np.sqrt(2),
                 (q - 1j * p) / np.sqrt(2))


def wave_state_to_uv(model: FrequencyModel, z: State):
    q = (z.xi + z.eta) / np.sqrt(2)
    p = -1j * (z.xi - z.eta) / np.sqrt(2)
    return model.wave_scale * q, p / model.wave_scale


def apply_mollifier(model: FrequencyModel, h: float,
                    Phi: Callable) -> FrequencyModel:
    """Model whose nonlinear substep is the flow of P(Phi(h Omega) z)."""
    return model.with_filter(Phi, h)
