"""Discrete homological-equation solver and Birkhoff-style normalization of
the splitting map at tiny dimension, with numerical order verification.

The conjugacy is built degree by degree: with tau the time-1 flow of the
generator chi, the operator identity

    exp(-L_{hZ}) exp(L_chi) exp(L_{hP}) exp(-L_{chi'}) = Id   (chi' = chi o phi_H0^h)

is enforced in the graded algebra up to degree r.  The logarithm of the left
side, computed in the truncated algebra, supplies the degree-l right-hand
side for the homological equation

    chi o phi_H0^h - chi + hZ = h rhs.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ResonanceError
from .indices import (MultiIndex, SignedIndex, is_action_class, omega_of)
from .models import FrequencyModel
from .poly import Polynomial, poisson_bracket
from .spectral import State
from . import integrator


def taylor_P(model: FrequencyModel, r: int) -> Polynomial:
    """Exact Taylor coefficients of the collocation nonlinearity P^(K).

    For a polynomial g(u,v) the aliased convolution structure gives, for the
    monomial xi_{a_1}..xi_{a_p} eta_{b_1}..eta_{b_q},

        coeff = c_{pq} (2 pi)^{1-(p+q)/2} [sum a - sum b = 0 mod 2K] x (arrangements)
    """
    s = model.index_set
    if s.kind != "shifted_box" or s.d != 1:
        raise ValueError("taylor_P requires the d=1 shifted-box NLS model")
    if model.nonlin is None:
        raise ValueError("model has no polynomial nonlinearity")
    K = s.K
    if K > 4 or r > 6:
        raise ValueError("dense Taylor expansion limited to K <= 4, r <= 6")
    modes = [a for (a,) in s.modes]
    coeffs: Dict[MultiIndex, complex] = {}
    for (p, q), c in model.nonlin.terms:
        deg = p + q
        if deg < 3 or deg > r:
            continue
        base = c * (2 * np.pi) ** (1 - deg / 2)
        for ums in itertools.combinations_with_replacement(modes, p):
            for vms in itertools.combinations_with_replacement(modes, q):
                if (sum(ums) - sum(vms)) % (2 * K) != 0:
                    continue
                j = MultiIndex(tuple(SignedIndex((a,), 1) for a in ums)
                               + tuple(SignedIndex((b,), -1) for b in vms))
                w = base * _arrangements(ums) * _arrangements(vms)
                coeffs[j] = coeffs.get(j, 0.0) + w
    return Polynomial(r, coeffs)


def _arrangements(ms: Tuple[int, ...]) -> int:
    """Number of ordered tuples collapsing to this multiset."""
    n = math.factorial(len(ms))
    for m in set(ms):
        n //= math.factorial(ms.count(m))
    return n


@dataclass
class HomologicalSolution:
    chi: Polynomial
    Z: Polynomial
    min_divisor: float
    divisors_used: int


def solve_homological(ell: int, rhs: Polynomial, h: float,
                      freqs: FrequencyModel,
                      divisor_floor: float) -> Tuple[Polynomial, Polynomial]:
    """Split a homogeneous degree-ell rhs into (chi_ell, Z_ell).

    Action classes go to Z untouched; the rest are divided by the small
    divisor e^{-ih Omega(j)} - 1 (the phase a monomial picks up under the
    implemented linear flow).  Raises ResonanceError when a needed divisor
    falls below divisor_floor.
    """
    if any(j.degree != ell for j in rhs.coeffs):
        raise ValueError(f"rhs must be homogeneous of degree {ell}")
    chi: Dict[MultiIndex, complex] = {}
    Z: Dict[MultiIndex, complex] = {}
    for j, c in rhs.coeffs.items():
        if is_action_class(j):
            Z[j] = c
        else:
            div = np.exp(-1j * h * omega_of(j, freqs)) - 1.0
            if abs(div) < divisor_floor:
                raise ResonanceError(j, abs(div))
            chi[j] = h * c / div
    return (Polynomial(rhs.max_degree, chi), Polynomial(rhs.max_degree, Z))


@dataclass
class NormalFormResult:
    chi: Polynomial
    Z: Polynomial
    h: float
    K: int
    r: int
    resonance_log: List[dict] = field(default_factory=list)

    def to_json(self) -> str:
        def dump(poly: Polynomial):
            return [
                {"j": [[e.a[0], e.delta] for e in j],
                 "re": c.real, "im": c.imag}
                for j, c in sorted(poly.coeffs.items(),
                                   key=lambda kv: (kv[0].degree,
                                                   str(kv[0].entries)))]

        return json.dumps({
            "h": self.h, "K": self.K, "r": self.r,
            "chi": dump(self.chi), "Z": dump(self.Z),
            "resonance_log": self.resonance_log,
        }, indent=2, sort_keys=True)


def _exp_L(gen: Polynomial, F: Polynomial, cap: int) -> Polynomial:
    """exp(L_gen) F = F + {F,gen} + {{F,gen},gen}/2! + ... truncated."""
    out = F.truncated(cap)
    term = F.truncated(cap)
    k = 0
    while not term.is_zero():
        k += 1
        term = (1.0 / k) * poisson_bracket(term, gen, cap)
        if term.is_zero():
            break
        out = out + term
    return out


def _log_on_coordinate(apply_U: Callable[[Polynomial], Polynomial],
                       zj: Polynomial, cap: int) -> Polynomial:
    """log(U) applied to a coordinate function, via the operator-log series."""
    def V(F: Polynomial) -> Polynomial:
        return apply_U(F) - F

    out = Polynomial.zero(cap)
    term = V(zj)
    k = 1
    while not term.is_zero():
        out = out + ((-1.0) ** (k + 1) / k) * term
        term = V(term)
        k += 1
        if k > cap:
            break
    return out


def _defect_hamiltonian(chi: Polynomial, Z: Polynomial, P: Polynomial,
                        h: float, model: FrequencyModel,
                        cap: int) -> Polynomial:
    """W = log(exp(-L_hZ) exp(L_chi) exp(L_hP) exp(-L_chi')) as a Hamiltonian.

    Recovered from its action on the coordinate functions via the Euler
    identity (degree-l part of sum_a xi_a dW/dxi_a + eta_a dW/deta_a = l W).
    """
    chi_p = chi.compose_linear_flow(h, model)
    hP = h * P
    hZ = h * Z
    coord_cap = cap - 1   # {z_j, W_[cap]} has degree cap - 1

    def apply_U(F: Polynomial) -> Polynomial:
        F = _exp_L((-1.0) * chi_p, F, coord_cap)
        F = _exp_L(hP, F, coord_cap)
        F = _exp_L(chi, F, coord_cap)
        return _exp_L((-1.0) * hZ, F, coord_cap)

    W = Polynomial.zero(cap)
    for a in model.index_set.modes:
        for delta in (1, -1):
            j = MultiIndex((SignedIndex(a, delta),))
            w = _log_on_coordinate(apply_U, Polynomial.monomial(j, 1.0),
                                   coord_cap)
            # {xi_a, W} = -i dW/deta_a ; {eta_a, W} = +i dW/dxi_a
            factor_idx = MultiIndex((SignedIndex(a, -delta),))
            pref = 1j if delta == 1 else -1j
            lifted = {}
            for k, c in w.coeffs.items():
                key = MultiIndex(k.entries + factor_idx.entries)
                lifted[key] = lifted.get(key, 0.0) + pref * c
            W = W + Polynomial(cap, lifted)
    # divide each homogeneous part by its degree
    out = Polynomial.zero(cap)
    for ell in W.degrees():
        out = out + (1.0 / ell) * W.homogeneous_part(ell)
    return out


def normalize(model: FrequencyModel, r: int, h: float,
              divisor_floor: Optional[float] = None) -> NormalFormResult:
    """Degree-by-degree construction of the generator chi and normal form Z."""
    K = model.index_set.K
    if K > 2 or r > 5:
        raise ValueError("normalize is limited to tiny models (K <= 2, r <= 5)")
    if divisor_floor is None:
        divisor_floor = 1e-8 * h
    P = taylor_P(model, r)
    chi = Polynomial.zero(r)
    Z = Polynomial.zero(r)
    log: List[dict] = []
    for ell in range(3, r + 1):
        W = _defect_hamiltonian(chi, Z, P, h, model, ell)
        low = sum(W.homogeneous_part(k).sup_norm() for k in range(1, ell))
        if low > 1e-10:
            raise RuntimeError(
                f"lower-degree defect {low:.2e} survived at degree {ell}")
        rhs = (1.0 / h) * W.homogeneous_part(ell)
        try:
            chi_l, Z_l = solve_homological(ell, rhs, h, model, divisor_floor)
        except ResonanceError as err:
            err.args = (f"degree {ell}: {err.args[0]}",)
            raise
        divisors = [abs(np.exp(-1j * h * omega_of(j, model)) - 1.0)
                    for j in chi_l.coeffs]
        log.append({
            "degree": ell,
            "n_chi": len(chi_l.coeffs),
            "n_Z": len(Z_l.coeffs),
            "min_divisor": min(divisors, default=float("inf")),
        })
        chi = chi + chi_l
        Z = Z + Z_l
    return NormalFormResult(chi=chi, Z=Z, h=h, K=K, r=r, resonance_log=log)


# -- numerical order verification ------------------------------------------


def flow_of(chi: Polynomial, z: State, direction: float = 1.0,
            tol: float = 1e-12) -> State:
    """Time-1 flow of the polynomial Hamiltonian chi (backward if -1)."""
    n = len(z.index_set)

    def rhs(t, y):
        zi = State(z.index_set, y[:n] + 1j * y[n:2 * n],
                   y[2 * n:3 * n] + 1j * y[3 * n:])
        dxi, deta = chi.hamiltonian_field(zi)
        dxi, deta = direction * dxi, direction * deta
        return np.concatenate([dxi.real, dxi.imag, deta.real, deta.imag])

    y0 = np.concatenate([z.xi.real, z.xi.imag, z.eta.real, z.eta.imag])
    sol = solve_ivp(rhs, (0.0, 1.0), y0, method="DOP853", rtol=tol, atol=tol)
    if not sol.success:
        raise RuntimeError(f"generator flow integration failed: {sol.message}")
    y = sol.y[:, -1]
    return State(z.index_set, y[:n] + 1j * y[n:2 * n],
                 y[2 * n:3 * n] + 1j * y[3 * n:])


def splitting_map(model: FrequencyModel, h: float,
                  substep_tol: float = 1e-13) -> Callable[[State], State]:
    def step(z: State) -> State:
        return model.linear_flow(model.nonlinear_substep(z, h, substep_tol), h)

    return step


def conjugated_map(model: FrequencyModel, h: float,
                   nf: Optional[NormalFormResult],
                   substep_tol: float = 1e-13) -> Callable[[State], State]:
    base = splitting_map(model, h, substep_tol)
    if nf is None:
        return base

    def step(z: State) -> State:
        return flow_of(nf.chi, base(flow_of(nf.chi, z)), direction=-1.0)

    return step


def verify_order(model: FrequencyModel, nf: Optional[NormalFormResult],
                 h: float, eps_list, n_probe: int = 6,
                 seed: int = 0) -> float:
    """Log-log slope of the one-step action drift of the (conjugated)
    splitting map against the state size."""
    rng = np.random.default_rng(seed)
    n = len(model.index_set)
    # fixed probe directions reused across eps for a clean regression
    dirs = rng.standard_normal((n_probe, n)) + 1j * rng.standard_normal((n_probe, n))
    dirs = [d / State.real_from_xi(model.index_set, d).norm() for d in dirs]
    step = conjugated_map(model, h, nf)
    drifts = []
    for eps in eps_list:
        worst = 0.0
        for d in dirs:
            z = State.real_from_xi(model.index_set, eps * d)
            out = step(z)
            worst = max(worst, float(np.max(np.abs(
                out.actions() - z.actions()))))
        drifts.append(worst)
    slope = np.polyfit(np.log(np.asarray(eps_list, float)),
                       np.log(np.asarray(drifts, float)), 1)[0]
    return float(slope)
