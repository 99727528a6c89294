"""Small divisors |1 - e^{ih Omega}|, non-resonance certification, resonant
step sizes, and empirical bad-set measure estimation."""
from __future__ import annotations

import csv
import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import BudgetExceededError
from .indices import (MultiIndex, SignedIndex, as_mode, is_action_class,
                      omega_of)
from .models import FrequencyModel

OMEGA_DEDUP_TOL = 1e-12
DEFAULT_BUDGET = 10_000_000


def small_divisor(h: float, Omega: float) -> float:
    """|1 - e^{ih Omega}| = 2 |sin(h Omega / 2)|."""
    return 2.0 * abs(np.sin(0.5 * h * Omega))


@dataclass
class OmegaClassTable:
    """Distinct Omega values over non-action multi-indices of fixed order."""

    r: int
    K: int
    values: np.ndarray                  # sorted distinct Omega values
    representatives: List[MultiIndex]   # one canonical class per value
    n_classes: int                      # multiset classes scanned (non-action)
    complete: bool = True

    def zero_divisor_classes(self, tol: float = OMEGA_DEDUP_TOL):
        """Non-action classes whose Omega vanishes exactly (the ambiguous
        symmetric classes, e.g. ((-a,+1),(a,-1)) for even frequencies)."""
        return [rep for val, rep in zip(self.values, self.representatives)
                if abs(val) <= tol]


@dataclass
class DivisorReport:
    r: int
    K: int
    h: float
    alpha_star: float
    gamma_star_min: float
    argmin: Optional[MultiIndex]
    n_classes: int
    gamma_star_min_excluding_zero: float = 0.0
    n_zero_omega_classes: int = 0

    def to_json(self) -> str:
        def fmt(j):
            return None if j is None else [[list(e.a), e.delta] for e in j]

        return json.dumps({
            "r": self.r, "K": self.K, "h": self.h,
            "alpha_star": self.alpha_star,
            "gamma_star_min": self.gamma_star_min,
            "gamma_star_min_excluding_zero":
                self.gamma_star_min_excluding_zero,
            "n_zero_omega_classes": self.n_zero_omega_classes,
            "argmin": fmt(self.argmin),
            "n_classes": self.n_classes,
        }, indent=2, sort_keys=True)


def iter_multiindices(freqs: FrequencyModel, r: int, budget: int):
    """Canonical multi-indices (multisets) of order r over Z_K."""
    signed = [SignedIndex(a, d) for a in freqs.index_set.modes
              for d in (1, -1)]
    signed.sort()
    count = 0
    for combo in itertools.combinations_with_replacement(signed, r):
        count += 1
        if count > budget:
            raise BudgetExceededError(
                f"multiset enumeration exceeded budget {budget}")
        yield MultiIndex(combo)


def build_omega_classes(freqs: FrequencyModel, r: int, K: Optional[int] = None,
                        budget: int = DEFAULT_BUDGET) -> OmegaClassTable:
    """Enumerate non-action multisets, dedupe by Omega value."""
    K = K if K is not None else freqs.index_set.K
    reps: Dict[int, MultiIndex] = {}
    values: List[float] = []
    n_classes = 0
    complete = True
    try:
        for j in iter_multiindices(freqs, r, budget):
            if is_action_class(j):
                continue
            n_classes += 1
            om = omega_of(j, freqs)
            key = round(om / OMEGA_DEDUP_TOL)
            if key not in reps:
                reps[key] = j
                values.append(om)
    except BudgetExceededError:
        complete = False
    order = np.argsort(values)
    vals = np.array(values)[order] if values else np.array([])
    rep_list = list(reps.values())
    representatives = [rep_list[i] for i in order]
    table = OmegaClassTable(r=r, K=K, values=vals,
                            representatives=representatives,
                            n_classes=n_classes, complete=complete)
    if not complete:
        raise BudgetExceededError(partial=table)
    return table


def certify_hypothesis1(freqs: FrequencyModel, r: int, K: Optional[int],
                        h: float, alpha_star: float,
                        budget: int = DEFAULT_BUDGET) -> DivisorReport:
    """Worst-case certified constant gamma* = min K^{alpha*} |1-e^{ih Omega}|/h.

    A zero value certifies an exact resonance for this (h, K, r); the report
    also carries the minimum over classes with Omega != 0 so the stricter
    reading of the action-class definition can be applied.
    """
    table = build_omega_classes(freqs, r, K, budget)
    K = table.K
    scalefac = K ** alpha_star / h
    best = np.inf
    best_nonzero = np.inf
    argmin = None
    for om, rep in zip(table.values, table.representatives):
        val = scalefac * small_divisor(h, om)
        if val < best:
            best, argmin = val, rep
        if abs(om) > OMEGA_DEDUP_TOL and val < best_nonzero:
            best_nonzero = val
    if argmin is None:
        best = best_nonzero = 0.0
    return DivisorReport(
        r=r, K=K, h=h, alpha_star=alpha_star,
        gamma_star_min=float(best), argmin=argmin,
        n_classes=table.n_classes,
        gamma_star_min_excluding_zero=float(best_nonzero),
        n_zero_omega_classes=len(table.zero_divisor_classes()))


def find_resonant_h(freqs: FrequencyModel, a, b) -> float:
    """h = 2 pi / (omega_b - omega_a), the step that makes the (b,+1),(a,-1)
    frequency combination a numerical resonance."""
    wa = freqs.omega_at(as_mode(a))
    wb = freqs.omega_at(as_mode(b))
    if wa == wb:
        raise ZeroDivisionError(
            f"modes {a} and {b} have equal frequencies {wa}")
    return 2 * np.pi / (wb - wa)


@dataclass
class ScanReport:
    h_values: np.ndarray
    min_divisors: np.ndarray           # min over classes of |1 - e^{ih Omega}|
    argmin_classes: List[MultiIndex]
    flagged: np.ndarray                # condition (gamma*, alpha*) violated
    gamma_star: float
    alpha_star: float
    K: int
    r: int

    @property
    def flagged_fraction(self) -> float:
        return float(np.mean(self.flagged)) if len(self.flagged) else 0.0

    @property
    def standard_error(self) -> float:
        n = len(self.flagged)
        p = self.flagged_fraction
        return float(np.sqrt(p * (1 - p) / n)) if n else 0.0

    @property
    def flagged_intervals(self) -> List[Tuple[float, float]]:
        """Endpoints of maximal runs of consecutive flagged samples."""
        out = []
        hs = self.h_values
        start = None
        for i, f in enumerate(self.flagged):
            if f and start is None:
                start = hs[i]
            elif not f and start is not None:
                out.append((float(start), float(hs[i - 1])))
                start = None
        if start is not None:
            out.append((float(start), float(hs[-1])))
        return out

    def write_csv(self, path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["h", "min_divisor", "argmin_class", "flagged"])
            for h, d, j, fl in zip(self.h_values, self.min_divisors,
                                   self.argmin_classes, self.flagged):
                cls = ";".join(f"{e.a[0] if len(e.a) == 1 else e.a}"
                               f":{e.delta:+d}" for e in j)
                w.writerow([f"{h:.17e}", f"{d:.17e}", cls, int(fl)])

    def summary_json(self) -> str:
        return json.dumps({
            "K": self.K, "r": self.r,
            "gamma_star": self.gamma_star, "alpha_star": self.alpha_star,
            "n_samples": int(len(self.h_values)),
            "flagged_fraction": self.flagged_fraction,
            "standard_error": self.standard_error,
            "flagged_intervals": self.flagged_intervals,
        }, indent=2, sort_keys=True)


def scan_h(freqs: FrequencyModel, r: int, K: Optional[int], h_max: float,
           alpha_star: float, gamma_star: float, n_samples: int,
           seed: int = 0, budget: int = DEFAULT_BUDGET) -> ScanReport:
    """Monte-Carlo estimate of the measure of step sizes violating the
    small-divisor bound with the given constants."""
    if n_samples < 100:
        raise ValueError("n_samples must be >= 100")
    table = build_omega_classes(freqs, r, K, budget)
    K = table.K
    rng = np.random.default_rng(seed)
    hs = np.sort(rng.uniform(0.0, h_max, n_samples))
    hs = hs[hs > 0]
    omegas = table.values
    divisors = 2.0 * np.abs(np.sin(0.5 * np.outer(hs, omegas)))
    idx = np.argmin(divisors, axis=1)
    min_div = divisors[np.arange(len(hs)), idx]
    flagged = min_div < hs * gamma_star / K ** alpha_star
    return ScanReport(
        h_values=hs, min_divisors=min_div,
        argmin_classes=[table.representatives[i] for i in idx],
        flagged=flagged, gamma_star=gamma_star, alpha_star=alpha_star,
        K=K, r=r)
