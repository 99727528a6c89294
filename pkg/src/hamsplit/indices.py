"""Lattice mode sets, signed indices, multi-indices and frequency combinations.

Modes are d-tuples of integers. A signed index attaches +1 (xi-type) or -1
(eta-type) to a mode; a multi-index is an unordered collection of signed
indices, stored canonically sorted so that identification "up to a
permutation" is plain equality.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

Mode = Tuple[int, ...]
ModeLike = Union[int, Sequence[int]]

VALID_KINDS = ("box", "shifted_box", "sparse", "nonneg_box")


def as_mode(a: ModeLike) -> Mode:
    """Canonicalize an int (d=1 shorthand) or sequence into a mode tuple."""
    if isinstance(a, (int,)):
        return (a,)
    return tuple(int(x) for x in a)


def sup_norm(a: ModeLike) -> int:
    return max(abs(x) for x in as_mode(a))


@dataclass(frozen=True)
class IndexSet:
    """A finite, deterministically ordered set of lattice modes."""

    kind: str
    K: int
    d: int
    modes: Tuple[Mode, ...]

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"unknown index set kind {self.kind!r}")
        if self.K < 1 or self.d < 1:
            raise ValueError("K and d must be >= 1")

    def __len__(self) -> int:
        return len(self.modes)

    def __contains__(self, a: ModeLike) -> bool:
        return as_mode(a) in self.position

    def __iter__(self):
        return iter(self.modes)

    @property
    def position(self) -> dict:
        """Mode -> index into the ordered mode list (cached)."""
        pos = self.__dict__.get("_position")
        if pos is None:
            pos = {m: i for i, m in enumerate(self.modes)}
            self.__dict__["_position"] = pos
        return pos

    def index_of(self, a: ModeLike) -> int:
        m = as_mode(a)
        try:
            return self.position[m]
        except KeyError:
            raise ValueError(f"mode {m} not in index set") from None


def build_index_set(kind: str, K: int, d: int) -> IndexSet:
    """Build the box [-K..K]^d, the shifted box [-K..K-1]^d, the nonnegative
    box [0..K]^d, or the hyperbolic cross, ordered lexicographically."""
    if K < 1 or d < 1:
        raise ValueError("K and d must be >= 1")
    if kind == "box":
        ranges = [range(-K, K + 1)] * d
        modes = list(itertools.product(*ranges))
    elif kind == "shifted_box":
        ranges = [range(-K, K)] * d
        modes = list(itertools.product(*ranges))
    elif kind == "nonneg_box":
        ranges = [range(0, K + 1)] * d
        modes = list(itertools.product(*ranges))
    elif kind == "sparse":
        box = itertools.product(*([range(-K, K + 1)] * d))
        modes = [a for a in box
                 if _prod(1 + abs(x) for x in a) <= K]
    else:
        raise ValueError(f"unknown index set kind {kind!r}")
    modes.sort()
    return IndexSet(kind=kind, K=K, d=d, modes=tuple(modes))


def _prod(xs: Iterable[int]) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


@dataclass(frozen=True, order=True)
class SignedIndex:
    """A mode with a sign: +1 selects xi_a, -1 selects eta_a."""

    a: Mode
    delta: int

    def __post_init__(self):
        if self.delta not in (1, -1):
            raise ValueError("delta must be +1 or -1")
        object.__setattr__(self, "a", as_mode(self.a))

    @property
    def conj(self) -> "SignedIndex":
        return SignedIndex(self.a, -self.delta)

    def __abs__(self) -> int:
        return sup_norm(self.a)


@dataclass(frozen=True)
class MultiIndex:
    """A canonical (sorted) tuple of signed indices."""

    entries: Tuple[SignedIndex, ...]

    def __post_init__(self):
        entries = tuple(sorted(
            e if isinstance(e, SignedIndex) else SignedIndex(*e)
            for e in self.entries))
        # the empty multi-index (degree 0) labels the constant monomial
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *pairs) -> "MultiIndex":
        """Build from (mode, delta) pairs; ints are d=1 modes."""
        return cls(tuple(SignedIndex(as_mode(a), d) for a, d in pairs))

    @property
    def degree(self) -> int:
        return len(self.entries)

    @property
    def conj(self) -> "MultiIndex":
        return MultiIndex(tuple(e.conj for e in self.entries))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def omega_of(j: MultiIndex, freqs) -> float:
    """Signed frequency sum Omega(j) = sum_i delta_i * omega_{a_i}.

    Antisymmetric under conjugation; raises if a mode is outside the
    model's index set.
    """
    return sum(e.delta * freqs.omega_at(e.a) for e in j)


def momentum_of(j: MultiIndex) -> Mode:
    """Signed mode sum, the quantity conserved by convolution nonlinearities."""
    if not j.entries:
        return ()
    d = len(j.entries[0].a)
    total = [0] * d
    for e in j:
        for i, x in enumerate(e.a):
            total[i] += e.delta * x
    return tuple(total)


def is_action_class(j: MultiIndex) -> bool:
    """True iff the entries pair up as (a,+1),(a,-1); empty for odd degree."""
    if j.degree % 2 != 0:
        return False
    net: dict = {}
    for e in j:
        net[e.a] = net.get(e.a, 0) + e.delta
    return all(v == 0 for v in net.values())
