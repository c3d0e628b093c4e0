"""Fock spaces: states, module shapes and elementary operators.

A state is a tensor of three commuting factors:

* a Heisenberg monomial -- a multiset of oscillator factors (i, r) with
  node 1 <= i <= n and mode r < 0 (the symmetric algebra half),
* a lattice point -- integer coordinates over the finite simple roots,
  optionally shifted by the symbolic weight coset ``ln`` whose only
  nonzero pairing is with the odd root,
* a Clifford monomial -- a strictly decreasing tuple of negative modes
  of one deformed fermion.  Modes live on the half-integer grid in the
  NS sector and on the integer grid in the Ramond sector, and are
  stored doubled so that everything is an int.  The Ramond zero mode
  acts as the identity and is never stored.

Central-extension signs and all operator prefactors are carried by the
coefficients of ``FockVector``; a state itself is a pure basis label.

``ModuleShape`` fixes the shape of one level-1 module: which sector
the fermion lives in, which vertex-operator nodes carry the fermionic
current, whether the Clifford parity is locked to the lattice (the
parity-linked vacuum of the twisted sl family), and which coset the
lattice sits on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .rootdata import AlgebraKind, Normalisation, RootDatum
from .scalars import SF_ONE, SFrac, Scalar, minus_one_pow

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FockState:
    """Basis label: Heisenberg multiset x lattice point x Clifford word."""

    heis: Tuple[Tuple[int, int], ...] = ()   # sorted (node, mode<0) pairs
    lat: Tuple[int, ...] = ()                # simple-root coordinates
    coset: Optional[str] = None              # None or "ln"
    cliff: Tuple[int, ...] = ()              # doubled modes, strictly decreasing

    def __post_init__(self):
        assert all(r < 0 for _, r in self.heis)
        assert tuple(sorted(self.heis)) == self.heis
        assert all(d < 0 for d in self.cliff)
        assert tuple(sorted(self.cliff, reverse=True)) == self.cliff

    def heis_degree(self) -> int:
        return sum(-r for _, r in self.heis)

    def cliff_degree(self) -> Fraction:
        return Fraction(sum(-d for d in self.cliff), 2)

    def cliff_parity(self) -> int:
        return len(self.cliff) % 2

    def sort_key(self):
        return (self.heis, self.lat, self.coset or "", self.cliff)

    def render(self) -> str:
        heis = "*".join(f"k[{i},{r}]" for i, r in self.heis) or "1"
        lat = ",".join(str(c) for c in self.lat)
        coset = "+ln" if self.coset == "ln" else ""
        cliff = "*".join(f"c[{Fraction(d, 2)}]" for d in self.cliff) or "1"
        return f"{heis}|e({lat}{coset})|{cliff}"


class FockVector:
    """Finite linear combination of states with SFrac coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[FockState, SFrac]] = None):
        self.terms = {s: c for s, c in (terms or {}).items() if c}

    @classmethod
    def unit(cls, state: FockState, coeff: SFrac = SF_ONE) -> "FockVector":
        return cls({state: coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.terms == other.terms

    def add_term(self, state: FockState, coeff: SFrac) -> None:
        cur = self.terms.get(state)
        if cur is None:
            if coeff:
                self.terms[state] = coeff
        else:
            cur = cur + coeff
            if cur:
                self.terms[state] = cur
            else:
                del self.terms[state]

    def __add__(self, other: "FockVector") -> "FockVector":
        out = FockVector(dict(self.terms))
        for s, c in other.terms.items():
            out.add_term(s, c)
        return out

    def __sub__(self, other: "FockVector") -> "FockVector":
        out = FockVector(dict(self.terms))
        for s, c in other.terms.items():
            out.add_term(s, -c)
        return out

    def __neg__(self) -> "FockVector":
        return FockVector({s: -c for s, c in self.terms.items()})

    def scale(self, coeff: SFrac) -> "FockVector":
        if not coeff:
            return FockVector()
        return FockVector({s: c * coeff for s, c in self.terms.items()})

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c.render()}) {s.render()}"
                          for s, c in self.items_sorted())

    def __repr__(self) -> str:
        return f"FockVector[{self.render()}]"


VACUUM = FockState()


# ---------------------------------------------------------------------------
# module shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModuleShape:
    """Shape of one level-1 module for a given algebra family."""

    kind: AlgebraKind
    n: int
    variant: str                       # vacuum | vacuum-q | l1 | ln
    fermion_nodes: frozenset = frozenset()
    sector: Optional[str] = None       # None | "NS" | "R"
    parity_linked: bool = False        # Clifford parity locked to c_n mod 2
    parity_offset: int = 0             # 0: parity == c_n; 1: parity == c_n + 1
    coset: Optional[str] = None        # None | "ln"
    hw_lat: Tuple[int, ...] = ()       # lattice point of the hw vector

    @classmethod
    def make(cls, kind: AlgebraKind, n: int, variant: str,
             fermion_nodes: Optional[Iterable[int]] = None) -> "ModuleShape":
        """Default shapes; fermion_nodes may be overridden for experiments."""
        kind = AlgebraKind(kind)
        zeros = (0,) * n
        if variant in ("vacuum", "vacuum-q"):
            if kind is AlgebraKind.SL:
                shape = dict(sector="NS", parity_linked=True,
                             fermion_nodes=frozenset({n}))
            else:
                shape = dict(sector=None, fermion_nodes=frozenset())
            coset, hw = None, zeros
        elif variant == "l1":
            if kind is not AlgebraKind.OSP2:
                raise ValueError("variant l1 is defined for osp2 only")
            # lambda_1 = a_1 + ... + a_n lies in the root lattice; the
            # even Clifford part sits on the shifted coset (c_n odd),
            # the opposite linkage to the twisted-sl vacuum.
            shape = dict(sector="NS", parity_linked=True, parity_offset=1,
                         fermion_nodes=frozenset({n}))
            coset, hw = None, (1,) * n
        elif variant == "ln":
            if kind is AlgebraKind.OSP1:
                raise ValueError("variant ln is defined for sl/osp2 only")
            # Ramond fermions over the shifted lattice coset.  A pure
            # lattice model cannot carry this module: the single-pole
            # kernel of e^{a} z^{a} alone never reproduces the two
            # shifted delta supports of the mixed bracket.
            shape = dict(sector="R", fermion_nodes=frozenset({n}))
            coset, hw = "ln", zeros
        else:
            raise ValueError(f"unknown variant {variant!r}")
        if fermion_nodes is not None:
            shape["fermion_nodes"] = frozenset(fermion_nodes)
        return cls(kind=kind, n=n, variant=variant, coset=coset, hw_lat=hw,
                   parity_linked=shape.get("parity_linked", False),
                   parity_offset=shape.get("parity_offset", 0),
                   sector=shape.get("sector"),
                   fermion_nodes=shape["fermion_nodes"])

    def hw_state(self) -> FockState:
        return FockState(lat=self.hw_lat, coset=self.coset)

    def admissible(self, state: FockState) -> bool:
        if not self.parity_linked:
            return True
        return state.cliff_parity() == \
            (state.lat[self.n - 1] + self.parity_offset) % 2

    def cliff_modes(self) -> Optional[int]:
        """Doubled-mode step of the sector grid (None without fermions)."""
        if self.sector is None:
            return None
        return 1 if self.sector == "NS" else 2


# ---------------------------------------------------------------------------
# lattice geometry
# ---------------------------------------------------------------------------

def pairing(datum: RootDatum, state: FockState, i: int) -> Fraction:
    """(a_i, b) where b is the state's lattice point including its coset."""
    out = sum((Fraction(c) * datum.gram(i, j + 1)
               for j, c in enumerate(state.lat)), Fraction(0))
    if state.coset == "ln" and i == datum.n:
        out += datum.gram(datum.n, datum.n) / 2
    return out


def z_exponent(datum: RootDatum, state: FockState, i: int, sign: int) -> Fraction:
    """Fixed z-power of the lattice factor of the node-i vertex operator."""
    return sign * pairing(datum, state, i) + datum.length(i) / 2


def sigma_sign(datum: RootDatum, state: FockState, i: int) -> Scalar:
    """Eigenvalue of the node sign operator: (-1)^((a_i, b)).

    The exponent is the pairing in the unit normalisation, so the sign
    stays fermionic on the odd node even when the stored Gram matrix is
    doubled.
    """
    return minus_one_pow(pairing(datum, state, i) / datum.scale)


def phi_sign(datum: RootDatum, state: FockState, i: int) -> Scalar:
    """Eigenvalue of the tail sign operator (product of sigma_k, k >= i)."""
    tot = sum((pairing(datum, state, k) for k in range(i, datum.n + 1)),
              Fraction(0))
    return minus_one_pow(tot / datum.scale)


def shifted(state: FockState, i: int, sign: int) -> FockState:
    lat = list(state.lat)
    lat[i - 1] += sign
    return FockState(state.heis, tuple(lat), state.coset, state.cliff)


# ---------------------------------------------------------------------------
# Heisenberg operators
# ---------------------------------------------------------------------------

def heis_contraction(datum: RootDatum, i: int, j: int, s: int,
                     base: str = "wp") -> SFrac:
    """Pairing value of the positive mode (i, s) against kappa_{j,-s}.

        u_{i,j,s} (c^s - c^-s) / (s (q_i - q_i^-1)(q_j - q_j^-1))

    with c = wp for the twisted-parameter construction and c = q for
    the plain-q variant.
    """
    assert s > 0
    u = datum.u_coeff(i, j, s)
    if not u:
        return SFrac.of_scalar(Scalar.zero())
    c_pow = datum.wp_pow(s) if base == "wp" else Scalar.q_power(s)
    c_neg = datum.wp_pow(-s) if base == "wp" else Scalar.q_power(-s)
    qi, qj = datum.q_i(i), datum.q_i(j)
    den = (qi - qi.inverse_if_unit()) * (qj - qj.inverse_if_unit())
    den = den * Scalar.of(s)
    return SFrac(u * (c_pow - c_neg), den)


def apply_heisenberg(datum: RootDatum, i: int, s: int, vec: FockVector,
                     base: str = "wp", contraction=None) -> FockVector:
    """Mode s of the node-i Heisenberg field.

    Negative s multiplies by the oscillator kappa_{i,s}; positive s is
    the derivation whose contraction with kappa_{j,-s} is
    ``heis_contraction`` (or the supplied override, used by the
    mutation-sensitivity layer to corrupt one structure constant).
    """
    if s == 0:
        raise ValueError("Heisenberg modes are nonzero")
    if not datum.mode_allowed(i, s):
        raise ValueError(f"mode ({i},{s}) is not present in this family")
    out = FockVector()
    if s < 0:
        for state, coeff in vec.terms.items():
            heis = tuple(sorted(state.heis + ((i, s),)))
            out.add_term(FockState(heis, state.lat, state.coset, state.cliff),
                         coeff)
        return out
    for state, coeff in vec.terms.items():
        seen = set()
        for idx, (j, r) in enumerate(state.heis):
            if r != -s or (j, r) in seen:
                continue
            seen.add((j, r))
            mult = sum(1 for p in state.heis if p == (j, r))
            if contraction is not None:
                val = contraction(i, j, s)
            else:
                val = heis_contraction(datum, i, j, s, base)
            if not val:
                continue
            rest = list(state.heis)
            rest.pop(idx)
            new = FockState(tuple(rest), state.lat, state.coset, state.cliff)
            out.add_term(new, coeff * val.mul_scalar(Scalar.of(mult)))
    return out


# ---------------------------------------------------------------------------
# Clifford operators
# ---------------------------------------------------------------------------

def cliff_contraction(half_param: Scalar, d: int) -> Scalar:
    """Anticommutator value at doubled mode d: p^(d/2) + p^(-d/2).

    ``half_param`` is the fixed square root of the deformation base, so
    the half-integer powers of the NS sector are well defined.
    """
    inv = half_param.inverse_if_unit()
    return half_param ** abs(d) + inv ** abs(d)


def apply_clifford_mode(shape: ModuleShape, half_param: Scalar, d: int,
                        vec: FockVector) -> FockVector:
    """Mode d/2 of the fermion: d < 0 creates, d > 0 annihilates.

    d = 0 exists only in the Ramond sector and acts as the identity.
    Creation into an occupied mode gives 0 (exterior algebra); both
    actions carry the Koszul sign of the crossing.
    """
    step = shape.cliff_modes()
    if step is None:
        raise ValueError("module has no fermionic factor")
    if d % 2 != step % 2 and not (d == 0 and step == 2):
        raise ValueError(f"mode {Fraction(d,2)} off the {shape.sector} grid")
    if d == 0:
        if step != 2:
            raise ValueError("zero mode exists in the Ramond sector only")
        return FockVector(dict(vec.terms))
    out = FockVector()
    for state, coeff in vec.terms.items():
        word = state.cliff
        if d < 0:
            if d in word:
                continue
            pos = sum(1 for m in word if m > d)
            new_word = word[:pos] + (d,) + word[pos:]
            sign = -1 if pos % 2 else 1
            new = FockState(state.heis, state.lat, state.coset, new_word)
            out.add_term(new, coeff.mul_scalar(Scalar.of(sign)))
        else:
            target = -d
            if target not in word:
                continue
            pos = word.index(target)
            new_word = word[:pos] + word[pos + 1:]
            val = cliff_contraction(half_param, d)
            if pos % 2:
                val = -val
            new = FockState(state.heis, state.lat, state.coset, new_word)
            out.add_term(new, coeff.mul_scalar(val))
    return out


# ---------------------------------------------------------------------------
# basis enumeration
# ---------------------------------------------------------------------------

def _heis_monomials(datum: RootDatum, max_deg: int) -> List[Tuple[Tuple[int, int], ...]]:
    modes = [(i, -r) for i in range(1, datum.n + 1)
             for r in range(1, max_deg + 1) if datum.mode_allowed(i, -r)]

    out: List[Tuple[Tuple[int, int], ...]] = []

    def rec(idx: int, remaining: int, acc: List[Tuple[int, int]]):
        out.append(tuple(sorted(acc)))
        for k in range(idx, len(modes)):
            i, r = modes[k]
            if -r <= remaining:
                acc.append((i, r))
                rec(k, remaining + r, acc)
                acc.pop()

    rec(0, max_deg, [])
    return sorted(set(out))


def _cliff_words(shape: ModuleShape, max_deg: int) -> List[Tuple[int, ...]]:
    step = shape.cliff_modes()
    if step is None:
        return [()]
    first = -2 if step == 2 else -1
    modes = [d for d in range(first, -2 * max_deg - 1, -2)]
    out: List[Tuple[int, ...]] = []
    for size in range(len(modes) + 1):
        for combo in itertools.combinations(modes, size):
            if sum(-d for d in combo) <= 2 * max_deg:
                out.append(tuple(sorted(combo, reverse=True)))
    return sorted(set(out))


def enumerate_basis(datum: RootDatum, shape: ModuleShape, heis_deg: int,
                    lat_bound: int, cliff_deg: int) -> List[FockState]:
    """Deterministic admissible basis within the given bounds.

    Bounds: Heisenberg weight <= heis_deg, each lattice coordinate in
    [-lat_bound, lat_bound], Clifford weight <= cliff_deg.  The
    parity-linked constraint of the twisted sl vacuum is enforced.
    """
    heis = _heis_monomials(datum, heis_deg)
    lats = itertools.product(range(-lat_bound, lat_bound + 1), repeat=datum.n)
    cliffs = _cliff_words(shape, cliff_deg)
    out = []
    for lat in lats:
        for cw in cliffs:
            st = FockState((), lat, shape.coset, cw)
            if not shape.admissible(st):
                continue
            for h in heis:
                out.append(FockState(h, lat, shape.coset, cw))
    return sorted(out, key=FockState.sort_key)
