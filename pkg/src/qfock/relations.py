"""Exact checkers for the defining relations of the loop presentation.

Every check evaluates an operator identity on a finite list of basis
states and compares both sides structurally -- there is no tolerance
parameter anywhere.  A relation instance either annihilates every test
vector (exact-zero), produces a residual (reported with the first
witness state), or is skipped because its modes fall outside the
admissible grid of the family.

Operator words are evaluated through a per-run cache keyed by
(atom, state), so large suites share the expensive vertex-operator
applications between instances.

``check_chevalley`` verifies the finite presentation (conjugation,
super-bracket against (k - k^-1)/(q_i - q_i^-1)-type right-hand sides,
and the Ad-Serre relations) for explicit matrix families, such as the
2-dimensional spinoral representation of the rank-1 subalgebra.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .fock import FockState, FockVector, enumerate_basis
from .rootdata import AlgebraKind
from .scalars import I_UNIT, SF_ONE, SFrac, Scalar, q_binomial
from .vertex import (
    Assignment, apply_gamma_i, apply_kappa, apply_kappa_hat, apply_xi,
)

HALF = Fraction(1, 2)

SERRE_FAMILIES = ("A", "B", "C", "D1", "D2", "D3", "E")


# ---------------------------------------------------------------------------
# instances and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelationInstance:
    family: str                       # HH | HX | HX-CONJ | XX | CENTRAL | SERRE-*
    indices: Tuple

    def label(self) -> str:
        return f"{self.family}{self.indices}"


@dataclass
class CheckEntry:
    instance: RelationInstance
    status: str                       # exact-zero | nonzero-residual | skipped
    witness: Optional[str] = None     # first failing state and scalar
    reason: Optional[str] = None      # skip reason
    seconds: float = 0.0

    def to_json(self) -> Dict:
        out = {"family": self.instance.family,
               "indices": list(self.instance.indices),
               "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass
class CheckReport:
    entries: List[CheckEntry] = field(default_factory=list)
    meta: Dict = field(default_factory=dict)

    def count(self, status: str) -> int:
        return sum(1 for e in self.entries if e.status == status)

    @property
    def ok(self) -> bool:
        return self.count("nonzero-residual") == 0

    def failures(self) -> List[CheckEntry]:
        return [e for e in self.entries if e.status == "nonzero-residual"]

    def summary(self) -> Dict:
        return {"total": len(self.entries),
                "exact-zero": self.count("exact-zero"),
                "nonzero-residual": self.count("nonzero-residual"),
                "skipped": self.count("skipped")}

    def to_json(self) -> str:
        return json.dumps({"meta": self.meta,
                           "instances": [e.to_json() for e in self.entries],
                           "summary": self.summary()}, indent=2)


# ---------------------------------------------------------------------------
# operator words
# ---------------------------------------------------------------------------

class OpCache:
    """Memoises single-generator applications per basis state."""

    def __init__(self, assign: Assignment):
        self.assign = assign
        self._memo: Dict[Tuple, FockVector] = {}
        self._words: Dict[Tuple, FockVector] = {}

    def _atom_on_state(self, atom: Tuple, state: FockState) -> FockVector:
        v = FockVector.unit(state)
        kind = atom[0]
        if kind == "xi":
            _, i, sign, k = atom
            return apply_xi(self.assign, i, sign, k, v)
        if kind == "kappa":
            _, i, r = atom
            return apply_kappa(self.assign, i, r, v)
        if kind == "gh":
            _, i, e = atom
            return apply_gamma_i(self.assign, i, e, v, half=True)
        if kind == "kh":
            _, i, sign, k = atom
            return apply_kappa_hat(self.assign, i, sign, k, v)
        raise ValueError(f"unknown atom {atom!r}")

    def apply_atom(self, atom: Tuple, vec: FockVector) -> FockVector:
        out = FockVector()
        for state, coeff in vec.terms.items():
            img = self._memo.get((atom, state))
            if img is None:
                img = self._atom_on_state(atom, state)
                self._memo[(atom, state)] = img
            for s2, c2 in img.terms.items():
                out.add_term(s2, c2 * coeff)
        return out

    def word_on_state(self, word: Tuple[Tuple, ...],
                      state: FockState) -> FockVector:
        """Whole-word application, memoised on (word, state).

        Words act right to left, so the recursion peels the rightmost
        atom and shares every left-prefix image between instances.
        """
        if not word:
            return FockVector.unit(state)
        key = (word, state)
        out = self._words.get(key)
        if out is None:
            out = FockVector()
            first = self.apply_atom(word[-1], FockVector.unit(state))
            rest = word[:-1]
            for s2, c2 in first.terms.items():
                img = self.word_on_state(rest, s2)
                for s3, c3 in img.terms.items():
                    out.add_term(s3, c3 * c2)
            self._words[key] = out
        return out

    def apply_word(self, word: Tuple[Tuple, ...], vec: FockVector) -> FockVector:
        out = FockVector()
        for state, coeff in vec.terms.items():
            img = self.word_on_state(word, state)
            for s2, c2 in img.terms.items():
                out.add_term(s2, c2 * coeff)
        return out


@dataclass(frozen=True)
class WordSum:
    """Linear combination of generator words, with a super-parity."""

    parity: int
    terms: Tuple[Tuple[SFrac, Tuple[Tuple, ...]], ...]

    def __mul__(self, other: "WordSum") -> "WordSum":
        terms = tuple((ca * cb, wa + wb)
                      for ca, wa in self.terms for cb, wb in other.terms)
        return WordSum((self.parity + other.parity) % 2, terms)

    def __add__(self, other: "WordSum") -> "WordSum":
        return WordSum(self.parity, self.terms + other.terms)

    def __sub__(self, other: "WordSum") -> "WordSum":
        return self + other.scale(-SF_ONE)

    def scale(self, c: SFrac) -> "WordSum":
        return WordSum(self.parity, tuple((ca * c, w) for ca, w in self.terms))

    def evaluate(self, cache: OpCache, state: FockState) -> FockVector:
        out = FockVector()
        unit = FockVector.unit(state)
        for c, w in self.terms:
            if not c:
                continue
            img = cache.apply_word(w, unit).scale(c)
            for s2, c2 in img.terms.items():
                out.add_term(s2, c2)
        return out


def xi_word(assign: Assignment, i: int, sign: int, k: int) -> WordSum:
    return WordSum(assign.datum.odd_parity(i),
                   ((SF_ONE, (("xi", i, sign, k),)),))


def kappa_word(i: int, r: int) -> WordSum:
    return WordSum(0, ((SF_ONE, (("kappa", i, r),)),))


def qbracket(x: WordSum, y: WordSum, a: SFrac = SF_ONE) -> WordSum:
    """[x, y]_a = xy - (-1)^(px py) a yx."""
    c = a if (x.parity * y.parity) % 2 == 0 else -a
    return (x * y) - (y * x).scale(c)


def _residual_check(instance: RelationInstance, ws: WordSum,
                    cache: OpCache, basis: Sequence[FockState]) -> CheckEntry:
    t0 = time.perf_counter()
    for state in basis:
        res = ws.evaluate(cache, state)
        if res:
            s2, c2 = res.items_sorted()[0]
            return CheckEntry(instance, "nonzero-residual",
                              witness=f"{state.render()} -> ({c2.render()}) "
                                      f"{s2.render()}",
                              seconds=time.perf_counter() - t0)
    return CheckEntry(instance, "exact-zero",
                      seconds=time.perf_counter() - t0)


def _skip(instance: RelationInstance, reason: str) -> CheckEntry:
    return CheckEntry(instance, "skipped", reason=reason)


# ---------------------------------------------------------------------------
# individual relation families
# ---------------------------------------------------------------------------

def _sf(num: Scalar, den: Scalar) -> SFrac:
    return SFrac(num, den)


def check_hh(assign: Assignment, i: int, j: int, r: int, s: int,
             basis: Sequence[FockState],
             cache: Optional[OpCache] = None) -> CheckEntry:
    """[kappa_{i,r}, kappa_{j,s}] against its central right-hand side."""
    inst = RelationInstance("HH", (i, j, r, s))
    d = assign.datum
    if r == 0 or s == 0:
        return _skip(inst, "zero mode")
    if not (d.mode_allowed(i, r) and d.mode_allowed(j, s)):
        return _skip(inst, "mode outside the admissible grid")
    cache = cache or OpCache(assign)
    ki, kj = kappa_word(i, r), kappa_word(j, s)
    ws = qbracket(ki, kj)
    if r + s == 0:
        qi, qj = d.q_i(i), d.q_i(j)
        num = assign.u_coeff(i, j, r) * \
            (assign.gamma_power(r) - assign.gamma_power(-r))
        den = Scalar.of(r) * (qi - qi.inverse_if_unit()) \
            * (qj - qj.inverse_if_unit())
        ws = ws - WordSum(0, ((_sf(num, den), ()),))
    return _residual_check(inst, ws, cache, basis)


def check_hx(assign: Assignment, i: int, j: int, r: int, s: int, sign: int,
             basis: Sequence[FockState],
             cache: Optional[OpCache] = None) -> CheckEntry:
    """[kappa_{i,r}, xi^sign_{j,s}] = sign u gamma^(-sign|r|/2) xi / (r(q_i-q_i^-1)).

    The leading ``sign`` is required for the identity to hold in the
    vertex representations; see the decisions notes.
    """
    inst = RelationInstance("HX", (i, j, r, s, sign))
    d = assign.datum
    if r == 0:
        return _skip(inst, "zero mode")
    if not (d.mode_allowed(i, r) and d.mode_allowed(j, s)):
        return _skip(inst, "mode outside the admissible grid")
    cache = cache or OpCache(assign)
    ws = qbracket(kappa_word(i, r), xi_word(assign, j, sign, s))
    u = assign.u_coeff(i, j, r)
    if u:
        qi = d.q_i(i)
        coeff = _sf(Scalar.of(sign) * u, Scalar.of(r) * (qi - qi.inverse_if_unit()))
        coeff = coeff.mul_scalar(assign.gamma_power(Fraction(-sign * abs(r), 2)))
        ws = ws - xi_word(assign, j, sign, s + r).scale(coeff)
    return _residual_check(inst, ws, cache, basis)


def check_hx_conj(assign: Assignment, i: int, j: int, r: int, sign: int,
                  basis: Sequence[FockState],
                  cache: Optional[OpCache] = None) -> CheckEntry:
    """gamma_i^(1/2) xi^sign_{j,r} gamma_i^(-1/2) = q_i^(sign a_ij / 2) xi."""
    inst = RelationInstance("HX-CONJ", (i, j, r, sign))
    d = assign.datum
    if not d.mode_allowed(j, r):
        return _skip(inst, "mode outside the admissible grid")
    cache = cache or OpCache(assign)
    gh_p = WordSum(0, ((SF_ONE, (("gh", i, +1),)),))
    gh_m = WordSum(0, ((SF_ONE, (("gh", i, -1),)),))
    xi = xi_word(assign, j, sign, r)
    # q_i^(a_ij/2) = q^((a_i, a_j)/2)
    eig = Scalar.q_power(sign * d.gram(i, j) / 2)
    ws = (gh_p * xi * gh_m) - xi.scale(SFrac.of_scalar(eig))
    return _residual_check(inst, ws, cache, basis)


def check_xx(assign: Assignment, i: int, j: int, r: int, s: int,
             basis: Sequence[FockState],
             cache: Optional[OpCache] = None) -> CheckEntry:
    """Super-bracket of raising/lowering modes against the kappa-hat side."""
    inst = RelationInstance("XX", (i, j, r, s))
    d = assign.datum
    if not (d.mode_allowed(i, r) and d.mode_allowed(j, s)):
        return _skip(inst, "mode outside the admissible grid")
    cache = cache or OpCache(assign)
    ws = qbracket(xi_word(assign, i, +1, r), xi_word(assign, j, -1, s))
    if i == j:
        qi = d.q_i(i)
        den = SFrac(Scalar.one(), qi - qi.inverse_if_unit())
        k = r + s
        cp = SFrac.of_scalar(assign.gamma_power(Fraction(r - s, 2))) * den
        cm = SFrac.of_scalar(assign.gamma_power(Fraction(s - r, 2))) * den
        rhs = WordSum(0, ((cp, (("kh", i, +1, k),)),
                          (-cm, (("kh", i, -1, k),))))
        ws = ws - rhs
    return _residual_check(inst, ws, cache, basis)


def check_central(assign: Assignment, which: Tuple,
                  basis: Sequence[FockState],
                  cache: Optional[OpCache] = None) -> CheckEntry:
    """Unit and commutation relations of the group-like generators."""
    inst = RelationInstance("CENTRAL", which)
    cache = cache or OpCache(assign)
    tag = which[0]
    if tag == "unit":
        gh = assign.gamma_half
        inv = gh.inverse_if_unit()
        if inv is None or gh * inv != Scalar.one():
            return CheckEntry(inst, "nonzero-residual",
                              witness=f"gamma^(1/2) = {gh.render()} not a unit")
        return CheckEntry(inst, "exact-zero")
    if tag == "gg":
        _, i, j = which
        a = WordSum(0, ((SF_ONE, (("gh", i, +1),)),))
        b = WordSum(0, ((SF_ONE, (("gh", j, +1),)),))
        ws = (a * b) - (b * a)
    elif tag == "ginv":
        _, i = which
        ws = WordSum(0, ((SF_ONE, (("gh", i, +1), ("gh", i, -1))),
                         (-SF_ONE, ())))
    elif tag == "gk":
        _, i, j, s = which
        if s == 0 or not assign.datum.mode_allowed(j, s):
            return _skip(inst, "mode outside the admissible grid")
        a = WordSum(0, ((SF_ONE, (("gh", i, +1),)),))
        ws = qbracket(a, kappa_word(j, s))
    else:
        raise ValueError(f"unknown central relation {which!r}")
    return _residual_check(inst, ws, cache, basis)


# -- Serre families ---------------------------------------------------------

def _qi_pow(assign: Assignment, i: int, e) -> Scalar:
    return Scalar.q_power(Fraction(e) * assign.datum.length(i) / 2)


def _sym_tuples(values: Sequence[int]) -> List[Tuple[int, ...]]:
    return sorted(set(permutations(values)))


def check_serre(assign: Assignment, family: str, indices: Tuple,
                basis: Sequence[FockState],
                cache: Optional[OpCache] = None) -> CheckEntry:
    """One Serre-relation instance; ``family`` in SERRE_FAMILIES."""
    inst = RelationInstance(f"SERRE-{family}", indices)
    d = assign.datum
    n = d.n
    kind = d.kind
    cache = cache or OpCache(assign)

    def xi(i, k):
        return xi_word(assign, i, indices[-1], k)   # last index is the sign

    sign = indices[-1]
    if sign not in (+1, -1):
        raise ValueError("the last index must be the raising/lowering sign")

    if family == "A":
        i, j, r, s, _ = indices
        if kind is AlgebraKind.OSP1:
            return _skip(inst, "family A absent for the untwisted series")
        if (i, j) == (n, n):
            return _skip(inst, "family A excludes the odd-odd pair")
        theta = 2 if kind is AlgebraKind.OSP2 else 1
        modes = [(i, r + sign * theta), (j, s), (j, s + sign * theta), (i, r)]
        if not all(d.mode_allowed(a, b) for a, b in modes):
            return _skip(inst, "mode outside the admissible grid")
        a_ij = SFrac.of_scalar(Scalar.q_power(d.gram(i, j)))
        ws = qbracket(xi(i, r + sign * theta), xi(j, s), a_ij) \
            + qbracket(xi(j, s + sign * theta), xi(i, r), a_ij)
        return _residual_check(inst, ws, cache, basis)

    if family in ("B", "C"):
        i, j, s, *rs, _ = indices
        rs = tuple(rs)
        if family == "B" and (i == n or i == j):
            return _skip(inst, "family B needs an even node i distinct from j")
        if family == "C":
            if i != n or j == n:
                return _skip(inst, "family C is the odd-node sym relation")
            if kind is not AlgebraKind.SL and j >= n - 1:
                return _skip(inst, "adjacent even node handled by family D/E")
        ell = 1 - int(d.cartan(i, j))
        if len(rs) != ell:
            return _skip(inst, f"needs exactly {ell} symmetrised modes")
        if not all(d.mode_allowed(i, r) for r in rs) or not d.mode_allowed(j, s):
            return _skip(inst, "mode outside the admissible grid")
        base = d.q_i(i) if family == "B" else I_UNIT * d.q_i(i)
        terms = []
        parity = (d.odd_parity(i) * ell + d.odd_parity(j)) % 2
        for perm in _sym_tuples(rs):
            for k in range(ell + 1):
                coef = SFrac.of_scalar(q_binomial(ell, k, base))
                if family == "B" and k % 2:
                    coef = -coef
                word = tuple(("xi", i, sign, r) for r in perm[:k]) \
                    + (("xi", j, sign, s),) \
                    + tuple(("xi", i, sign, r) for r in perm[k:])
                terms.append((coef, word))
        ws = WordSum(parity, tuple(terms))
        return _residual_check(inst, ws, cache, basis)

    if family == "D1":
        if kind is not AlgebraKind.OSP1:
            return _skip(inst, "family D is specific to the untwisted series")
        r1, r2, r3, _ = indices
        q2 = SFrac.of_scalar(_qi_pow(assign, n, 2))
        q4 = SFrac.of_scalar(_qi_pow(assign, n, 4))
        ws = None
        for a, b, c in _sym_tuples((r1, r2, r3)):
            term = qbracket(qbracket(xi(n, a + sign), xi(n, b), q2),
                            xi(n, c), q4)
            ws = term if ws is None else ws + term
        return _residual_check(inst, ws, cache, basis)

    if family == "D2":
        if kind is not AlgebraKind.OSP1:
            return _skip(inst, "family D is specific to the untwisted series")
        r, s, _ = indices
        q2 = SFrac.of_scalar(_qi_pow(assign, n, 2))
        q4 = SFrac.of_scalar(_qi_pow(assign, n, 4))
        qm6 = SFrac.of_scalar(_qi_pow(assign, n, -6))
        ws = None
        for a, b in _sym_tuples((r, s)):
            term = qbracket(xi(n, a + 2 * sign), xi(n, b), q2) \
                - qbracket(xi(n, a + sign), xi(n, b + sign), qm6).scale(q4)
            ws = term if ws is None else ws + term
        return _residual_check(inst, ws, cache, basis)

    if family == "D3":
        if kind is not AlgebraKind.OSP1:
            return _skip(inst, "family D is specific to the untwisted series")
        if n < 2:
            return _skip(inst, "needs a node adjacent to the odd one")
        r, s, k, _ = indices
        q2 = SFrac.of_scalar(_qi_pow(assign, n, 2))
        q4 = SFrac.of_scalar(_qi_pow(assign, n, 4))
        front = SFrac.of_scalar(_qi_pow(assign, n, 2))
        mid = SFrac.of_scalar(_qi_pow(assign, n, 2) + _qi_pow(assign, n, -2))
        ws = None
        for a, b in _sym_tuples((r, s)):
            t1 = qbracket(qbracket(xi(n, a + sign), xi(n, b), q2),
                          xi(n - 1, k), q4).scale(front)
            t2 = qbracket(qbracket(xi(n - 1, k), xi(n, a + sign), q2),
                          xi(n, b)).scale(mid)
            term = t1 + t2
            ws = term if ws is None else ws + term
        return _residual_check(inst, ws, cache, basis)

    if family == "E":
        if kind is not AlgebraKind.OSP2:
            return _skip(inst, "family E is specific to the length-2 odd node")
        if n < 2:
            return _skip(inst, "needs a node adjacent to the odd one")
        k, r, s, _ = indices
        if not d.mode_allowed(n - 1, k):
            return _skip(inst, "mode outside the admissible grid")
        q2 = SFrac.of_scalar(_qi_pow(assign, n, 2))
        ws = None
        for a, b in _sym_tuples((r, s)):
            term = qbracket(qbracket(xi(n - 1, k), xi(n, a + sign), q2),
                            xi(n, b))
            ws = term if ws is None else ws + term
        return _residual_check(inst, ws, cache, basis)

    raise ValueError(f"unknown Serre family {family!r}")


# ---------------------------------------------------------------------------
# the suite
# ---------------------------------------------------------------------------

def _window_range(w: int) -> List[int]:
    return list(range(-w, w + 1))


def iter_instances(assign: Assignment, window: int, xx_window: Optional[int],
                   families: Optional[Sequence[str]] = None):
    """Deterministic enumeration of the admissible instances."""
    n = assign.n
    kind = assign.datum.kind
    xxw = window if xx_window is None else xx_window
    wr = _window_range(window)

    def want(f: str) -> bool:
        return families is None or f in families

    if want("CENTRAL"):
        yield ("CENTRAL", ("unit",))
        for i in range(1, n + 1):
            yield ("CENTRAL", ("ginv", i))
            for j in range(i + 1, n + 1):
                yield ("CENTRAL", ("gg", i, j))
            for j in range(1, n + 1):
                for s in wr:
                    if s:
                        yield ("CENTRAL", ("gk", i, j, s))
    if want("HH"):
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                for r in wr:
                    for s in wr:
                        if r and s:
                            yield ("HH", (i, j, r, s))
    if want("HX-CONJ"):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for r in wr:
                    for sg in (+1, -1):
                        yield ("HX-CONJ", (i, j, r, sg))
    if want("HX"):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for r in wr:
                    if not r:
                        continue
                    for s in wr:
                        for sg in (+1, -1):
                            yield ("HX", (i, j, r, s, sg))
    if want("XX"):
        xr = _window_range(xxw)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for r in xr:
                    for s in xr:
                        yield ("XX", (i, j, r, s))
    if want("SERRE-A") and kind is not AlgebraKind.OSP1:
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                if (i, j) == (n, n):
                    continue
                for r in wr:
                    for s in wr:
                        for sg in (+1, -1):
                            yield ("SERRE-A", (i, j, r, s, sg))
    if want("SERRE-B"):
        for i in range(1, n):
            for j in range(1, n + 1):
                if i == j:
                    continue
                ell = 1 - int(assign.datum.cartan(i, j))
                for rs in combinations_with_replacement(wr, ell):
                    for s in wr:
                        for sg in (+1, -1):
                            yield ("SERRE-B", (i, j, s) + rs + (sg,))
    if want("SERRE-C"):
        for j in range(1, n):
            if kind is not AlgebraKind.SL and j >= n - 1:
                continue
            ell = 1 - int(assign.datum.cartan(n, j))
            for rs in combinations_with_replacement(wr, ell):
                for s in wr:
                    for sg in (+1, -1):
                        yield ("SERRE-C", (n, j, s) + rs + (sg,))
    if kind is AlgebraKind.OSP1:
        if want("SERRE-D"):
            for rs in combinations_with_replacement(wr, 3):
                for sg in (+1, -1):
                    yield ("SERRE-D1", rs + (sg,))
            for rs in combinations_with_replacement(wr, 2):
                for sg in (+1, -1):
                    yield ("SERRE-D2", rs + (sg,))
            if n >= 2:
                for rs in combinations_with_replacement(wr, 2):
                    for k in wr:
                        for sg in (+1, -1):
                            yield ("SERRE-D3", rs + (k, sg))
    if want("SERRE-E") and kind is AlgebraKind.OSP2 and n >= 2:
        for k in wr:
            for rs in combinations_with_replacement(wr, 2):
                for sg in (+1, -1):
                    yield ("SERRE-E", (k,) + rs + (sg,))


def evaluate_instance(assign: Assignment, family: str, indices: Tuple,
                      basis: Sequence[FockState],
                      cache: Optional[OpCache] = None) -> CheckEntry:
    if family == "HH":
        return check_hh(assign, *indices, basis, cache=cache)
    if family == "HX":
        return check_hx(assign, *indices, basis, cache=cache)
    if family == "HX-CONJ":
        return check_hx_conj(assign, *indices, basis, cache=cache)
    if family == "XX":
        return check_xx(assign, *indices, basis, cache=cache)
    if family == "CENTRAL":
        return check_central(assign, indices, basis, cache=cache)
    if family.startswith("SERRE-"):
        return check_serre(assign, family[6:], indices, basis, cache=cache)
    raise ValueError(f"unknown relation family {family!r}")


def run_suite(assign: Assignment, heis_deg: int = 2, lat_bound: int = 1,
              cliff_deg: int = 2, window: int = 1,
              xx_window: Optional[int] = None,
              families: Optional[Sequence[str]] = None,
              basis: Optional[Sequence[FockState]] = None,
              jobs: int = 1) -> CheckReport:
    """Evaluate every admissible relation instance in the window.

    Instances are independent; with jobs > 1 they are farmed out to a
    thread pool and the report is assembled in enumeration order.
    """
    if basis is None:
        basis = enumerate_basis(assign.datum, assign.shape,
                                heis_deg, lat_bound, cliff_deg)
    cache = OpCache(assign)
    instances = list(iter_instances(assign, window, xx_window, families))
    report = CheckReport(meta={
        "kind": assign.datum.kind.value, "n": assign.n,
        "variant": assign.shape.variant, "family": assign.family,
        "bounds": [heis_deg, lat_bound, cliff_deg],
        "window": window, "xx_window": window if xx_window is None else xx_window,
        "basis_size": len(basis),
    })
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(evaluate_instance, assign, fam, idx,
                                basis, cache)
                    for fam, idx in instances]
            report.entries = [f.result() for f in futs]
    else:
        report.entries = [evaluate_instance(assign, fam, idx, basis, cache)
                          for fam, idx in instances]
    return report


# ---------------------------------------------------------------------------
# finite matrix families (Chevalley presentation)
# ---------------------------------------------------------------------------

Matrix = Tuple[Tuple[SFrac, ...], ...]


def mat(rows: Sequence[Sequence[SFrac]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def mat_of_scalars(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    return mat([[SFrac.of_scalar(x) for x in r] for r in rows])


def mat_identity(size: int) -> Matrix:
    zero = SFrac.of_scalar(Scalar.zero())
    return mat([[SF_ONE if i == j else zero for j in range(size)]
                for i in range(size)])


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError("matrix dimension mismatch")
    return mat([[sum((a[i][k] * b[k][j] for k in range(len(b))),
                     SFrac.of_scalar(Scalar.zero()))
                 for j in range(len(b[0]))] for i in range(len(a))])


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return mat([[a[i][j] + b[i][j] for j in range(len(a[0]))]
                for i in range(len(a))])


def mat_scale(a: Matrix, c: SFrac) -> Matrix:
    return mat([[x * c for x in row] for row in a])


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return mat_add(a, mat_scale(b, -SF_ONE))


def mat_is_zero(a: Matrix) -> bool:
    return not any(any(x for x in row) for row in a)


def mat_inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan over the exact fraction field."""
    size = len(a)
    if any(len(r) != size for r in a):
        raise ValueError("inverse needs a square matrix")
    aug = [list(row) + list(idr)
           for row, idr in zip(a, mat_identity(size))]
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - y * f for x, y in zip(aug[r], aug[col])]
    return mat([row[size:] for row in aug])


@dataclass(frozen=True)
class ChevalleyFamily:
    """Explicit finite family e_i, f_i, k_i with its scalar conventions.

    ``conj[i][j]`` is the eigenvalue of k_i e_j k_i^(-1); ``denom[i]``
    the denominator of the bracket relation at node i; ``serre_exp``
    maps ordered pairs (i, j), i != j, to 1 - a_ij.
    """

    e: Tuple[Matrix, ...]
    f: Tuple[Matrix, ...]
    k: Tuple[Matrix, ...]
    parities: Tuple[int, ...]
    conj: Tuple[Tuple[Scalar, ...], ...]
    denom: Tuple[Scalar, ...]
    serre_exp: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def twisted(self, eps: Sequence[int]) -> "ChevalleyFamily":
        """Composition with the sign automorphism k -> eps k, e -> eps e."""
        if any(x not in (1, -1) for x in eps):
            raise ValueError("twist signs must be +-1")
        e = tuple(mat_scale(m, SFrac.of_scalar(Scalar.of(x)))
                  for m, x in zip(self.e, eps))
        k = tuple(mat_scale(m, SFrac.of_scalar(Scalar.of(x)))
                  for m, x in zip(self.k, eps))
        return ChevalleyFamily(e=e, f=self.f, k=k, parities=self.parities,
                               conj=self.conj, denom=self.denom,
                               serre_exp=dict(self.serre_exp))


def osp12_spinor_family() -> ChevalleyFamily:
    """The 2-dimensional spinoral representation of the rank-1 subalgebra."""
    zero = Scalar.zero()
    top = SFrac(I_UNIT, Scalar.q_power(HALF) - Scalar.q_power(-HALF))
    e = mat([[SFrac.of_scalar(zero), top],
             [SFrac.of_scalar(zero), SFrac.of_scalar(zero)]])
    f = mat_of_scalars([[zero, zero], [Scalar.one(), zero]])
    k = mat_of_scalars([[I_UNIT * Scalar.q_power(HALF), zero],
                        [zero, I_UNIT * Scalar.q_power(-HALF)]])
    return ChevalleyFamily(
        e=(e,), f=(f,), k=(k,), parities=(1,),
        conj=((Scalar.q_power(1),),),
        denom=(Scalar.q_power(1) - Scalar.q_power(-1),))


def check_chevalley(family: ChevalleyFamily) -> CheckReport:
    """All finite-presentation relations of an explicit matrix family."""
    report = CheckReport(meta={"presentation": "chevalley",
                               "rank": len(family.e)})
    rank = len(family.e)
    size = len(family.k[0])
    for m in family.e + family.f + family.k:
        if len(m) != size or any(len(r) != size for r in m):
            raise ValueError("inconsistent matrix sizes")

    def entry(fam, idx, residual: Matrix):
        inst = RelationInstance(fam, idx)
        if mat_is_zero(residual):
            report.entries.append(CheckEntry(inst, "exact-zero"))
        else:
            wit = next(f"[{i},{j}] = {residual[i][j].render()}"
                       for i in range(size) for j in range(size)
                       if residual[i][j])
            report.entries.append(
                CheckEntry(inst, "nonzero-residual", witness=wit))

    kinv = [mat_inverse(m) for m in family.k]
    for i in range(rank):
        entry("CHEV-KINV", (i,),
              mat_sub(mat_mul(family.k[i], kinv[i]), mat_identity(size)))
        for j in range(rank):
            entry("CHEV-KK", (i, j),
                  mat_sub(mat_mul(family.k[i], family.k[j]),
                          mat_mul(family.k[j], family.k[i])))
            c = SFrac.of_scalar(family.conj[i][j])
            entry("CHEV-KE", (i, j),
                  mat_sub(mat_mul(mat_mul(family.k[i], family.e[j]), kinv[i]),
                          mat_scale(family.e[j], c)))
            entry("CHEV-KF", (i, j),
                  mat_sub(mat_mul(mat_mul(family.k[i], family.f[j]), kinv[i]),
                          mat_scale(family.f[j], c.inverse())))
            # e_i f_j - (-1)^(p_i p_j) f_j e_i = delta_ij (k-k^-1)/denom
            sgn = -1 if family.parities[i] * family.parities[j] % 2 else 1
            lhs = mat_sub(mat_mul(family.e[i], family.f[j]),
                          mat_scale(mat_mul(family.f[j], family.e[i]),
                                    SFrac.of_scalar(Scalar.of(sgn))))
            if i == j:
                rhs = mat_scale(mat_sub(family.k[i], kinv[i]),
                                SFrac(Scalar.one(), family.denom[i]))
                lhs = mat_sub(lhs, rhs)
            entry("CHEV-EF", (i, j), lhs)
    for (i, j), ell in family.serre_exp.items():
        for gen, kmat, kmi, fam in ((family.e, family.k, kinv, "CHEV-SERRE-E"),
                                    (family.f, kinv, family.k, "CHEV-SERRE-F")):
            x = gen[j]
            par_x = family.parities[j]
            for _ in range(ell):
                # Ad_{e_i}(x) = e_i x - (-1)^(pp) k_i x k_i^-1 e_i
                sgn = -1 if family.parities[i] * par_x % 2 else 1
                x = mat_sub(mat_mul(gen[i], x),
                            mat_mul(mat_scale(mat_mul(mat_mul(kmat[i], x),
                                                      kmi[i]),
                                              SFrac.of_scalar(Scalar.of(sgn))),
                                    gen[i]))
                par_x = (par_x + family.parities[i]) % 2
            entry(fam, (i, j), x)
    return report
