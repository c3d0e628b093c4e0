"""Root data for the three twisted/untwisted affine series.

The package covers three families of quantum affine superalgebras,
labelled here by short tags:

* ``osp1`` -- the untwisted algebra built on osp(1|2n),
* ``sl``   -- the order-2 twisted algebra built on sl(1|2n),
* ``osp2`` -- the order-2 twisted algebra built on osp(2|2n).

A ``RootDatum`` packages, for a given family and rank n >= 1:

* the symmetrised Gram matrix of the n finite simple roots (node n is
  the odd root; there is no node-0 data in the Drinfeld picture),
* the Cartan matrix a_ij = 2(a_i,a_j)/(a_i,a_i),
* the node parameters q_i = q^((a_i,a_i)/2),
* the twisted parameter wp with wp = (-1)^(1/len(a_n)) q and its fixed
  square root wp^(1/2) = (-1)^(1/(2 len(a_n))) q^(1/2),
* the structure-constant table u_{i,j,r} of the loop-generator
  relations, and the matching r-dependence exclusions,
* the meromorphic function data g_ij(z) (Taylor-expanded at 0),
* the lattice 2-cocycle used by the plain-q vacuum construction,
* the constants (t_i, c_i, d_i) of the highest-weight classification
  layer, which uses the normalisation (a_n, a_n) = 1.

Two normalisations are supported.  VERTEX is the one the Fock-space
construction wants: (a_n, a_n) = 1 for osp1/sl and the doubled Gram
matrix for osp2.  CLASSIFY rescales osp2 so that (a_n, a_n) = 1; for
the other two families the normalisations agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .scalars import (
    CY_I, CY_ONE, I_UNIT, Scalar, ScalarSeries, minus_one_pow, taylor_quotient,
)


class AlgebraKind(str, Enum):
    OSP1 = "osp1"   # osp(1|2n), untwisted
    SL = "sl"       # sl(1|2n), twist order 2
    OSP2 = "osp2"   # osp(2|2n), twist order 2


class Normalisation(str, Enum):
    VERTEX = "vertex"
    CLASSIFY = "classify"


# Squared length of the odd simple root a_n in the VERTEX normalisation.
_ODD_LEN = {AlgebraKind.OSP1: 1, AlgebraKind.SL: 1, AlgebraKind.OSP2: 2}


@dataclass(frozen=True)
class RootDatum:
    """Immutable root/structure-constant data for one (kind, n) pair."""

    kind: AlgebraKind
    n: int
    normalisation: Normalisation = Normalisation.VERTEX
    # Optional integer perturbation of one Gram entry (mutation testing).
    gram_perturbation: Optional[Tuple[int, int, int]] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank must be >= 1")

    # -- bilinear form -------------------------------------------------

    @property
    def scale(self) -> Fraction:
        """Overall rescale of the base Gram matrix for this normalisation."""
        if self.kind is AlgebraKind.OSP2 and \
                self.normalisation is Normalisation.VERTEX:
            return Fraction(2)
        return Fraction(1)

    def gram(self, i: int, j: int) -> Fraction:
        """(a_i, a_j) for 1 <= i, j <= n."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError("node out of range")
        if i == j:
            base = Fraction(1) if i == self.n else Fraction(2)
        elif abs(i - j) == 1:
            base = Fraction(-1)
        else:
            base = Fraction(0)
        val = base * self.scale
        if self.gram_perturbation is not None:
            pi, pj, delta = self.gram_perturbation
            if (i, j) in ((pi, pj), (pj, pi)):
                val += delta
        return val

    def cartan(self, i: int, j: int) -> Fraction:
        return 2 * self.gram(i, j) / self.gram(i, i)

    def length(self, i: int) -> Fraction:
        """(a_i, a_i)."""
        return self.gram(i, i)

    def odd_parity(self, i: int) -> int:
        """Super-parity of the loop generators at node i (node n is odd)."""
        return 1 if i == self.n else 0

    # -- deformation parameters ---------------------------------------

    def q_i(self, i: int) -> Scalar:
        return Scalar.q_power(self.length(i) / 2)

    @property
    def wp_half(self) -> Scalar:
        """wp^(1/2) = (-1)^(1/(2 len(a_n))) q^(1/2) in VERTEX normalisation."""
        ell = _ODD_LEN[self.kind]
        return minus_one_pow(Fraction(1, 2 * ell)) * Scalar.q_power(Fraction(1, 2))

    @property
    def wp(self) -> Scalar:
        return self.wp_half * self.wp_half

    def wp_pow(self, x) -> Scalar:
        """wp^x for half-integer x."""
        e = Fraction(x) * 2
        if e.denominator != 1:
            raise ValueError(f"wp^{x} not on the half-integer grid")
        return self.wp_half ** int(e)


    # -- structure constants ------------------------------------------

    def mode_allowed(self, i: int, r: int) -> bool:
        """Whether the loop mode (i, r) exists for this family.

        The osp2 family drops odd modes at every even node i < n.
        """
        if self.kind is AlgebraKind.OSP2 and i < self.n and r % 2 != 0:
            return False
        return True

    @lru_cache(maxsize=None)
    def _u_cached(self, i: int, j: int, r: int) -> Scalar:
        a_ij = self.cartan(i, j)
        qi = self.q_i(i)
        if self.kind is AlgebraKind.OSP1:
            if i == j == self.n:
                return (qi ** (4 * r)) - (qi ** (-4 * r)) \
                    - (qi ** (2 * r)) + (qi ** (-2 * r))
            e = Fraction(r) * a_ij
            return _q_i_pow(qi, e) - _q_i_pow(qi, -e)
        if self.kind is AlgebraKind.SL:
            if i == j == self.n:
                return minus_one_pow(r) * ((qi ** (2 * r)) - (qi ** (-2 * r)))
            e = Fraction(r) * a_ij
            return _q_i_pow(qi, e) - _q_i_pow(qi, -e)
        # osp2
        if i == j == self.n:
            return minus_one_pow(r) * ((qi ** (2 * r)) - (qi ** (-2 * r)))
        e = Fraction(r) * a_ij / 2
        half = _q_i_pow(qi, e) - _q_i_pow(qi, -e)
        factor = Scalar.one() + minus_one_pow(r)
        return factor * half

    def u_coeff(self, i: int, j: int, r: int) -> Scalar:
        """Structure constant u_{i,j,r} of the loop relations (r != 0)."""
        if r == 0:
            raise ValueError("u is defined for nonzero r")
        return self._u_cached(i, j, r)

    # -- g-series ------------------------------------------------------

    def g_series(self, i: int, j: int, order: int) -> ScalarSeries:
        """Taylor expansion at 0 of g_ij(z) = f_ij(z)/h_ij(z).

        The numerator/denominator pair is family- and node-dependent;
        every denominator has a unit constant term so the expansion is
        exact Laurent arithmetic.
        """
        d = self.gram(i, j)
        one = Scalar.one()
        if self.kind is AlgebraKind.OSP1:
            if i == j == self.n:
                # (q^(2d) z - 1)(q^(-d) z - 1) / ((z - q^(2d))(z - q^(-d)))
                num = _poly_prod([(-one, Scalar.q_power(2 * d)),
                                  (-one, Scalar.q_power(-d))])
                den = _poly_prod([(-Scalar.q_power(2 * d), one),
                                  (-Scalar.q_power(-d), one)])
            else:
                num = [-one, Scalar.q_power(d)]
                den = [-Scalar.q_power(d), one]
        elif self.kind is AlgebraKind.SL:
            if i == j == self.n:
                mqd = _minus_q_pow(d)
                num = [-one, mqd]
                den = [-mqd, one]
            else:
                num = [-one, Scalar.q_power(d)]
                den = [-Scalar.q_power(d), one]
        else:  # osp2
            if i == j == self.n:
                mqd = _minus_q_pow(d)
                num = [-one, mqd]
                den = [-mqd, one]
            else:
                a = Scalar.q_power(d / 2)
                b = _minus_q_pow(d / 2)
                num = _poly_prod([(-one, a), (-one, b)])
                den = _poly_prod([(-a, one), (-b, one)])
        return taylor_quotient(num, den, order)

    # -- lattice 2-cocycle --------------------------------------------

    def cocycle(self, alpha: Tuple[int, ...], beta: Tuple[int, ...]) -> int:
        """Bimultiplicative 2-cocycle C on the root lattice, values +-1.

        On generators, for i <= j,
            C(a_i, a_j) = (-1)^((a_i,a_j) + (a_i,a_i)(a_j,a_j))
        and C(a_i, a_j) = 1 for i > j.  Uses the normalisation with
        (a_n, a_n) = 1 regardless of the datum's Fock normalisation.
        """
        cd = self.with_normalisation(Normalisation.CLASSIFY)
        out = 1
        for i in range(1, self.n + 1):
            ai = alpha[i - 1]
            if not ai:
                continue
            for j in range(i, self.n + 1):
                bj = beta[j - 1]
                if not bj:
                    continue
                e = cd.gram(i, j) + cd.gram(i, i) * cd.gram(j, j)
                if e.denominator != 1:
                    raise ValueError("cocycle exponent not an integer")
                if (int(e) * ai * bj) % 2:
                    out = -out
        return out

    # -- classification constants -------------------------------------

    def classify_constants(self, i: int) -> Tuple[Scalar, int, int]:
        """(t_i, c_i, d_i) for the highest-weight polynomial layer."""
        cd = self.with_normalisation(Normalisation.CLASSIFY)
        ln = cd.length(i)
        # t_i = (zeta^2 q^(1/2))^(a_i,a_i)
        t_i = _pow_scalar(Scalar.of(CY_I, Fraction(1, 2)), ln)
        if self.kind is AlgebraKind.OSP1:
            c_i = 2 if i == self.n else 1
            d_i = 1
        elif self.kind is AlgebraKind.SL:
            c_i = 1
            d_i = 1
        else:
            c_i = 1 if i == self.n else 2
            d_i = 1 if i == self.n else 2
        return t_i, c_i, d_i

    @property
    def twist_epsilon(self) -> Fraction:
        """Exponent density of the node-alternating correspondence sign."""
        return Fraction(1, 2) if self.kind is AlgebraKind.OSP2 else Fraction(1)

    # -- misc ----------------------------------------------------------

    def with_normalisation(self, norm: Normalisation) -> "RootDatum":
        if norm is self.normalisation:
            return self
        return RootDatum(self.kind, self.n, norm, self.gram_perturbation)

    def to_json(self) -> str:
        payload = {
            "kind": self.kind.value,
            "n": self.n,
            "normalisation": self.normalisation.value,
            "gram": [[str(self.gram(i, j)) for j in range(1, self.n + 1)]
                     for i in range(1, self.n + 1)],
            "cartan": [[str(self.cartan(i, j)) for j in range(1, self.n + 1)]
                       for i in range(1, self.n + 1)],
        }
        if self.gram_perturbation is not None:
            payload["gram_perturbation"] = list(self.gram_perturbation)
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RootDatum":
        data = json.loads(text)
        pert = data.get("gram_perturbation")
        datum = cls(AlgebraKind(data["kind"]), int(data["n"]),
                    Normalisation(data["normalisation"]),
                    tuple(pert) if pert else None)
        # Round-trip guard: serialised tables must match the rebuilt datum.
        if json.loads(datum.to_json())["gram"] != data["gram"]:
            raise ValueError("gram table mismatch in serialised datum")
        return datum


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _q_i_pow(qi: Scalar, e: Fraction) -> Scalar:
    """qi^e for fractional e, using qi = q^m internally."""
    (qe, coeff), = qi.terms.items()
    assert coeff == CY_ONE
    return Scalar.q_power(Fraction(qe, 4) * Fraction(e))


def _pow_scalar(base: Scalar, e: Fraction) -> Scalar:
    """base^e for a monomial base with a zeta coefficient, e half-integer."""
    (be, coeff), = base.terms.items()
    e = Fraction(e)
    qexp = Fraction(be, 4) * e
    # Coefficient part: powers of zeta^2 only ever arise here.
    if coeff == CY_I:
        e2 = e * 2  # (zeta^2)^e = zeta^(2e)
        if e2.denominator != 1:
            raise ValueError("zeta power off grid")
        zpart = _zeta_pow(int(e2))
    elif coeff == CY_ONE:
        zpart = Scalar.one()
    else:
        raise ValueError("unsupported base coefficient")
    return zpart * Scalar.q_power(qexp)


def _zeta_pow(k: int) -> Scalar:
    """zeta^k as a Scalar (zeta = primitive eighth root of unity)."""
    from .scalars import ZETA8
    return ZETA8 ** (k % 8)


def _minus_q_pow(e: Fraction) -> Scalar:
    """(-q)^e for half-integer e, branch (-1)^(1/2) = zeta^2."""
    return minus_one_pow(e) * Scalar.q_power(e)


def _poly_prod(factors: List[Tuple[Scalar, Scalar]]) -> List[Scalar]:
    """Product of linear polynomials (c0 + c1 z), as a coefficient list."""
    out = [Scalar.one()]
    for c0, c1 in factors:
        new = [Scalar.zero()] * (len(out) + 1)
        for k, c in enumerate(out):
            new[k] = new[k] + c * c0
            new[k + 1] = new[k + 1] + c * c1
        out = new
    return out
