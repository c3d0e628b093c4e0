"""Exact scalar arithmetic for the vertex-operator workbench.

Every quantity in the package is a Laurent polynomial in a formal
parameter q with coefficients in the cyclotomic field Q(zeta), where
zeta is a primitive eighth root of unity (zeta^4 = -1, zeta^2 = the
imaginary unit).  Exponents of q live on the quarter-integer grid and
are stored as integers in units of q^(1/4); this is fine enough for
q^(1/2) (the deformation parameter of short odd roots), for the square
roots appearing in group-like eigenvalues, and for (-q)^(1/4).

Three representations are provided:

* ``Cyclo8``   -- an element of Q(zeta), a length-4 vector of Fractions
                  over the basis 1, zeta, zeta^2, zeta^3.
* ``Scalar``   -- a Laurent polynomial, a sparse map exponent -> Cyclo8
                  with no zero entries (canonical, so ``==`` is
                  structural equality).
* ``SFrac``    -- a reduced fraction of two Scalars with a canonical
                  denominator (lowest exponent 0, leading coefficient
                  1), closing the arithmetic under the divisions that
                  vertex-operator coefficients require.

There is no floating point and no tolerance anywhere: a residual is
zero exactly when its canonical form is the zero map.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

_F0 = Fraction(0)
_F1 = Fraction(1)


class Cyclo8:
    """Element of Q(zeta_8), stored over the power basis 1, z, z^2, z^3."""

    __slots__ = ("c",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.c = (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3))

    @classmethod
    def _raw(cls, tup: Tuple[Fraction, Fraction, Fraction, Fraction]) -> "Cyclo8":
        obj = object.__new__(cls)
        obj.c = tup
        return obj

    def __bool__(self) -> bool:
        a, b, c, d = self.c
        return bool(a or b or c or d)

    def __eq__(self, other) -> bool:
        if isinstance(other, Cyclo8):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == (Fraction(other), _F0, _F0, _F0)
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other: "Cyclo8") -> "Cyclo8":
        a, b = self.c, other.c
        return Cyclo8._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    def __sub__(self, other: "Cyclo8") -> "Cyclo8":
        a, b = self.c, other.c
        return Cyclo8._raw((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __neg__(self) -> "Cyclo8":
        a = self.c
        return Cyclo8._raw((-a[0], -a[1], -a[2], -a[3]))

    def __mul__(self, other: "Cyclo8") -> "Cyclo8":
        # zeta^4 = -1, so the product folds back with a sign.
        a, b = self.c, other.c
        if not (a[1] or a[2] or a[3]):
            r = a[0]
            if r == 1:
                return other
            return Cyclo8._raw((r * b[0], r * b[1], r * b[2], r * b[3]))
        if not (b[1] or b[2] or b[3]):
            r = b[0]
            if r == 1:
                return self
            return Cyclo8._raw((r * a[0], r * a[1], r * a[2], r * a[3]))
        out = [_F0, _F0, _F0, _F0]
        for i in range(4):
            ai = a[i]
            if not ai:
                continue
            for j in range(4):
                bj = b[j]
                if not bj:
                    continue
                k = i + j
                if k < 4:
                    out[k] += ai * bj
                else:
                    out[k - 4] -= ai * bj
        return Cyclo8._raw(tuple(out))

    def conj_map(self, k: int) -> "Cyclo8":
        """Galois map zeta -> zeta^k for odd k in {1, 3, 5, 7}."""
        out = [_F0, _F0, _F0, _F0]
        for i, ci in enumerate(self.c):
            if not ci:
                continue
            e = (i * k) % 8
            if e < 4:
                out[e] += ci
            else:
                out[e - 4] -= ci
        return Cyclo8._raw(tuple(out))

    def inverse(self) -> "Cyclo8":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta_8)")
        prod = self.conj_map(3) * self.conj_map(5) * self.conj_map(7)
        norm = (self * prod).c
        # The norm is Galois-invariant, hence rational.
        assert not (norm[1] or norm[2] or norm[3]), "norm not rational"
        inv_n = 1 / norm[0]
        return Cyclo8._raw(tuple(x * inv_n for x in prod.c))

    def __truediv__(self, other: "Cyclo8") -> "Cyclo8":
        return self * other.inverse()

    def is_rational(self) -> bool:
        return not (self.c[1] or self.c[2] or self.c[3])

    def __repr__(self) -> str:
        return f"Cyclo8{self.c}"

    def render(self) -> str:
        """Human/JSON form over the basis symbol ``z`` (zeta_8)."""
        terms = []
        for i, ci in enumerate(self.c):
            if not ci:
                continue
            if i == 0:
                terms.append(str(ci))
            elif ci == 1:
                terms.append(f"z^{i}" if i > 1 else "z")
            else:
                terms.append(f"{ci}*z^{i}" if i > 1 else f"{ci}*z")
        return "+".join(terms).replace("+-", "-") or "0"


CY_ZERO = Cyclo8(0)
CY_ONE = Cyclo8(1)
CY_I = Cyclo8(0, 0, 1, 0)        # zeta^2
CY_ZETA = Cyclo8(0, 1, 0, 0)     # zeta, a square root of the imaginary unit
CY_MINUS_ONE = Cyclo8(-1)


class Scalar:
    """Laurent polynomial in q on the quarter-exponent grid.

    The map ``terms`` sends an integer e to a nonzero ``Cyclo8``; the
    monomial it encodes is ``coeff * q^(e/4)``.  The representation is
    canonical (no zero coefficients), so equality is structural.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[int, Cyclo8]] = None):
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Scalar":
        return cls()

    @classmethod
    def one(cls) -> "Scalar":
        return cls({0: CY_ONE})

    @classmethod
    def of(cls, coeff, qexp: Fraction = _F0) -> "Scalar":
        """coeff * q^qexp with coeff an int/Fraction/Cyclo8."""
        if not isinstance(coeff, Cyclo8):
            coeff = Cyclo8(coeff)
        e = Fraction(qexp) * 4
        if e.denominator != 1:
            raise ValueError(f"exponent {qexp} off the quarter grid")
        return cls({int(e): coeff} if coeff else {})

    @classmethod
    def q_power(cls, qexp) -> "Scalar":
        return cls.of(CY_ONE, Fraction(qexp))

    # -- ring structure ----------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.terms == other.terms
        if isinstance(other, int):
            return self.terms == Scalar.of(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted((e, c.c) for e, c in self.terms.items())))

    def __add__(self, other: "Scalar") -> "Scalar":
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        res = object.__new__(Scalar)
        res.terms = out
        return res

    def __neg__(self) -> "Scalar":
        res = object.__new__(Scalar)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if len(self.terms) == 1:
            (e1, c1), = self.terms.items()
            return other.shift(e1).scale(c1) if e1 else other.scale(c1)
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            return self.shift(e2).scale(c2) if e2 else self.scale(c2)
        out: Dict[int, Cyclo8] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                p = c1 * c2
                s = out.get(e)
                if s is None:
                    out[e] = p
                else:
                    s = s + p
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        res = object.__new__(Scalar)
        res.terms = out
        return res

    def scale(self, coeff: Cyclo8) -> "Scalar":
        if not coeff:
            return Scalar()
        res = object.__new__(Scalar)
        res.terms = {e: c * coeff for e, c in self.terms.items()}
        return res

    def shift(self, quarter_exp: int) -> "Scalar":
        res = object.__new__(Scalar)
        res.terms = {e + quarter_exp: c for e, c in self.terms.items()}
        return res

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            inv = self.inverse_if_unit()
            if inv is None:
                raise ValueError("negative power of a non-unit Scalar")
            return inv ** (-k)
        out = Scalar.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure queries -------------------------------------------

    def min_exp(self) -> int:
        return min(self.terms)

    def max_exp(self) -> int:
        return max(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse_if_unit(self) -> Optional["Scalar"]:
        """Units of the Laurent ring are the nonzero monomials."""
        if len(self.terms) != 1:
            return None
        (e, c), = self.terms.items()
        res = object.__new__(Scalar)
        res.terms = {-e: c.inverse()}
        return res

    def leading(self) -> Tuple[int, Cyclo8]:
        e = max(self.terms)
        return e, self.terms[e]

    # -- division ----------------------------------------------------

    def divmod_poly(self, den: "Scalar") -> Tuple["Scalar", "Scalar"]:
        """Long division of the unit-normalised operands.

        Both operands are first shifted so their lowest exponent is 0
        (multiplying by a Laurent unit changes neither divisibility nor
        the gcd).  Returns (quo, rem) with

            self.shift(-self.min_exp()) = quo * den.shift(-den.min_exp()) + rem
        """
        if not den:
            raise ZeroDivisionError("division by the zero Scalar")
        if not self:
            return Scalar(), Scalar()
        den0 = den.shift(-den.min_exp())
        rem = self.shift(-self.min_exp())
        de, dc = den0.leading()
        dinv = dc.inverse()
        quo: Dict[int, Cyclo8] = {}
        while rem and rem.max_exp() >= de:
            re, rc = rem.leading()
            f = rc * dinv
            quo[re - de] = f
            rem = rem - den0.shift(re - de).scale(f)
        res = object.__new__(Scalar)
        res.terms = quo
        return res, rem

    def divexact(self, den: "Scalar") -> "Scalar":
        inv = den.inverse_if_unit()
        if inv is not None:
            return self * inv
        quo, rem = self.divmod_poly(den)
        if rem:
            raise ValueError("inexact Scalar division")
        return quo.shift(self.min_exp() - den.min_exp())

    # -- rendering ----------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e].render()
            q = Fraction(e, 4)
            if e == 0:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})q^{q}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Scalar[{self.render()}]"


S_ZERO = Scalar.zero()
S_ONE = Scalar.one()


def _gcd(a: Scalar, b: Scalar) -> Scalar:
    """Monic gcd of two Laurent polynomials (unit-normalised).

    Memoised: relation checking multiplies huge numbers of fractions
    with a small pool of distinct numerators/denominators, and the
    Euclidean division dominates the runtime otherwise.
    """
    a = a.shift(-a.min_exp()) if a else a
    b = b.shift(-b.min_exp()) if b else b
    return _gcd_normalised(a, b)


@lru_cache(maxsize=65536)
def _gcd_normalised(a: Scalar, b: Scalar) -> Scalar:
    while b:
        _, r = a.divmod_poly(b)
        a, b = b, (r.shift(-r.min_exp()) if r else r)
    if not a:
        return S_ONE
    _, lc = a.leading()
    return a.scale(lc.inverse())


class SFrac:
    """Reduced fraction of Scalars with a canonical denominator.

    The denominator has lowest exponent 0 and leading coefficient 1;
    the gcd of numerator and denominator is 1.  Equality is therefore
    structural and a zero test is ``not self.num``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: Scalar = S_ONE, reduce: bool = True):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if reduce:
            num, den = _canonical(num, den)
        self.num = num
        self.den = den

    @classmethod
    def of_scalar(cls, s: Scalar) -> "SFrac":
        obj = object.__new__(cls)
        obj.num = s
        obj.den = S_ONE
        return obj

    @classmethod
    def one(cls) -> "SFrac":
        return cls.of_scalar(S_ONE)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, SFrac):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Scalar):
            return self.den == S_ONE and self.num == other
        if isinstance(other, int):
            return self.den == S_ONE and self.num == Scalar.of(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "SFrac") -> "SFrac":
        if self.den == other.den:
            return SFrac(self.num + other.num, self.den)
        # Work over the lcm of the denominators to keep the operands of
        # the final reduction small; denominators repeat heavily.
        g = _gcd(self.den, other.den)
        if g == S_ONE:
            return SFrac(self.num * other.den + other.num * self.den,
                         self.den * other.den)
        da = self.den.divexact(g)
        db = other.den.divexact(g)
        return SFrac(self.num * db + other.num * da, self.den * db)

    def __neg__(self) -> "SFrac":
        obj = object.__new__(SFrac)
        obj.num = -self.num
        obj.den = self.den
        return obj

    def __sub__(self, other: "SFrac") -> "SFrac":
        return self + (-other)

    def __mul__(self, other: "SFrac") -> "SFrac":
        if not self.num or not other.num:
            return SFrac.of_scalar(S_ZERO)
        # Both factors are reduced, so only the cross pairs can share a
        # factor; cancelling them keeps the final gcd trivial.
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d2 != S_ONE:
            g = _gcd(n1, d2)
            if g != S_ONE:
                n1, d2 = n1.divexact(g), d2.divexact(g)
        if d1 != S_ONE:
            g = _gcd(n2, d1)
            if g != S_ONE:
                n2, d1 = n2.divexact(g), d1.divexact(g)
        return _unit_normalised(n1 * n2, d1 * d2)

    def mul_scalar(self, s: Scalar) -> "SFrac":
        if not s or not self.num:
            return SFrac.of_scalar(S_ZERO)
        den = self.den
        if den != S_ONE:
            g = _gcd(s, den)
            if g != S_ONE:
                s, den = s.divexact(g), den.divexact(g)
        return _unit_normalised(self.num * s, den)

    def __truediv__(self, other: "SFrac") -> "SFrac":
        return self * other.inverse()

    def inverse(self) -> "SFrac":
        if not self.num:
            raise ZeroDivisionError("division by zero SFrac")
        return _unit_normalised(self.den, self.num)

    def render(self) -> str:
        if self.den == S_ONE:
            return self.num.render()
        return f"[{self.num.render()}] / [{self.den.render()}]"

    def __repr__(self) -> str:
        return f"SFrac[{self.render()}]"


SF_ZERO = SFrac.of_scalar(S_ZERO)
SF_ONE = SFrac.of_scalar(S_ONE)


def _canonical(num: Scalar, den: Scalar) -> Tuple[Scalar, Scalar]:
    if not num:
        return S_ZERO, S_ONE
    inv = den.inverse_if_unit()
    if inv is not None:
        return num * inv, S_ONE
    g = _gcd(num, den)
    if g != S_ONE:
        num = num.divexact(g)
        den = den.divexact(g)
    return _norm_pair(num, den)


def _norm_pair(num: Scalar, den: Scalar) -> Tuple[Scalar, Scalar]:
    """Denominator normal form: lowest exponent 0, leading coeff 1."""
    shift = den.min_exp()
    if shift:
        den = den.shift(-shift)
        num = num.shift(-shift)
    _, lc = den.leading()
    if lc != CY_ONE:
        lcinv = lc.inverse()
        den = den.scale(lcinv)
        num = num.scale(lcinv)
    return num, den


def _unit_normalised(num: Scalar, den: Scalar) -> SFrac:
    """Build an SFrac from an already coprime pair, skipping the gcd."""
    obj = object.__new__(SFrac)
    if not num:
        obj.num, obj.den = S_ZERO, S_ONE
        return obj
    inv = den.inverse_if_unit()
    if inv is not None:
        obj.num, obj.den = num * inv, S_ONE
        return obj
    obj.num, obj.den = _norm_pair(num, den)
    return obj


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

def q_integer(k: int, z: Scalar) -> Scalar:
    """[k]_z = (z^k - z^-k)/(z - z^-1), for invertible (monomial-like) z.

    Computed as the balanced geometric sum z^(k-1) + z^(k-3) + ... so no
    division is needed; [0] = 0 and [-k] = -[k].
    """
    if k < 0:
        return -q_integer(-k, z)
    out = Scalar.zero()
    zinv = z.inverse_if_unit()
    if zinv is None:
        # Fall back to the defining quotient for non-monomial bases.
        num = (z ** k) - _unit_neg_pow(z, k)
        den = z - _unit_neg_pow(z, 1)
        return num.divexact(den)
    for j in range(k):
        out = out + (z ** (k - 1 - j)) * (zinv ** j)
    return out


def _unit_neg_pow(z: Scalar, k: int) -> Scalar:
    inv = z.inverse_if_unit()
    if inv is None:
        raise ValueError("non-invertible base")
    return inv ** k


def q_factorial(k: int, z: Scalar) -> Scalar:
    out = Scalar.one()
    for j in range(1, k + 1):
        out = out * q_integer(j, z)
    return out


def q_binomial(n: int, k: int, z: Scalar) -> Scalar:
    """Gaussian binomial [n choose k]_z, exact by construction."""
    if k < 0 or k > n:
        return Scalar.zero()
    num = q_factorial(n, z)
    den = q_factorial(k, z) * q_factorial(n - k, z)
    return num.divexact(den)


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------

class ScalarSeries:
    """Truncated power series in an auxiliary variable x (or x^-1).

    ``at_zero`` distinguishes expansions at 0 (coefficients of x^k) from
    expansions at infinity (coefficients of x^-k).  Coefficients are
    Scalars; the series is exact up to and including ``order``.
    """

    __slots__ = ("coeffs", "at_zero")

    def __init__(self, coeffs: Sequence[Scalar], at_zero: bool = True):
        self.coeffs = list(coeffs)
        self.at_zero = at_zero

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarSeries):
            return NotImplemented
        return self.at_zero == other.at_zero and self.coeffs == other.coeffs

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs[k]

    def __mul__(self, other: "ScalarSeries") -> "ScalarSeries":
        if self.at_zero != other.at_zero:
            raise ValueError("mixed expansion directions")
        n = min(self.order, other.order)
        out = [Scalar.zero() for _ in range(n + 1)]
        for i, a in enumerate(self.coeffs[: n + 1]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: n + 1 - i]):
                out[i + j] = out[i + j] + a * b
        return ScalarSeries(out, self.at_zero)

    def scale(self, s: Scalar) -> "ScalarSeries":
        return ScalarSeries([c * s for c in self.coeffs], self.at_zero)

    def render(self) -> List[str]:
        return [c.render() for c in self.coeffs]

    def __repr__(self) -> str:
        var = "x" if self.at_zero else "x^-1"
        body = ", ".join(c.render() for c in self.coeffs)
        return f"ScalarSeries[{var}: {body}]"


def taylor_quotient(num: Sequence[Scalar], den: Sequence[Scalar],
                    order: int, at_zero: bool = True) -> ScalarSeries:
    """Series of (sum num_k x^k)/(sum den_k x^k) up to x^order.

    Requires the constant term of the denominator to be a unit of the
    Laurent ring (a monomial); that holds for every quotient this
    package expands.  For an expansion at infinity, pass the
    coefficient lists already written in the variable x^-1.
    """
    if not den or not den[0]:
        raise ValueError("denominator constant term vanishes")
    d0inv = den[0].inverse_if_unit()
    if d0inv is None:
        raise ValueError("denominator constant term is not a unit")
    out: List[Scalar] = []
    for k in range(order + 1):
        acc = num[k] if k < len(num) else Scalar.zero()
        for j in range(max(0, k - len(den) + 1), k):
            acc = acc - out[j] * den[k - j]
        out.append(acc * d0inv)
    return ScalarSeries(out, at_zero)


# ---------------------------------------------------------------------------
# Convenient constants
# ---------------------------------------------------------------------------

Q = Scalar.q_power(1)
V = Scalar.q_power(Fraction(1, 2))        # q^(1/2)
Q_QUARTER = Scalar.q_power(Fraction(1, 4))
I_UNIT = Scalar.of(CY_I)                  # the imaginary unit as a Scalar
ZETA8 = Scalar.of(CY_ZETA)


def minus_one_pow(x) -> Scalar:
    """(-1)^x for quarter-integer x, with the branch (-1)^x = zeta^(4x)."""
    e = Fraction(x) * 4
    if e.denominator != 1:
        raise ValueError(f"(-1)^{x} needs a finer branch than supported")
    return ZETA8 ** (int(e) % 8)
