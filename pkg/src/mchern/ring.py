"""Exact arithmetic in a localized Grothendieck ring of varieties.

Values live in the ring of integer polynomials in the Lefschetz class
``L`` (the class of the affine line), localized at the projective-space
classes

    [P^mu] = 1 + L + ... + L^mu.

A :class:`MotivicClass` is an exact fraction ``num / prod_i [P^mu_i]``:
an integer-polynomial numerator together with a multiset of localization
exponents.  Equality is decided by cross-multiplication, so no canonical
reduced form is ever required; :meth:`MotivicClass.reduced` cancels
denominator factors that divide the numerator exactly when a compact
representative is wanted (reports, printing).

Coefficients are Python integers, hence arbitrary precision.  All values
are immutable and all operations are pure functions, so instances can be
freely shared between threads or tasks.
"""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from typing import Iterable, Optional, Union


class LPolynomial:
    """Integer polynomial in L, stored as an ascending coefficient tuple."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            if not isinstance(c, int):
                raise TypeError(f"integer coefficients required, got {c!r}")
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> "LPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "LPolynomial":
        return cls((1,))

    @classmethod
    def constant(cls, c: int) -> "LPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "LPolynomial":
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LPolynomial.constant(other)
        if not isinstance(other, LPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "LPolynomial") -> "LPolynomial":
        if isinstance(other, int):
            other = LPolynomial.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return LPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "LPolynomial":
        return LPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "LPolynomial") -> "LPolynomial":
        if isinstance(other, int):
            other = LPolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other: int) -> "LPolynomial":
        return LPolynomial.constant(other) - self

    def __mul__(self, other: Union["LPolynomial", int]) -> "LPolynomial":
        if isinstance(other, int):
            return LPolynomial(tuple(c * other for c in self.coeffs))
        if not isinstance(other, LPolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return LPolynomial.zero()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return LPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LPolynomial":
        if n < 0:
            raise ValueError("negative powers are not defined")
        result = LPolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, x):
        """Evaluate by Horner's rule; exact for int or Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divide_by_monic(self, divisor: "LPolynomial") -> tuple["LPolynomial", "LPolynomial"]:
        """Long division by a monic divisor; returns (quotient, remainder)."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        dd = divisor.degree
        rem = list(self.coeffs)
        if len(rem) <= dd:
            return LPolynomial.zero(), LPolynomial(rem)
        qlen = len(rem) - dd
        quot = [0] * qlen
        for i in reversed(range(qlen)):
            c = rem[i + dd]
            if c:
                quot[i] = c
                for j, dc in enumerate(divisor.coeffs):
                    rem[i + j] -= c * dc
        return LPolynomial(quot), LPolynomial(rem)

    def to_text(self) -> str:
        """Canonical ascending text form, e.g. ``1 - 2*L + L^2``."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "L" if i == 1 else f"L^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    _TERM_RE = re.compile(r"^(?:(?P<coeff>\d+)\*?)?(?P<var>L)?(?:\^(?P<exp>\d+))?$")

    @classmethod
    def from_text(cls, text: str) -> "LPolynomial":
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls.zero()
        tokens = re.findall(r"[+-]?[^+-]+", s)
        if "".join(tokens) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        coeffs: dict[int, int] = {}
        for token in tokens:
            sign = 1
            if token[0] == "+":
                token = token[1:]
            elif token[0] == "-":
                sign = -1
                token = token[1:]
            m = cls._TERM_RE.match(token)
            if not m or not token:
                raise ValueError(f"cannot parse term {token!r} in {text!r}")
            coeff, var, exp = m.group("coeff"), m.group("var"), m.group("exp")
            if coeff is None and var is None:
                raise ValueError(f"cannot parse term {token!r} in {text!r}")
            if exp is not None and var is None:
                raise ValueError(f"exponent without L in term {token!r}")
            e = int(exp) if exp is not None else (1 if var else 0)
            coeffs[e] = coeffs.get(e, 0) + sign * int(coeff or 1)
        out = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c
        return cls(out)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LPolynomial({self.to_text()!r})"


_PROJECTIVE_CACHE: dict[int, LPolynomial] = {}


def projective_poly(mu: int) -> LPolynomial:
    """The polynomial 1 + L + ... + L^mu; zero when mu < 0 (empty space)."""
    if mu < 0:
        return LPolynomial.zero()
    got = _PROJECTIVE_CACHE.get(mu)
    if got is None:
        got = _PROJECTIVE_CACHE.setdefault(mu, LPolynomial((1,) * (mu + 1)))
    return got


def _den_product(den: Iterable[int]) -> LPolynomial:
    out = LPolynomial.one()
    for mu in den:
        out = out * projective_poly(mu)
    return out


class MotivicClass:
    """Fraction num / prod [P^mu] in the localized Grothendieck ring.

    The denominator is a multiset of exponents mu >= 1 (factors with
    mu = 0 are the unit [P^0] = 1 and are dropped on construction).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[LPolynomial, int], den: Iterable[int] = ()):
        if isinstance(num, int):
            num = LPolynomial.constant(num)
        if not isinstance(num, LPolynomial):
            raise TypeError(f"numerator must be LPolynomial or int, got {num!r}")
        ds = []
        for mu in den:
            if mu < 0:
                raise ValueError("denominator exponents must be nonnegative")
            if mu > 0:
                ds.append(mu)
        self.num = num
        self.den: tuple[int, ...] = tuple(sorted(ds))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "MotivicClass":
        return cls(LPolynomial.zero())

    @classmethod
    def one(cls) -> "MotivicClass":
        return cls(LPolynomial.one())

    @classmethod
    def from_int(cls, c: int) -> "MotivicClass":
        return cls(LPolynomial.constant(c))

    @staticmethod
    def _coerce(value) -> Optional["MotivicClass"]:
        if isinstance(value, MotivicClass):
            return value
        if isinstance(value, int):
            return MotivicClass.from_int(value)
        if isinstance(value, LPolynomial):
            return MotivicClass(value)
        return None

    # -- ring structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other) -> "MotivicClass":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ca, cb = Counter(self.den), Counter(other.den)
        union = ca | cb
        na = self.num * _den_product((union - ca).elements())
        nb = other.num * _den_product((union - cb).elements())
        return MotivicClass(na + nb, union.elements())

    __radd__ = __add__

    def __neg__(self) -> "MotivicClass":
        return MotivicClass(-self.num, self.den)

    def __sub__(self, other) -> "MotivicClass":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MotivicClass":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "MotivicClass":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return MotivicClass(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ca, cb = Counter(self.den), Counter(o.den)
        shared = ca & cb
        left = self.num * _den_product((cb - shared).elements())
        right = o.num * _den_product((ca - shared).elements())
        return left == right

    __hash__ = None  # equality is cross-multiplicative; no stable hash

    def div_by_projective(self, mu: int) -> "MotivicClass":
        """Divide by [P^mu], i.e. append mu to the denominator multiset."""
        if mu < 0:
            raise ValueError("mu must be nonnegative")
        return MotivicClass(self.num, self.den + (mu,))

    # -- specializations ----------------------------------------------------

    def euler_specialize(self) -> Fraction:
        """Evaluation at L = 1; on [X] this is the Euler characteristic."""
        den = 1
        for mu in self.den:
            den *= mu + 1
        return Fraction(self.num.evaluate(1), den)

    def eval_at(self, q: int) -> Fraction:
        """Exact value at L = q for an integer q >= 2 (point-count style)."""
        if not isinstance(q, int) or q <= 1:
            raise ValueError("eval_at requires an integer q >= 2")
        den = 1
        for mu in self.den:
            den *= projective_poly(mu).evaluate(q)
        return Fraction(self.num.evaluate(q), den)

    # -- polynomiality and reduction ----------------------------------------

    def as_polynomial(self) -> Optional[LPolynomial]:
        """The quotient num / prod [P^mu] when it is exact over Z, else None.

        Factor-by-factor division decides this: the factors are monic, so
        divisibility by their product is order-independent.
        """
        num = self.num
        for mu in sorted(self.den, reverse=True):
            if num.is_zero():
                return num
            quot, rem = num.divide_by_monic(projective_poly(mu))
            if not rem.is_zero():
                return None
            num = quot
        return num

    def is_polynomial(self) -> bool:
        return self.as_polynomial() is not None

    def reduced(self) -> "MotivicClass":
        """Cancel denominator factors dividing the numerator exactly."""
        if self.num.is_zero():
            return MotivicClass.zero()
        num = self.num
        remaining: list[int] = []
        for mu in sorted(self.den, reverse=True):
            quot, rem = num.divide_by_monic(projective_poly(mu))
            if rem.is_zero():
                num = quot
            else:
                remaining.append(mu)
        return MotivicClass(num, remaining)

    # -- presentation --------------------------------------------------------

    def to_json(self) -> dict:
        red = self.reduced()
        return {"numerator": red.num.to_text(), "denominator": list(red.den)}

    @classmethod
    def from_json(cls, obj) -> "MotivicClass":
        if isinstance(obj, int):
            return cls.from_int(obj)
        if isinstance(obj, str):
            return cls(LPolynomial.from_text(obj))
        if not isinstance(obj, dict):
            raise ValueError(f"cannot decode motivic class from {obj!r}")
        num = obj.get("numerator", "0")
        if isinstance(num, list):
            poly = LPolynomial(num)
        else:
            poly = LPolynomial.from_text(str(num))
        return cls(poly, tuple(obj.get("denominator", ())))

    def __str__(self) -> str:
        red = self.reduced()
        if not red.den:
            return red.num.to_text()
        factors = " * ".join(f"[P^{mu}]" for mu in red.den)
        return f"({red.num.to_text()}) / ({factors})"

    def __repr__(self) -> str:
        return f"MotivicClass({self.num.to_text()!r}, den={self.den!r})"


# -- the named generators ----------------------------------------------------


def projective_class(mu: int) -> MotivicClass:
    """[P^mu] = 1 + L + ... + L^mu."""
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    return MotivicClass(projective_poly(mu))


def affine_class(n: int) -> MotivicClass:
    """L^n, the class of affine n-space."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return MotivicClass(LPolynomial.monomial(n))


def torus_class(n: int) -> MotivicClass:
    """(L - 1)^n, the class of the n-dimensional split torus."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return MotivicClass(LPolynomial((-1, 1)) ** n)
