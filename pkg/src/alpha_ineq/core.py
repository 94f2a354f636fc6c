"""Alpha-type real numbers a^alpha with exact base-space arithmetic.

An :class:`AlphaReal` stores the underlying real ``a`` as a sign and a
magnitude together with the fractal dimension ``alpha``.  Sums and products
act on the underlying reals, so ``1^a + 2^a = 3^a`` holds exactly whenever the
bases are exact numbers (``int`` or ``Fraction``).  :func:`value` is the
separate, lossy map to an ordinary float, ``sign * |a| ** alpha``.
"""

from __future__ import annotations

import enum
import math
import numbers
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError, DomainError, PoleError, RangeError

__all__ = [
    "Dimension",
    "AlphaReal",
    "Ordering",
    "make",
    "add",
    "sub",
    "neg",
    "mul",
    "scalar_mul",
    "power",
    "value",
    "cmp",
]

# Outside [_FLOAT_MIN, LOG_DOMAIN_THRESHOLD] value() works in the log domain.
LOG_DOMAIN_THRESHOLD = 1e300
_FLOAT_MIN = sys.float_info.min


@dataclass(frozen=True)
class Dimension:
    """Fractal dimension alpha, 0 < alpha <= 1."""

    alpha: float

    def __post_init__(self):
        a = self.alpha
        if type(a) is float and 0.0 < a <= 1.0:
            return
        if isinstance(a, bool) or not isinstance(a, numbers.Real):
            raise DomainError(f"alpha must be a real number, got {a!r}")
        a = float(a)
        if not (0.0 < a <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {a!r}")
        object.__setattr__(self, "alpha", a)

    def __float__(self) -> float:
        return self.alpha


def _as_dim(dim: Dimension | float) -> Dimension:
    return dim if type(dim) is Dimension else Dimension(dim)


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _sgn(t) -> int:
    return (t > 0) - (t < 0)


class AlphaReal:
    """The alpha-type number ``a^alpha`` for a signed real ``a``.

    Treat instances as immutable.  Equality and hashing use the signed base
    and the dimension, never the floating-point value.
    """

    __slots__ = ("sign", "base", "dim", "_signed")

    def __init__(self, sign: int, base, dim: Dimension | float):
        if sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {sign!r}")
        if not isinstance(base, numbers.Real) or isinstance(base, bool):
            raise DomainError(f"base must be a real number, got {base!r}")
        if isinstance(base, float) and not math.isfinite(base):
            raise DomainError(f"base must be finite, got {base!r}")
        if base < 0:
            raise DomainError(f"base must be nonnegative, got {base!r}")
        if (sign == 0) != (base == 0):
            raise DomainError("sign is 0 exactly when base is 0")
        self.sign = sign
        self.base = base
        self.dim = _as_dim(dim)
        self._signed = -base if sign < 0 else base

    @classmethod
    def _raw(cls, signed, dim: Dimension) -> "AlphaReal":
        # Unchecked constructor from a signed base; inputs come from exact ops.
        obj = object.__new__(cls)
        key = signed.numerator if type(signed) is Fraction else signed
        if key > 0:
            obj.sign, obj.base = 1, signed
        elif key < 0:
            obj.sign, obj.base = -1, -signed
        else:
            obj.sign, obj.base = 0, signed
        obj.dim = dim
        obj._signed = signed
        return obj

    @property
    def signed_base(self):
        """The underlying real ``a``."""
        return self._signed

    @property
    def alpha(self) -> float:
        return self.dim.alpha

    def __repr__(self) -> str:
        return f"AlphaReal({self.signed_base!r}, alpha={self.dim.alpha!r})"

    def __str__(self) -> str:
        return f"({self.signed_base})^{self.dim.alpha}"

    def __eq__(self, other):
        if type(other) is AlphaReal and other.dim is self.dim:
            return self._signed == other._signed
        if not isinstance(other, AlphaReal):
            return NotImplemented
        return self.dim.alpha == other.dim.alpha and self._signed == other._signed

    def __hash__(self):
        return hash((self._signed, self.dim.alpha))

    def __float__(self) -> float:
        return value(self)

    def __add__(self, other):
        if type(other) is AlphaReal and other.dim is self.dim:
            return AlphaReal._raw(self._signed + other._signed, self.dim)
        if not isinstance(other, AlphaReal):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, AlphaReal):
            return NotImplemented
        return sub(self, other)

    def __mul__(self, other):
        if type(other) is AlphaReal and other.dim is self.dim:
            prod = self._signed * other._signed
            if type(prod) is not float:
                return AlphaReal._raw(prod, self.dim)
        if isinstance(other, AlphaReal):
            return mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return scalar_mul(other, self)
        return NotImplemented

    def __neg__(self):
        return neg(self)

    def __pow__(self, m):
        return power(self, m)

    def __lt__(self, other):
        if type(other) is AlphaReal and other.dim is self.dim:
            return self._signed < other._signed
        return cmp(self, other) is Ordering.LESS

    def __le__(self, other):
        return cmp(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        if type(other) is AlphaReal and other.dim is self.dim:
            return self._signed > other._signed
        return cmp(self, other) is Ordering.GREATER

    def __ge__(self, other):
        return cmp(self, other) is not Ordering.LESS


def make(a, dim: Dimension | float) -> AlphaReal:
    """Return ``a^alpha``.

    >>> make(-2, 0.5)
    AlphaReal(-2, alpha=0.5)
    """
    kind = type(a)
    if kind is int or kind is Fraction:
        return AlphaReal._raw(a, _as_dim(dim))
    if isinstance(a, bool) or not isinstance(a, numbers.Real):
        raise DomainError(f"expected a real number, got {a!r}")
    if isinstance(a, float) and not math.isfinite(a):
        raise DomainError(f"non-finite input {a!r}")
    if not isinstance(a, (int, float, Fraction)):
        a = Fraction(a) if isinstance(a, numbers.Rational) else float(a)
    return AlphaReal._raw(a, _as_dim(dim))


def _check_dims(x: AlphaReal, y: AlphaReal) -> Dimension:
    if x.dim is not y.dim and x.dim.alpha != y.dim.alpha:
        raise DimensionError(
            f"cannot combine alpha={x.dim.alpha!r} with alpha={y.dim.alpha!r}"
        )
    return x.dim


def add(x: AlphaReal, y: AlphaReal) -> AlphaReal:
    """``a^alpha + b^alpha = (a + b)^alpha``."""
    dim = _check_dims(x, y)
    return AlphaReal._raw(x._signed + y._signed, dim)


def neg(x: AlphaReal) -> AlphaReal:
    return AlphaReal._raw(-x._signed, x.dim)


def sub(x: AlphaReal, y: AlphaReal) -> AlphaReal:
    dim = _check_dims(x, y)
    return AlphaReal._raw(x._signed - y._signed, dim)


def mul(x: AlphaReal, y: AlphaReal) -> AlphaReal:
    """``a^alpha b^alpha = (ab)^alpha``."""
    dim = _check_dims(x, y)
    a, b = x._signed, y._signed
    prod = a * b
    if type(prod) is float and a and b and not (_FLOAT_MIN <= abs(prod) < math.inf):
        # the float product left the normal range; keep it exact instead
        prod = Fraction(a) * Fraction(b)
    return AlphaReal._raw(prod, dim)


def scalar_mul(m, x: AlphaReal) -> AlphaReal:
    """Multiply the *value* of ``x`` by the real ``m``.

    The base is scaled by ``|m| ** (1/alpha)`` so that
    ``value(scalar_mul(m, x)) == m * value(x)``.
    """
    if isinstance(m, bool) or not isinstance(m, numbers.Real):
        raise DomainError(f"scalar must be real, got {m!r}")
    if isinstance(m, float) and not math.isfinite(m):
        raise DomainError(f"non-finite scalar {m!r}")
    alpha = x.dim.alpha
    s = _sgn(m) * x.sign
    if s == 0:
        return AlphaReal._raw(0, x.dim)
    am = abs(m)
    if am == 1:
        factor = 1
    elif alpha == 1.0:
        factor = am
    else:
        try:
            factor = math.pow(float(am), 1.0 / alpha)
        except OverflowError:
            factor = math.inf
        if math.isinf(factor):
            raise RangeError(
                f"|m|^(1/alpha) overflows for m={m!r}, alpha={alpha!r}; "
                f"log10 of the factor is {math.log10(float(am)) / alpha:.1f}"
            )
    if isinstance(factor, float):
        base = factor * float(x.base)
        if math.isinf(base):
            raise RangeError(f"scaled base overflows (m={m!r}, alpha={alpha!r})")
        if base == 0.0:
            raise RangeError(f"scaled base underflows (m={m!r}, alpha={alpha!r})")
    else:
        base = factor * x.base
    return AlphaReal._raw(s * base, x.dim)


def _is_integral(m) -> bool:
    if isinstance(m, int):
        return True
    if isinstance(m, Fraction):
        return m.denominator == 1
    return isinstance(m, float) and m.is_integer()


def power(x: AlphaReal, m) -> AlphaReal:
    """``(a^alpha)^m = (a^m)^alpha``.

    Integer exponents keep exact bases exact and accept negative bases;
    other exponents need ``a >= 0`` and go through floats.
    """
    if isinstance(m, bool) or not isinstance(m, numbers.Real):
        raise DomainError(f"exponent must be real, got {m!r}")
    if isinstance(m, float) and not math.isfinite(m):
        raise DomainError(f"non-finite exponent {m!r}")
    if x.sign == 0 and m < 0:
        raise PoleError(f"0 raised to negative exponent {m!r}")
    if _is_integral(m):
        k = int(m)
        if k == 0:
            return AlphaReal._raw(1, x.dim)
        b = x.base
        if k < 0 and isinstance(b, int):
            b = Fraction(b)
        sign = -1 if (x.sign < 0 and k % 2) else abs(x.sign)
        try:
            b = b**k
        except OverflowError as exc:
            raise RangeError(f"base {x.base!r} to the power {k} overflows") from exc
        return AlphaReal._raw(sign * b, x.dim)
    if x.sign < 0:
        raise DomainError(f"negative base with non-integer exponent {m!r}")
    if x.sign == 0:
        return x
    try:
        b = math.pow(float(x.base), float(m))
    except OverflowError as exc:
        raise RangeError(f"base {x.base!r} to the power {m!r} overflows") from exc
    if math.isinf(b):
        raise RangeError(f"base {x.base!r} to the power {m!r} overflows")
    return AlphaReal._raw(b, x.dim)


def _log_magnitude(b) -> float:
    if isinstance(b, Fraction):
        return math.log(b.numerator) - math.log(b.denominator)
    return math.log(b)


def value(x: AlphaReal) -> float:
    """The real number ``sign * base ** alpha``."""
    if x.sign == 0:
        return 0.0
    alpha = x.dim.alpha
    b = x.base
    try:
        fb = float(b)
    except OverflowError:
        fb = math.inf
    if _FLOAT_MIN <= fb <= LOG_DOMAIN_THRESHOLD:
        return x.sign * fb**alpha
    try:
        v = math.exp(alpha * _log_magnitude(b))
    except OverflowError:
        v = math.inf
    if math.isinf(v):
        raise RangeError(f"value of {x!r} exceeds the float range")
    return x.sign * v


def cmp(x: AlphaReal, y: AlphaReal) -> Ordering:
    """Order by underlying reals: ``a^alpha > b^alpha`` exactly when ``a > b``."""
    _check_dims(x, y)
    a, b = x._signed, y._signed
    if a > b:
        return Ordering.GREATER
    if a < b:
        return Ordering.LESS
    return Ordering.EQUAL
