"""Exact rational arithmetic, places of Q, and log-linear numbers.

A log-linear number is an element of the Q-vector space spanned by
``{1} | {log p : p prime}``.  Because 1 and the logarithms of the primes
are linearly independent over Q, equality of log-linear numbers is exact
coefficient-wise equality and the sign of a nonzero element can be
certified by interval arithmetic at high enough precision.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

__all__ = [
    "Place",
    "LogLinearNumber",
    "as_fraction",
    "as_loglinear",
    "value_sign",
    "certified_sign",
    "approximate",
    "padic_order",
    "log_abs",
    "relevant_places",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, LogLinearNumber) and x.is_rational:
        return x.constant
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _is_prime(p: int) -> bool:
    # sympy is imported lazily: it is only needed on first use and is slow
    # to import.
    import sympy

    return p > 1 and bool(sympy.isprime(p))


def _prime_factors(n: int) -> dict[int, int]:
    import sympy

    if n in (1, -1):
        return {}
    return dict(sympy.factorint(abs(n)))


@dataclass(frozen=True)
class Place:
    """A place of Q: the archimedean absolute value or a p-adic one."""

    prime: int | None = None  # None marks the archimedean place

    def __post_init__(self):
        if self.prime is not None and not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not a prime")

    @classmethod
    def infinite(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def sort_key(self):
        return (0, 0) if self.prime is None else (1, self.prime)

    def __lt__(self, other: "Place"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "inf" if self.prime is None else str(self.prime)


@dataclass(frozen=True)
class LogLinearNumber:
    """Exact element ``constant + sum coeff * log(p)`` of the log-linear span.

    ``logterms`` holds ``(prime, coefficient)`` pairs with primes strictly
    ascending and no zero coefficients, so representation is canonical.
    """

    constant: Fraction = Fraction(0)
    logterms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        primes = [p for p, _ in self.logterms]
        if primes != sorted(set(primes)):
            raise ValueError("log terms must have strictly ascending primes")
        if any(c == 0 for _, c in self.logterms):
            raise ValueError("zero coefficients must not be stored")

    # -- construction -------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> "LogLinearNumber":
        return cls(as_fraction(q), ())

    @classmethod
    def log_prime(cls, p: int, coeff=1) -> "LogLinearNumber":
        c = as_fraction(coeff)
        if c == 0:
            return cls()
        return cls(Fraction(0), ((p, c),))

    @staticmethod
    def _make(constant: Fraction, terms: dict[int, Fraction]) -> "LogLinearNumber":
        items = tuple(sorted((p, c) for p, c in terms.items() if c != 0))
        return LogLinearNumber(constant, items)

    # -- predicates ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.constant == 0 and not self.logterms

    @property
    def is_rational(self) -> bool:
        return not self.logterms

    def __bool__(self):
        return not self.is_zero

    # -- arithmetic ----------------------------------------------------

    def _terms_dict(self) -> dict[int, Fraction]:
        return dict(self.logterms)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = self._terms_dict()
        for p, c in other.logterms:
            terms[p] = terms.get(p, Fraction(0)) + c
        return self._make(self.constant + other.constant, terms)

    __radd__ = __add__

    def __neg__(self):
        return LogLinearNumber(-self.constant, tuple((p, -c) for p, c in self.logterms))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, LogLinearNumber):
            if other.is_rational:
                other = other.constant
            elif self.is_rational:
                return other * self.constant
            else:
                raise TypeError("product of two irrational log-linear numbers leaves the span")
        if isinstance(other, (int, Fraction)):
            q = as_fraction(other)
            if q == 0:
                return LogLinearNumber()
            return LogLinearNumber(self.constant * q, tuple((p, c * q) for p, c in self.logterms))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LogLinearNumber):
            if not other.is_rational:
                raise TypeError("division by an irrational log-linear number leaves the span")
            other = other.constant
        q = as_fraction(other)
        return self * (Fraction(1) / q)

    def __rtruediv__(self, other):
        if not self.is_rational:
            raise TypeError("division by an irrational log-linear number leaves the span")
        return as_fraction(other) / self.constant

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LogLinearNumber):
            return self.constant == other.constant and self.logterms == other.logterms
        if isinstance(other, (int, Fraction)):
            return not self.logterms and self.constant == other
        return NotImplemented

    def __hash__(self):
        if not self.logterms:
            return hash(self.constant)
        return hash((self.constant, self.logterms))

    def sign(self) -> int:
        return certified_sign(self)

    def _cmp(self, other) -> int:
        other = _coerce(other)
        if other is NotImplemented:
            raise TypeError("cannot compare with a non-exact value")
        return certified_sign(self - other)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- output --------------------------------------------------------

    def __float__(self):
        if self.is_zero:
            return 0.0
        lo, hi = _interval(self, 64)
        return float((mpmath.mpf(lo) + mpmath.mpf(hi)) / 2)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        if self.constant != 0:
            parts.append((self.constant, None))
        for p, c in self.logterms:
            parts.append((c, p))
        out = []
        for i, (c, p) in enumerate(parts):
            mag = -c if c < 0 else c
            if p is None:
                body = str(mag)
            elif mag == 1:
                body = f"log({p})"
            else:
                body = f"{mag}*log({p})"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    def __repr__(self):
        return f"LogLinearNumber({self})"

    def coefficient_map(self) -> dict[str, Fraction]:
        """Coefficients keyed by "constant" and the decimal prime strings."""
        out = {"constant": self.constant}
        for p, c in self.logterms:
            out[str(p)] = c
        return out


def _coerce(x):
    if isinstance(x, LogLinearNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return LogLinearNumber.from_rational(x)
    return NotImplemented


def as_loglinear(x) -> LogLinearNumber:
    v = _coerce(x)
    if v is NotImplemented:
        raise TypeError(f"cannot interpret {type(x).__name__} as a log-linear number")
    return v


def _interval(x: LogLinearNumber, prec: int):
    """Certified enclosure of the real value of x at the given binary precision."""
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec
        total = iv.mpf(x.constant.numerator) / x.constant.denominator
        for p, c in x.logterms:
            total += (iv.mpf(c.numerator) / c.denominator) * iv.log(p)
        return total.a, total.b
    finally:
        iv.prec = old


@functools.lru_cache(maxsize=1 << 16)
def certified_sign(x: LogLinearNumber) -> int:
    """Sign of the real number represented by x: -1, 0 or +1.

    Zero is decided exactly (all coefficients zero).  Otherwise intervals
    at doubling precision eventually exclude zero, since a nonzero
    coefficient vector represents a nonzero real.
    """
    if x.is_zero:
        return 0
    coeff_signs = set()
    if x.constant != 0:
        coeff_signs.add(1 if x.constant > 0 else -1)
    for _, c in x.logterms:
        coeff_signs.add(1 if c > 0 else -1)
    # 1 and every log p are positive reals, so uniform coefficient signs settle it
    if coeff_signs == {1}:
        return 1
    if coeff_signs == {-1}:
        return -1
    prec = 64
    while True:
        lo, hi = _interval(x, prec)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2


def value_sign(x) -> int:
    """Sign of an exact value, rational or log-linear."""
    if isinstance(x, LogLinearNumber):
        return certified_sign(x)
    x = as_fraction(x)
    return (x > 0) - (x < 0)


def approximate(x: LogLinearNumber, bits: int) -> tuple[str, float]:
    """Decimal approximation of x with a certified error bound.

    Returns ``(decimal_string, error)`` with ``|x - float(decimal_string)|
    <= error``.  Exact zero gives ``("0", 0.0)``.
    """
    if bits < 16:
        raise ValueError("need at least 16 bits")
    x = as_loglinear(x)
    if x.is_zero:
        return "0", 0.0
    lo, hi = _interval(x, bits + 16)
    old = mpmath.mp.prec
    try:
        mpmath.mp.prec = bits + 32
        lo = mpmath.mpf(lo)
        hi = mpmath.mpf(hi)
        mid = (lo + hi) / 2
        radius = (hi - lo) / 2
        digits = max(3, int(bits * 0.30103) + 2)
        text = mpmath.nstr(mid, digits)
        printed = mpmath.mpf(text)
        # printing error plus a binary/decimal conversion allowance
        err = radius + abs(mid - printed) + mpmath.mpf(2) ** (-bits - 8)
        return text, float(err * (1 + 2**-40))
    finally:
        mpmath.mp.prec = old


def padic_order(q, p: int) -> int:
    """Exponent of the prime p in the nonzero rational q."""
    q = as_fraction(q)
    if q == 0:
        raise ValueError("the zero rational has no p-adic order")
    if not _is_prime(p):
        raise ValueError(f"{p} is not a prime")

    def ordp(m: int) -> int:
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        return k

    return ordp(abs(q.numerator)) - ordp(q.denominator)


def log_abs(q, v: Place) -> LogLinearNumber:
    """log of the v-adic absolute value of a nonzero rational q.

    At a finite place p this is ``-ord_p(q) * log p``; at the archimedean
    place it is ``log |q| = sum_p ord_p(q) * log p``.  The constant term is
    always zero.
    """
    q = as_fraction(q)
    if q == 0:
        raise ValueError("log_abs of zero")
    if v.is_finite:
        return LogLinearNumber.log_prime(v.prime, -padic_order(q, v.prime))
    terms: dict[int, Fraction] = {}
    for p, k in _prime_factors(q.numerator).items():
        terms[p] = terms.get(p, Fraction(0)) + k
    for p, k in _prime_factors(q.denominator).items():
        terms[p] = terms.get(p, Fraction(0)) - k
    return LogLinearNumber._make(Fraction(0), terms)


def relevant_places(coeffs) -> list[Place]:
    """The archimedean place plus every prime dividing a numerator or
    denominator of the given nonzero rationals, primes ascending."""
    primes: set[int] = set()
    for c in coeffs:
        c = as_fraction(c)
        if c == 0:
            raise ValueError("zero coefficient has no relevant places")
        primes.update(_prime_factors(c.numerator))
        primes.update(_prime_factors(c.denominator))
    return [Place.infinite()] + [Place.finite(p) for p in sorted(primes)]
