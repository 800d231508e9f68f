"""Pochhammer symbols, log-domain factorial ratios, and terminating
hypergeometric sums.

These are the scalar building blocks for the analytic matrix elements.
Everything here is a pure function; the terminating series are summed with
Neumaier-compensated accumulation and ratio recurrences so that alternating
sums stay accurate up to degrees of a few hundred without leaving 64-bit
floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SignedLogValue",
    "pochhammer",
    "ln_pochhammer",
    "hyp1f1_terminating",
    "hyp3f2_terminating",
]


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as sign and natural log of its magnitude.

    Products and ratios are exact in the sign and additive in the log, which
    is what keeps normalization radicals like sqrt((g)_n (g)_m / (n! m!))
    representable when (g)_n itself overflows (n near 1000).
    """

    log_magnitude: float
    sign: int  # -1, 0, +1

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue(0.0, 0)
        return SignedLogValue(self.log_magnitude + other.log_magnitude,
                              self.sign * other.sign)

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        if other.sign == 0:
            raise ZeroDivisionError("division by an exactly-zero SignedLogValue")
        if self.sign == 0:
            return SignedLogValue(0.0, 0)
        return SignedLogValue(self.log_magnitude - other.log_magnitude,
                              self.sign * other.sign)

    def to_float(self) -> float:
        """Collapse to a plain float (may overflow to inf for huge logs)."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1.

    Total on all real a and n >= 0.  For a a negative integer -m the product
    runs through zero once n exceeds m, which reproduces the exceptional
    rule (-m)_n = 0 for n > m and (-1)^n m!/(m-n)! otherwise.
    """
    if n < 0:
        raise ValueError("pochhammer order n must be >= 0")
    out = 1.0
    for k in range(n):
        out *= a + k
        if out == 0.0:
            return 0.0
    return out


def ln_pochhammer(a: float, n: int) -> SignedLogValue:
    """(a)_n for a > 0 in signed-log form, via a log-gamma difference.

    Positive a never changes sign along the product, so the sign is always
    +1; negative or zero a must go through :func:`pochhammer` instead.
    """
    if n < 0:
        raise ValueError("ln_pochhammer order n must be >= 0")
    if not a > 0.0:
        raise ValueError(f"ln_pochhammer requires a > 0, got a={a}")
    if n == 0:
        return SignedLogValue(0.0, 1)
    return SignedLogValue(math.lgamma(a + n) - math.lgamma(a), 1)


def _neumaier_step(s: float, comp: float, term: float) -> tuple[float, float]:
    """One compensated-summation update; returns the new (sum, compensation)."""
    t = s + term
    if abs(s) >= abs(term):
        comp += (s - t) + term
    else:
        comp += (term - t) + s
    return t, comp


def hyp1f1_terminating(n: int, gamma: float, z: float) -> float:
    """Terminating confluent series 1F1(-n; gamma; z).

    Sum_{k=0}^{n} (-n)_k z^k / ((gamma)_k k!), an n-degree polynomial in z.
    Terms are generated by the ratio recurrence
    t_{k+1} = t_k (k - n) z / ((gamma + k)(k + 1)) and accumulated with
    compensation, which keeps the alternating sums accurate for large n.
    """
    if n < 0:
        raise ValueError("polynomial degree n must be >= 0")
    if not gamma > 0.0:
        raise ValueError(f"lower parameter must be > 0, got {gamma}")
    s, comp = 1.0, 0.0
    term = 1.0
    for k in range(n):
        term *= (k - n) * z / ((gamma + k) * (k + 1))
        if term == 0.0:
            break
        s, comp = _neumaier_step(s, comp, term)
    return s + comp


def hyp3f2_terminating(m: int, a: float, b: float, c: float, d: float) -> float:
    """Terminating 3F2(-m, a, b; c, d; 1).

    Sum_{k=0}^{m} (-m)_k (a)_k (b)_k / ((c)_k (d)_k k!).  If a or b is a
    negative integer -t with t < m the series truncates there exactly, which
    is how the even-power singular elements reduce to short sums.  A
    denominator Pochhammer vanishing before the numerator terminates is a
    domain error.
    """
    if m < 0:
        raise ValueError("polynomial degree m must be >= 0")
    s, comp = 1.0, 0.0
    term = 1.0
    for k in range(m):
        num = (k - m) * (a + k) * (b + k)
        if num == 0.0:
            break
        den = (c + k) * (d + k) * (k + 1)
        if den == 0.0:
            raise ValueError(
                f"3F2 denominator Pochhammer vanished at k={k + 1} "
                f"(c={c}, d={d}) before the series terminated"
            )
        term *= num / den
        s, comp = _neumaier_step(s, comp, term)
    return s + comp
