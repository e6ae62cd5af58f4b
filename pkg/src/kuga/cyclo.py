"""Exact roots of unity and singularity types.

A root of unity ``exp(2*pi*i * a/k)`` is stored through its exponent ``a/k``
reduced into ``[0, 1)``.  Everything that decides a verdict (products, powers,
RST sums) is done on these rationals; floating point only enters through
:func:`snap`, which pulls a numerically computed eigenvalue back onto the
nearest low-order root of unity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ExponentOutOfRange, NotARootOfUnity

DEFAULT_TOL = 1e-9

SLOT_LABELS = ("base-H2", "base-F", "base-V", "base-torus", "fiber")


@dataclass(frozen=True)
class UnityExponent:
    """The root of unity ``exp(2*pi*i * numerator/denominator)``."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError(f"denominator must be positive, got {self.denominator}")
        frac = Fraction(self.numerator, self.denominator) % 1
        object.__setattr__(self, "numerator", frac.numerator)
        object.__setattr__(self, "denominator", frac.denominator)

    @classmethod
    def from_fraction(cls, frac) -> "UnityExponent":
        frac = Fraction(frac)
        return cls(frac.numerator, frac.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def order(self) -> int:
        """Multiplicative order of the root; equals the reduced denominator."""
        return self.denominator

    def to_complex(self) -> complex:
        return cmath.exp(2j * math.pi * self.numerator / self.denominator)

    def over(self, k: int) -> int:
        """Integer ``a`` with ``self == a/k``; ``k`` must be a multiple of the order."""
        if k % self.denominator:
            raise ExponentOutOfRange(f"{self} is not a {k}-th root of unity")
        return self.numerator * (k // self.denominator)

    def inverse(self) -> "UnityExponent":
        return UnityExponent(-self.numerator, self.denominator)

    def __mul__(self, other: "UnityExponent") -> "UnityExponent":
        return multiply(self, other)

    def __pow__(self, m: int) -> "UnityExponent":
        return power(self, m)

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


ONE = UnityExponent(0)


def multiply(a: UnityExponent, b: UnityExponent) -> UnityExponent:
    den = math.lcm(a.denominator, b.denominator)
    num = a.numerator * (den // a.denominator) + b.numerator * (den // b.denominator)
    return UnityExponent(num, den)


def power(a: UnityExponent, m: int) -> UnityExponent:
    return UnityExponent(a.numerator * m, a.denominator)


def snap(z: complex, max_order: int = 12, tol: float = DEFAULT_TOL) -> UnityExponent:
    """Exponent ``a/k`` of the root of unity within ``tol`` of ``z``.

    The smallest admissible ``k <= max_order`` wins, so the answer is always
    reduced.  Raises :class:`NotARootOfUnity` if ``|z|`` is off the unit circle
    or no candidate is close enough.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = complex(z)
    if abs(abs(z) - 1.0) > tol:
        raise NotARootOfUnity(f"|z| = {abs(z):.17g} is not 1 (tol {tol:g})")
    turn = cmath.phase(z) / (2 * math.pi)
    for k in range(1, max_order + 1):
        a = round(turn * k) % k
        if abs(z - cmath.exp(2j * math.pi * a / k)) <= tol:
            return UnityExponent(a, k)
    raise NotARootOfUnity(f"{z!r} is not a root of unity of order <= {max_order} (tol {tol:g})")


@dataclass(frozen=True)
class SingularityType:
    """The type ``1/k(a_1, ..., a_m)`` of a torsion element.

    ``labels`` optionally tags each slot with where it lives (one of
    :data:`SLOT_LABELS`).
    """

    order: int
    exponents: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        if self.order < 1:
            raise ExponentOutOfRange(f"order must be >= 1, got {self.order}")
        exps = tuple(int(a) for a in self.exponents)
        for a in exps:
            if not 0 <= a < self.order:
                raise ExponentOutOfRange(f"exponent {a} outside [0, {self.order})")
        object.__setattr__(self, "exponents", exps)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(exps):
                raise ValueError("one label per exponent is required")
            bad = set(labels) - set(SLOT_LABELS)
            if bad:
                raise ValueError(f"unknown slot labels {sorted(bad)}")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_exponents(cls, exps: Sequence[UnityExponent], order: Optional[int] = None,
                       labels: Optional[Iterable[str]] = None) -> "SingularityType":
        """Assemble a type from exact slot exponents, over ``order`` (default: their lcm)."""
        if order is None:
            order = math.lcm(1, *(e.denominator for e in exps))
        return cls(order, tuple(e.over(order) for e in exps),
                   None if labels is None else tuple(labels))

    @property
    def rst_sum(self) -> Fraction:
        return Fraction(sum(self.exponents), self.order)

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)

    @property
    def is_quasi_reflection(self) -> bool:
        return sum(1 for a in self.exponents if a) == 1

    def unity_exponents(self) -> tuple:
        return tuple(UnityExponent(a, self.order) for a in self.exponents)

    def over(self, k: int) -> "SingularityType":
        """The same type written over the denominator ``k`` (a multiple of the current one)."""
        if k % self.order:
            raise ExponentOutOfRange(f"cannot rewrite 1/{self.order}(...) over {k}")
        f = k // self.order
        return SingularityType(k, tuple(a * f for a in self.exponents), self.labels)

    def reduced(self) -> "SingularityType":
        g = math.gcd(self.order, *self.exponents)
        return SingularityType(self.order // g, tuple(a // g for a in self.exponents), self.labels)

    def scaled(self, m: int) -> "SingularityType":
        """Type obtained by choosing ``xi**m`` in place of ``xi``, i.e. the type of ``g**m``."""
        return SingularityType(self.order, tuple(a * m % self.order for a in self.exponents),
                               self.labels)

    def __str__(self):
        return f"1/{self.order}({', '.join(str(a) for a in self.exponents)})"


def rst_sum(t: SingularityType) -> Fraction:
    return t.rst_sum


def is_quasi_reflection(t: SingularityType) -> bool:
    """True iff exactly one exponent is nonzero; the identity type is not one."""
    return t.is_quasi_reflection


def format_fraction(q: Fraction) -> str:
    """Rationals go out as ``num/den`` strings, never floats."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
