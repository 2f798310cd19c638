"""Truncated bivariate Taylor numbers ``a + b s + c t + d st`` with s^2 = t^2 = 0.

Propagating these through a function f gives f, df/ds, df/dt and the mixed
partial d2f/dsdt exactly (to rounding), which is all the fundamental tensor
needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Taylor2:
    a: float
    b: float = 0.0  # d/ds
    c: float = 0.0  # d/dt
    d: float = 0.0  # d2/dsdt

    def _lift(self, other) -> "Taylor2":
        return other if isinstance(other, Taylor2) else Taylor2(float(other))

    def __add__(self, other):
        o = self._lift(other)
        return Taylor2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return Taylor2(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return Taylor2(
            self.a * o.a,
            self.a * o.b + self.b * o.a,
            self.a * o.c + self.c * o.a,
            self.a * o.d + self.d * o.a + self.b * o.c + self.c * o.b,
        )

    __rmul__ = __mul__

    def apply(self, f0: float, f1: float, f2: float) -> "Taylor2":
        """Compose with a scalar function given f(a), f'(a), f''(a)."""
        return Taylor2(f0, f1 * self.b, f1 * self.c, f1 * self.d + f2 * self.b * self.c)

    def reciprocal(self) -> "Taylor2":
        if self.a == 0.0:
            raise ZeroDivisionError("Taylor2 reciprocal of a number with zero constant part")
        inv = 1.0 / self.a
        return self.apply(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def sqrt(self) -> "Taylor2":
        if self.a <= 0.0:
            raise ValueError("Taylor2 sqrt needs a positive constant part")
        r = math.sqrt(self.a)
        return self.apply(r, 0.5 / r, -0.25 / (r * self.a))

    @property
    def mixed(self) -> float:
        return self.d


def seed(y: float, u: float, v: float) -> Taylor2:
    """The coordinate y + s u + t v."""
    return Taylor2(y, u, v, 0.0)
