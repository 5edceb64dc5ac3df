"""
Exact arithmetic in a cyclotomic field Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) and reduced modulo the
m-th cyclotomic polynomial after every multiplication, so equality is a comparison of
coefficient tuples.
"""

import typing as typ
from fractions import Fraction
from functools import lru_cache
from math import lcm

from sympy import cyclotomic_poly, totient

from lgorbifold.core.errors import ConductorMismatchError, CycZeroDivisionError

Rational = typ.Union[int, Fraction]
Scalar = typ.Union[int, Fraction, "CycNum"]


#
# Helpers on dense univariate polynomials over Q (coefficients low -> high)
#


def _trim(coeffs: typ.List[Fraction]) -> typ.List[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: typ.Sequence[Fraction], b: typ.Sequence[Fraction]) -> typ.List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: typ.Sequence[Fraction], b: typ.Sequence[Fraction]) -> typ.List[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _poly_divmod(
    a: typ.Sequence[Fraction], b: typ.Sequence[Fraction]
) -> typ.Tuple[typ.List[Fraction], typ.List[Fraction]]:
    rem = list(a)
    _trim(rem)
    if len(rem) < len(b):
        return [], rem
    quot = [Fraction(0)] * (len(rem) - len(b) + 1)
    lead = b[-1]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, y in enumerate(b):
            rem[shift + i] -= factor * y
        _trim(rem)
    return _trim(quot), rem


#
# Field
#


class CyclotomicField:
    """Q(zeta_m). One instance per conductor; obtain it with `CyclotomicField.of(m)`."""

    def __init__(self, conductor: int):
        if conductor < 1:
            raise ConductorMismatchError(f"conductor must be positive, got {conductor}")
        self.conductor = conductor
        self.degree = int(totient(conductor))
        # monic, low -> high
        self.modulus = [
            Fraction(int(c))
            for c in reversed(cyclotomic_poly(conductor, polys=True).all_coeffs())
        ]
        self._powers = self._power_table()
        self.zero = CycNum(self, (Fraction(0),) * self.degree)
        self.one = self.from_rational(1)

    @classmethod
    @lru_cache(maxsize=None)
    def of(cls, conductor: int) -> "CyclotomicField":
        return cls(conductor)

    def _power_table(self) -> typ.List[typ.Tuple[Fraction, ...]]:
        """z^k reduced to the power basis, k = 0..m-1."""
        phi = self.degree
        table = []
        current = [Fraction(0)] * phi
        current[0] = Fraction(1)
        for _ in range(self.conductor):
            table.append(tuple(current))
            top = current[-1]
            shifted = [Fraction(0)] + current[:-1]
            if top:
                for i in range(phi):
                    shifted[i] -= top * self.modulus[i]
            current = shifted
        return table

    def __repr__(self) -> str:
        return f"CyclotomicField({self.conductor})"

    def __reduce__(self):
        return (CyclotomicField.of, (self.conductor,))

    #
    # Constructors
    #

    def from_rational(self, value: Rational) -> "CycNum":
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(value)
        return CycNum(self, tuple(coeffs))

    def from_power_basis(self, coeffs: typ.Sequence[Rational]) -> "CycNum":
        """Element from coefficients of 1, z, z^2, ... of any length (reduced)."""
        out = [Fraction(0)] * self.degree
        for k, c in enumerate(coeffs):
            if c:
                power = self._powers[k % self.conductor]
                for i, p in enumerate(power):
                    if p:
                        out[i] += Fraction(c) * p
        return CycNum(self, tuple(out))

    def zeta(self, power: int = 1) -> "CycNum":
        return CycNum(self, self._powers[power % self.conductor])

    def root_of_unity(self, order: int, power: int = 1) -> "CycNum":
        """zeta_order^power, embedded in Q(zeta_m)."""
        if order < 1 or self.conductor % order:
            raise ConductorMismatchError(
                f"order {order} does not divide the conductor {self.conductor}"
            )
        return self.zeta((self.conductor // order) * power)

    def exp_phase(self, phase: Fraction) -> "CycNum":
        """e^(2 pi i phase) for a rational phase whose denominator divides m."""
        phase = Fraction(phase)
        return self.root_of_unity(phase.denominator, phase.numerator)

    def coerce(self, value: Scalar) -> "CycNum":
        if isinstance(value, CycNum):
            if value.field is self:
                return value
            return self.embed(value)
        if isinstance(value, (int, Fraction)):
            return self.from_rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def embed(self, value: "CycNum") -> "CycNum":
        """Image of an element of a subfield Q(zeta_k), k | m."""
        source = value.field.conductor
        if self.conductor % source:
            raise ConductorMismatchError(
                f"Q(zeta_{source}) element used in Q(zeta_{self.conductor})"
            )
        step = self.conductor // source
        spread = [Fraction(0)] * (step * (len(value.coeffs) - 1) + 1)
        for k, c in enumerate(value.coeffs):
            spread[k * step] = c
        return self.from_power_basis(spread)


def make_root_of_unity(field: CyclotomicField, order: int, power: int) -> "CycNum":
    return field.root_of_unity(order, power)


def conductor_for(phases: typ.Iterable[Fraction]) -> int:
    """Smallest m such that every phase is an m-th root of unity."""
    return lcm(1, *(Fraction(p).denominator for p in phases))


#
# Elements
#


class CycNum:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: CyclotomicField, coeffs: typ.Tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    # -- coercion

    def _other(self, other: typ.Any) -> typ.Optional["CycNum"]:
        if isinstance(other, CycNum):
            if other.field is not self.field:
                raise ConductorMismatchError(
                    f"mixing Q(zeta_{self.field.conductor}) and Q(zeta_{other.field.conductor})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    # -- predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integer(self) -> bool:
        return self.is_rational() and self.coeffs[0].denominator == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return CycNum(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return CycNum(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.field, tuple(a * other for a in self.coeffs))
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self.field.degree == 1:
            return CycNum(self.field, (self.coeffs[0] * other.coeffs[0],))
        return self.field.from_power_basis(_poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise CycZeroDivisionError("division by zero in Q(zeta_m)")
        if self.field.degree == 1:
            return CycNum(self.field, (1 / self.coeffs[0],))
        # extended Euclid: s*self + t*modulus = 1
        r0, r1 = list(self.field.modulus), _trim(list(self.coeffs))
        s0: typ.List[Fraction] = []
        s1: typ.List[Fraction] = [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 is a nonzero constant since the modulus is irreducible
        lead = r0[0]
        return self.field.from_power_basis([c / lead for c in s0])

    def __truediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = self.field.one
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- comparison / hashing

    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.conductor, self.coeffs))

    # -- printing (polynomial grammar: rationals and z(m,k))

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                body = str(abs(c))
            else:
                root = f"z({self.field.conductor},{k})"
                body = root if abs(c) == 1 else f"{abs(c)}*{root}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"CycNum({self})"


def arith(a: CycNum, b: Scalar, op: str) -> CycNum:
    """Field arithmetic by operator name: add, sub, mul, div."""
    operations: typ.Dict[str, typ.Callable[[CycNum, typ.Any], CycNum]] = {
        "add": CycNum.__add__,
        "sub": CycNum.__sub__,
        "mul": CycNum.__mul__,
        "div": CycNum.__truediv__,
    }
    try:
        operation = operations[op]
    except KeyError:
        raise ValueError(f"'{op}' is not a field operation (add, sub, mul, div)")
    return operation(a, b)
