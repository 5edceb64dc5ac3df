"""
Sparse multivariate polynomials over Q(zeta_m) with a weighted grading.

Monomials are dense exponent tuples. The monomial order is weighted degree first, ties
broken by reverse lexicographic order, weights taken from the ring's VarSpecs.
"""

import re
import typing as typ
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm

from sympy.polys.monomials import monomial_div, monomial_mul

from lgorbifold.core.errors import ModelError, UnknownNameError
from lgorbifold.core.scalars import CycNum, CyclotomicField, Scalar

Monomial = typ.Tuple[int, ...]

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class VarSpec:
    name: str
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        if not _IDENTIFIER.match(self.name):
            raise ModelError(f"'{self.name}' is not an identifier", module="poly")
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.weight <= 0:
            raise ModelError(
                f"weight of '{self.name}' must be positive, got {self.weight}",
                module="poly",
                invariant="positive weights",
            )


class PolyRing:
    def __init__(self, variables: typ.Sequence[VarSpec], field: CyclotomicField):
        self.variables = tuple(variables)
        self.field = field
        self.names = tuple(v.name for v in self.variables)
        if len(set(self.names)) != len(self.names):
            raise ModelError(
                f"duplicate variable names in {self.names}",
                module="poly",
                invariant="unique variable names",
            )
        self.index = {name: i for i, name in enumerate(self.names)}
        self.weights = tuple(v.weight for v in self.variables)
        # integer degree bookkeeping
        self.weight_scale = lcm(1, *(w.denominator for w in self.weights))
        self.int_weights = tuple(int(w * self.weight_scale) for w in self.weights)
        self.nvars = len(self.variables)

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(self.names)} over Q(zeta_{self.field.conductor}))"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyRing):
            return NotImplemented
        return self.variables == other.variables and self.field is other.field

    def __hash__(self) -> int:
        return hash((self.variables, self.field.conductor))

    #
    # Order and degrees
    #

    def order_key(self, exp: Monomial) -> typ.Tuple[int, typ.Tuple[int, ...]]:
        wdeg = sum(w * e for w, e in zip(self.int_weights, exp))
        return wdeg, tuple(-e for e in reversed(exp))

    def weighted_degree(self, exp: Monomial) -> Fraction:
        return sum((w * e for w, e in zip(self.weights, exp)), Fraction(0))

    def monomials_of_degree(self, degree: Fraction) -> typ.List[Monomial]:
        """All monomials of the given weighted degree, in decreasing monomial order."""
        target = Fraction(degree) * self.weight_scale
        if target.denominator != 1 or target < 0:
            return []
        out: typ.List[Monomial] = []

        def extend(i: int, remaining: int, prefix: typ.List[int]):
            if i == self.nvars:
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            w = self.int_weights[i]
            for e in range(remaining // w + 1):
                prefix.append(e)
                extend(i + 1, remaining - e * w, prefix)
                prefix.pop()

        extend(0, int(target), [])
        out.sort(key=self.order_key, reverse=True)
        return out

    #
    # Constructors
    #

    @cached_property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @cached_property
    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, value: Scalar) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field.coerce(value)})

    def monomial(self, exp: Monomial, coeff: Scalar = 1) -> "Poly":
        return Poly(self, {tuple(exp): self.field.coerce(coeff)})

    def gen(self, name: str) -> "Poly":
        i = self._index_of(name)
        exp = [0] * self.nvars
        exp[i] = 1
        return self.monomial(tuple(exp))

    @property
    def gens(self) -> typ.Tuple["Poly", ...]:
        return tuple(self.gen(name) for name in self.names)

    def parse(self, text: str) -> "Poly":
        from lgorbifold.core.parser import parse

        return parse(text, self)

    def _index_of(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownNameError(
                f"unknown variable '{name}' (declared: {', '.join(self.names)})",
                module="poly",
            )

    #
    # Derived rings
    #

    def subring(self, names: typ.Iterable[str]) -> "PolyRing":
        """Ring on a subset of the variables, keeping this ring's order."""
        keep = set(names)
        for name in keep:
            self._index_of(name)
        return PolyRing([v for v in self.variables if v.name in keep], self.field)


class Poly:
    """Immutable polynomial; `terms` maps exponent tuples to nonzero CycNum coefficients."""

    def __init__(self, ring: PolyRing, terms: typ.Mapping[Monomial, CycNum]):
        self.ring = ring
        self.terms: typ.Dict[Monomial, CycNum] = {m: c for m, c in terms.items() if c}

    @classmethod
    def _clean(cls, ring: PolyRing, terms: typ.Dict[Monomial, CycNum]) -> "Poly":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    # -- coercion

    def _other(self, other: typ.Any) -> typ.Optional["Poly"]:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ModelError(
                    f"polynomials from different rings: {self.ring} and {other.ring}",
                    module="poly",
                )
            return other
        if isinstance(other, (int, Fraction, CycNum)):
            return self.ring.constant(other)
        return None

    # -- predicates

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> CycNum:
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def variables_used(self) -> typ.Set[str]:
        used = set()
        for m in self.terms:
            used.update(self.ring.names[i] for i, e in enumerate(m) if e)
        return used

    # -- arithmetic

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            s = c if s is None else s + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Poly._clean(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._clean(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            if not other:
                return self.ring.zero
            return Poly._clean(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._other(other)
        if other is None:
            return NotImplemented
        terms: typ.Dict[Monomial, CycNum] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                s = terms.get(m)
                terms[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly._clean(self.ring, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self * (1 / self.ring.field.coerce(other))
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = self.ring.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def mul_term(self, exp: Monomial, coeff: CycNum) -> "Poly":
        if not coeff:
            return self.ring.zero
        return Poly._clean(
            self.ring, {monomial_mul(m, exp): c * coeff for m, c in self.terms.items()}
        )

    # -- comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, CycNum)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- leading data

    @cached_property
    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.order_key)

    @property
    def leading_coefficient(self) -> CycNum:
        return self.terms[self.leading_monomial]

    def monic(self) -> "Poly":
        return self * self.leading_coefficient.inverse()

    def sorted_terms(self) -> typ.List[typ.Tuple[Monomial, CycNum]]:
        return sorted(self.terms.items(), key=lambda t: self.ring.order_key(t[0]), reverse=True)

    # -- gradings

    def weighted_degrees(self) -> typ.Set[Fraction]:
        return {self.ring.weighted_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weighted_degrees()) <= 1

    def homogeneous_degree(self) -> typ.Optional[Fraction]:
        """Weighted degree of a nonzero homogeneous polynomial, else None."""
        degrees = self.weighted_degrees()
        return degrees.pop() if len(degrees) == 1 else None

    # -- calculus and substitution

    def derive(self, name: str) -> "Poly":
        i = self.ring._index_of(name)
        terms: typ.Dict[Monomial, CycNum] = {}
        for m, c in self.terms.items():
            if m[i]:
                exp = list(m)
                exp[i] -= 1
                terms[tuple(exp)] = c * m[i]
        return Poly._clean(self.ring, terms)

    def restrict(self, zero_vars: typ.Iterable[str]) -> "Poly":
        """Substitute 0 for every listed variable."""
        idx = [self.ring._index_of(name) for name in zero_vars]
        return Poly._clean(
            self.ring, {m: c for m, c in self.terms.items() if not any(m[i] for i in idx)}
        )

    def scale_variables(self, factors: typ.Sequence[CycNum]) -> "Poly":
        """Substitute x_i -> factors[i] * x_i."""
        terms = {}
        for m, c in self.terms.items():
            scale = c
            for f, e in zip(factors, m):
                if e:
                    scale = scale * f**e
            terms[m] = scale
        return Poly._clean(self.ring, terms)

    def coerce(self, ring: PolyRing, rename: typ.Optional[typ.Mapping[str, str]] = None) -> "Poly":
        """Move into `ring` by variable name; variables in use must exist there."""
        rename = rename or {}
        positions = []
        for i, name in enumerate(self.ring.names):
            target = rename.get(name, name)
            positions.append(ring.index.get(target))
        terms = {}
        for m, c in self.terms.items():
            exp = [0] * ring.nvars
            for i, e in enumerate(m):
                if not e:
                    continue
                j = positions[i]
                if j is None:
                    raise UnknownNameError(
                        f"variable '{self.ring.names[i]}' does not exist in {ring}",
                        module="poly",
                    )
                exp[j] += e
            terms[tuple(exp)] = ring.field.coerce(c)
        return Poly(ring, terms)

    # -- printing

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.names, m)
                if e
            )
            if c.is_rational():
                value = c.to_fraction()
                negative = value < 0
                magnitude = abs(value)
                if not mono:
                    body = str(magnitude)
                elif magnitude == 1:
                    body = mono
                else:
                    body = f"{magnitude}*{mono}"
            else:
                negative = False
                body = f"({c})" if mono or pieces else str(c)
                if mono:
                    body = f"{body}*{mono}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({self})"


def weighted_degree_check(p: Poly, d: Fraction) -> bool:
    """True iff every term of p has weighted degree exactly d."""
    return all(p.ring.weighted_degree(m) == Fraction(d) for m in p.terms)


def derive(p: Poly, name: str) -> Poly:
    return p.derive(name)


def restrict(p: Poly, zero_vars: typ.Iterable[str]) -> Poly:
    return p.restrict(zero_vars)


def divides(small: Monomial, big: Monomial) -> bool:
    return monomial_div(big, small) is not None


#
# Polynomial matrices (tuples of rows)
#

PolyMatrix = typ.Tuple[typ.Tuple[Poly, ...], ...]


def matrix_zero(ring: PolyRing, rows: int, cols: int) -> PolyMatrix:
    return tuple(tuple(ring.zero for _ in range(cols)) for _ in range(rows))


def matrix_identity(ring: PolyRing, size: int) -> PolyMatrix:
    return tuple(
        tuple(ring.one if i == j else ring.zero for j in range(size)) for i in range(size)
    )


def matrix_mul(a: PolyMatrix, b: PolyMatrix, ring: PolyRing) -> PolyMatrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new_row = []
        for j in range(cols):
            acc = ring.zero
            for k in range(inner):
                if row[k] and b[k][j]:
                    acc = acc + row[k] * b[k][j]
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def matrix_add(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matrix_sub(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matrix_scale(a: PolyMatrix, c: typ.Union[Scalar, Poly]) -> PolyMatrix:
    return tuple(tuple(x * c for x in row) for row in a)


def matrix_transpose(a: PolyMatrix) -> PolyMatrix:
    return tuple(zip(*a)) if a else ()


def matrix_map(a: PolyMatrix, func: typ.Callable[[Poly], Poly]) -> PolyMatrix:
    return tuple(tuple(func(x) for x in row) for row in a)


def matrix_is_zero(a: PolyMatrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def matrix_from_scalars(ring: PolyRing, rows: typ.Sequence[typ.Sequence[Scalar]]) -> PolyMatrix:
    return tuple(tuple(ring.constant(c) for c in row) for row in rows)
