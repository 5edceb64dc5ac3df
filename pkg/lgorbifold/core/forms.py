"""
Differential forms with polynomial coefficients, and matrices of them.

A form is stored as {S: p} meaning sum p dx_S, with S an ascending tuple of variable
indices of its ring. Matrices of forms are elements of Omega (x) End(P) for a Z/2-graded P;
their product carries the sign (-1)^(|E_ij| |beta|) when a form beta moves past the
elementary matrix E_ij.
"""

import typing as typ
from fractions import Fraction
from math import factorial

from lgorbifold.core.errors import DimensionMismatchError
from lgorbifold.core.poly import Poly, PolyMatrix, PolyRing
from lgorbifold.core.scalars import CycNum, Scalar

Subset = typ.Tuple[int, ...]


def _merge_sign(s: Subset, t: Subset) -> typ.Optional[int]:
    """Sign of dx_S ^ dx_T relative to dx_(S u T), or None when they overlap."""
    if set(s) & set(t):
        return None
    inversions = sum(1 for a in s for b in t if a > b)
    return -1 if inversions % 2 else 1


class DiffForm:
    __slots__ = ("ring", "components")

    def __init__(self, ring: PolyRing, components: typ.Mapping[Subset, Poly]):
        self.ring = ring
        self.components: typ.Dict[Subset, Poly] = {
            tuple(s): p for s, p in components.items() if p
        }

    @classmethod
    def zero(cls, ring: PolyRing) -> "DiffForm":
        return cls(ring, {})

    @classmethod
    def function(cls, p: Poly) -> "DiffForm":
        return cls(p.ring, {(): p})

    @classmethod
    def scalar(cls, ring: PolyRing, value: Scalar) -> "DiffForm":
        return cls(ring, {(): ring.constant(value)})

    @classmethod
    def dx(cls, ring: PolyRing, name: str) -> "DiffForm":
        return cls(ring, {(ring.index[name],): ring.one})

    # -- predicates

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self) -> bool:
        return bool(self.components)

    def degrees(self) -> typ.Set[int]:
        return {len(s) for s in self.components}

    def part(self, degree: int) -> "DiffForm":
        return DiffForm(self.ring, {s: p for s, p in self.components.items() if len(s) == degree})

    @property
    def top_subset(self) -> Subset:
        return tuple(range(self.ring.nvars))

    def top_coefficient(self) -> Poly:
        """Coefficient of dx_1 ^ ... ^ dx_n."""
        return self.components.get(self.top_subset, self.ring.zero)

    # -- arithmetic

    def __add__(self, other: "DiffForm") -> "DiffForm":
        out = dict(self.components)
        for s, p in other.components.items():
            out[s] = out[s] + p if s in out else p
        return DiffForm(self.ring, out)

    def __neg__(self) -> "DiffForm":
        return DiffForm(self.ring, {s: -p for s, p in self.components.items()})

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def scale(self, c: typ.Union[Scalar, Poly]) -> "DiffForm":
        return DiffForm(self.ring, {s: p * c for s, p in self.components.items()})

    def wedge(self, other: "DiffForm") -> "DiffForm":
        out: typ.Dict[Subset, Poly] = {}
        for s, p in self.components.items():
            for t, q in other.components.items():
                sign = _merge_sign(s, t)
                if sign is None:
                    continue
                key = tuple(sorted(s + t))
                term = p * q if sign > 0 else -(p * q)
                out[key] = out[key] + term if key in out else term
        return DiffForm(self.ring, out)

    def sign_by_degree(self, flip: bool) -> "DiffForm":
        """(-1)^degree applied componentwise when flip is set."""
        if not flip:
            return self
        return DiffForm(
            self.ring, {s: -p if len(s) % 2 else p for s, p in self.components.items()}
        )

    def exterior_derivative(self) -> "DiffForm":
        out: typ.Dict[Subset, Poly] = {}
        for s, p in self.components.items():
            for i, name in enumerate(self.ring.names):
                if i in s:
                    continue
                partial = p.derive(name)
                if not partial:
                    continue
                sign = _merge_sign((i,), s)
                key = tuple(sorted((i,) + s))
                term = partial if sign == 1 else -partial
                out[key] = out[key] + term if key in out else term
        return DiffForm(self.ring, out)

    def coerce(self, ring: PolyRing) -> "DiffForm":
        """Move to a ring that lists the same variables in the same relative order."""
        position = [ring.index[name] for name in self.ring.names]
        return DiffForm(
            ring,
            {tuple(position[i] for i in s): p.coerce(ring) for s, p in self.components.items()},
        )

    # -- comparison / printing

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash(frozenset(self.components.items()))

    def __str__(self) -> str:
        if not self.components:
            return "0"
        pieces = []
        for s in sorted(self.components, key=lambda t: (len(t), t)):
            p = self.components[s]
            basis = "^".join(f"d{self.ring.names[i]}" for i in s)
            pieces.append(f"({p})" + (f"*{basis}" if basis else ""))
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"DiffForm({self})"


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    return a.wedge(b)


def exterior_derivative(p: typ.Union[Poly, DiffForm]) -> DiffForm:
    form = p if isinstance(p, DiffForm) else DiffForm.function(p)
    return form.exterior_derivative()


#
# Form-valued matrices
#


class FormMatrix:
    def __init__(
        self,
        ring: PolyRing,
        entries: typ.Sequence[typ.Sequence[DiffForm]],
        parities: typ.Sequence[int],
    ):
        self.ring = ring
        self.entries = tuple(tuple(row) for row in entries)
        self.parities = tuple(parities)
        if len(self.entries) != len(self.parities) or any(
            len(row) != len(self.parities) for row in self.entries
        ):
            raise DimensionMismatchError(
                f"form matrix must be {len(self.parities)}x{len(self.parities)}"
            )

    @property
    def size(self) -> int:
        return len(self.parities)

    @classmethod
    def zero(cls, ring: PolyRing, parities: typ.Sequence[int]) -> "FormMatrix":
        n = len(parities)
        return cls(ring, [[DiffForm.zero(ring)] * n for _ in range(n)], parities)

    @classmethod
    def identity(cls, ring: PolyRing, parities: typ.Sequence[int]) -> "FormMatrix":
        n = len(parities)
        return cls(
            ring,
            [
                [DiffForm.scalar(ring, 1) if i == j else DiffForm.zero(ring) for j in range(n)]
                for i in range(n)
            ],
            parities,
        )

    @classmethod
    def from_polys(
        cls, ring: PolyRing, m: typ.Sequence[typ.Sequence[Poly]], parities: typ.Sequence[int]
    ) -> "FormMatrix":
        return cls(ring, [[DiffForm.function(p) for p in row] for row in m], parities)

    @classmethod
    def from_scalars(
        cls, ring: PolyRing, m: typ.Sequence[typ.Sequence[CycNum]], parities: typ.Sequence[int]
    ) -> "FormMatrix":
        return cls(ring, [[DiffForm.scalar(ring, x) for x in row] for row in m], parities)

    def _check(self, other: "FormMatrix"):
        if self.parities != other.parities:
            raise DimensionMismatchError(
                f"form matrices over different modules: {self.size} vs {other.size}"
            )

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        self._check(other)
        return FormMatrix(
            self.ring,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.parities,
        )

    def __neg__(self) -> "FormMatrix":
        return FormMatrix(self.ring, [[-a for a in row] for row in self.entries], self.parities)

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        return self + (-other)

    def scale(self, c: typ.Union[Scalar, Poly]) -> "FormMatrix":
        return FormMatrix(
            self.ring, [[a.scale(c) for a in row] for row in self.entries], self.parities
        )

    def __matmul__(self, other: "FormMatrix") -> "FormMatrix":
        self._check(other)
        n = self.size
        p = self.parities
        out = []
        for i in range(n):
            row = []
            for k in range(n):
                acc = DiffForm.zero(self.ring)
                for j in range(n):
                    left, right = self.entries[i][j], other.entries[j][k]
                    if not left or not right:
                        continue
                    right = right.sign_by_degree((p[i] + p[j]) % 2 == 1)
                    acc = acc + left.wedge(right)
                row.append(acc)
            out.append(row)
        return FormMatrix(self.ring, out, self.parities)

    def is_zero(self) -> bool:
        return all(not a for row in self.entries for a in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormMatrix):
            return NotImplemented
        return self.parities == other.parities and (self - other).is_zero()

    def exterior_derivative(self) -> "FormMatrix":
        return FormMatrix(
            self.ring,
            [[a.exterior_derivative() for a in row] for row in self.entries],
            self.parities,
        )


def d_matrix(A: PolyMatrix, B: PolyMatrix, ring: PolyRing) -> FormMatrix:
    """Entrywise de Rham differential of delta = [[0, A], [B, 0]]."""
    r = len(A)
    zero = DiffForm.zero(ring)
    rows = []
    for i in range(r):
        rows.append([zero] * r + [exterior_derivative(x) for x in A[i]])
    for i in range(r):
        rows.append([exterior_derivative(x) for x in B[i]] + [zero] * r)
    return FormMatrix(ring, rows, [0] * r + [1] * r)


def exp_neg(M: FormMatrix, max_form_degree: int) -> FormMatrix:
    """sum_k (-M)^k / k! for k <= max_form_degree; exact when M has form degree >= 1."""
    result = FormMatrix.identity(M.ring, M.parities)
    power = FormMatrix.identity(M.ring, M.parities)
    neg = -M
    for k in range(1, max_form_degree + 1):
        power = power @ neg
        if power.is_zero():
            break
        result = result + power.scale(Fraction(1, factorial(k)))
    return result


def supertrace(M: FormMatrix, rho: typ.Optional[typ.Sequence[typ.Sequence[CycNum]]] = None) -> DiffForm:
    """str(rho M) = sum_i (-1)^p_i (rho M)_ii; rho is a block-diagonal scalar matrix."""
    if rho is not None:
        if len(rho) != M.size:
            raise DimensionMismatchError(
                f"rho is {len(rho)}x{len(rho)} but the form matrix is {M.size}x{M.size}"
            )
        M = FormMatrix.from_scalars(M.ring, rho, M.parities) @ M
    acc = DiffForm.zero(M.ring)
    for i, p in enumerate(M.parities):
        entry = M.entries[i][i]
        acc = acc - entry if p else acc + entry
    return acc


def supercommutator(X: FormMatrix, Y: FormMatrix, parity_x: int, parity_y: int) -> FormMatrix:
    """[X, Y] = XY - (-1)^(|X||Y|) YX for homogeneous X, Y of the given total parities."""
    sign = -1 if parity_x * parity_y % 2 else 1
    yx = Y @ X
    return X @ Y - (yx if sign == 1 else -yx)


def total_parity(M: FormMatrix) -> typ.Optional[int]:
    """Form degree plus module parity mod 2, or None when M is not homogeneous."""
    seen = set()
    for i, row in enumerate(M.entries):
        for j, a in enumerate(row):
            for degree in a.degrees():
                seen.add((degree + M.parities[i] + M.parities[j]) % 2)
    if len(seen) > 1:
        return None
    return seen.pop() if seen else 0
