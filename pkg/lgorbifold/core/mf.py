"""
Landau-Ginzburg orbifold models and their equivariant matrix factorizations.

A factorization lives on P = P0 + P1 with the even basis first; in that basis
delta = [[0, A], [B, 0]] with A: P1 -> P0 and B: P0 -> P1, so delta^2 = diag(AB, BA).
"""

import itertools
import logging
import typing as typ
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm

from lgorbifold.core import linalg
from lgorbifold.core.errors import (
    ConstructionError,
    EquivarianceError,
    GradingRequiredError,
    ModelError,
)
from lgorbifold.core.groebner import INFINITE, MilnorData, milnor_data
from lgorbifold.core.group import DiagGroup, Phases, Sector, build_group, sectors
from lgorbifold.core.poly import (
    Poly,
    PolyMatrix,
    PolyRing,
    VarSpec,
    matrix_from_scalars,
    matrix_identity,
    matrix_mul,
    matrix_scale,
    matrix_sub,
    matrix_transpose,
)
from lgorbifold.core.scalars import CycNum, CyclotomicField, conductor_for

logger = logging.getLogger(__name__)

ScalarMatrix = typ.Tuple[typ.Tuple[CycNum, ...], ...]
RhoPair = typ.Tuple[ScalarMatrix, ScalarMatrix]


def _freeze(m: typ.Sequence[typ.Sequence[typ.Any]]) -> typ.Tuple[typ.Tuple[typ.Any, ...], ...]:
    return tuple(tuple(row) for row in m)


def scalar_identity(f: CyclotomicField, size: int) -> ScalarMatrix:
    return _freeze(linalg.identity(f, size))


def scalar_block_diag(f: CyclotomicField, blocks: typ.Sequence[ScalarMatrix]) -> ScalarMatrix:
    size = sum(len(b) for b in blocks)
    out = linalg.zeros(f, size, size)
    offset = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[offset + i][offset + j] = x
        offset += len(b)
    return _freeze(out)


def poly_block_diag(ring: PolyRing, blocks: typ.Sequence[PolyMatrix]) -> PolyMatrix:
    size = sum(len(b) for b in blocks)
    out = [[ring.zero] * size for _ in range(size)]
    offset = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[offset + i][offset + j] = x
        offset += len(b)
    return _freeze(out)


def _embed_scalars(f: CyclotomicField, m: ScalarMatrix) -> ScalarMatrix:
    return tuple(tuple(f.coerce(x) for x in row) for row in m)


#
# Models
#


class LGModel:
    """
    An affine orbifold [A^n/G] with invariant potential w. Construct validated models with
    `build_model`; the constructor itself only stores data.
    """

    def __init__(
        self,
        ring: PolyRing,
        w: Poly,
        group: DiagGroup,
        graded: bool = True,
        d: typ.Optional[Fraction] = None,
    ):
        self.ring = ring
        self.w = w
        self.group = group
        self.graded = graded
        self.d = d if d is not None else w.homogeneous_degree()
        self._sector_milnor: typ.Dict[int, MilnorData] = {}
        # sector index -> residue data, filled by the residue handler
        self.sector_residues: typ.Dict[int, typ.Any] = {}

    def __repr__(self) -> str:
        return f"LGModel(w={self.w}, |G|={self.group.order})"

    @property
    def field(self) -> CyclotomicField:
        return self.ring.field

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    @cached_property
    def sectors(self) -> typ.List[Sector]:
        return sectors(self.group)

    @cached_property
    def milnor(self) -> MilnorData:
        return milnor_data(self.w, with_cofactors=True)

    def sector_potential(self, s: Sector) -> Poly:
        return s.restrict(self.w)

    def sector_milnor(self, s: Sector) -> MilnorData:
        key = s.element.index
        if key not in self._sector_milnor:
            self._sector_milnor[key] = milnor_data(self.sector_potential(s), with_cofactors=True)
        return self._sector_milnor[key]

    def with_potential(self, w: Poly) -> "LGModel":
        degree = w.homogeneous_degree()
        graded = self.graded and degree is not None
        return LGModel(self.ring, w, self.group, graded=graded, d=degree)

    def negated(self) -> "LGModel":
        return LGModel(self.ring, -self.w, self.group, graded=self.graded, d=self.d)

    def renamed(self, suffix: str) -> "LGModel":
        """Copy with every variable renamed name -> name + suffix."""
        variables = [VarSpec(v.name + suffix, v.weight) for v in self.ring.variables]
        ring = PolyRing(variables, self.field)
        rename = {name: name + suffix for name in self.ring.names}
        group = DiagGroup(ring, self.group.generators, cap=self.group.cap)
        return LGModel(ring, self.w.coerce(ring, rename), group, graded=self.graded, d=self.d)

    def require_graded(self):
        if not self.graded or self.d is None:
            raise GradingRequiredError("the direct Ext computation needs a graded model")

    def same_as(self, other: "LGModel") -> bool:
        return (
            self is other
            or (
                self.ring == other.ring
                and self.w == other.w
                and self.group.generators == other.group.generators
            )
        )


def make_ring(
    variables: typ.Sequence[VarSpec], generators: typ.Sequence[typ.Sequence[typ.Any]]
) -> PolyRing:
    """Ring over the smallest cyclotomic field containing every generator eigenvalue."""
    conductor = conductor_for(Fraction(p) for g in generators for p in g)
    return PolyRing(variables, CyclotomicField.of(conductor))


def build_model(
    ring: PolyRing,
    w: typ.Union[str, Poly],
    generators: typ.Sequence[typ.Sequence[typ.Any]] = (),
    graded: bool = True,
    cap: typ.Optional[int] = None,
    check_isolated: bool = True,
) -> LGModel:
    if isinstance(w, str):
        w = ring.parse(w)
    if w.constant_term():
        raise ModelError(
            f"potential must vanish at the origin, constant term is {w.constant_term()}",
            module="mf",
            invariant="w(0) = 0",
        )
    degree = w.homogeneous_degree()
    if graded and degree is None:
        raise ModelError(
            f"potential {w} is not quasi-homogeneous for weights "
            f"{[str(x) for x in ring.weights]}",
            module="mf",
            invariant="quasi-homogeneous potential",
        )
    group = build_group(generators, ring, w, cap=cap)
    model = LGModel(ring, w, group, graded=graded, d=degree)

    if check_isolated:
        if not model.milnor.is_isolated:
            raise ModelError(
                f"potential {w} does not have an isolated critical point",
                module="mf",
                invariant="isolated singularity",
            )
        for s in model.sectors:
            if s.n_g and not model.sector_milnor(s).is_isolated:
                raise ModelError(
                    f"sector {s.element.label()} restricts w to {model.sector_potential(s)}, "
                    "which is not an isolated singularity",
                    module="mf",
                    invariant="isolated singularity",
                )
    logger.debug("built model %r with %d sectors", model, group.order)
    return model


def product_model(left: LGModel, right: LGModel) -> LGModel:
    """(X x Y, w_left + w_right) with the product group; variable names must be disjoint."""
    clash = set(left.ring.names) & set(right.ring.names)
    if clash:
        raise ModelError(
            f"product model needs disjoint variables, shared: {sorted(clash)}",
            module="mf",
            invariant="disjoint product variables",
        )
    f = CyclotomicField.of(lcm(left.field.conductor, right.field.conductor))
    ring = PolyRing(left.ring.variables + right.ring.variables, f)
    w = left.w.coerce(ring) + right.w.coerce(ring)
    n1, n2 = left.nvars, right.nvars
    zero = Fraction(0)
    generators = [tuple(g) + (zero,) * n2 for g in left.group.generators] + [
        (zero,) * n1 + tuple(h) for h in right.group.generators
    ]
    graded = left.graded and right.graded and left.d == right.d
    group = build_group(generators, ring, w, cap=max(left.group.cap, right.group.cap) ** 2)
    return LGModel(ring, w, group, graded=graded, d=left.d if graded else None)


#
# Factorizations
#


@dataclass(frozen=True)
class EquivMF:
    model: LGModel
    A: PolyMatrix
    B: PolyMatrix
    weights_even: typ.Tuple[Fraction, ...]
    weights_odd: typ.Tuple[Fraction, ...]
    # one (rho0, rho1) pair per group generator
    rho: typ.Tuple[RhoPair, ...]
    name: str = ""

    def __repr__(self) -> str:
        return f"EquivMF({self.name or 'unnamed'}, rank={self.rank})"

    @property
    def rank(self) -> int:
        return len(self.A)

    @property
    def ring(self) -> PolyRing:
        return self.model.ring

    @property
    def potential(self) -> Poly:
        return self.model.w

    @property
    def parities(self) -> typ.List[int]:
        return [0] * self.rank + [1] * self.rank

    @property
    def weights(self) -> typ.Tuple[Fraction, ...]:
        return self.weights_even + self.weights_odd

    def internal_degrees(self) -> typ.List[Fraction]:
        """Internal degree of each basis vector: -we_i on P0 and -wo_j - d/2 on P1."""
        d = self.model.d or Fraction(0)
        return [-w for w in self.weights_even] + [-w - d / 2 for w in self.weights_odd]

    def delta(self) -> PolyMatrix:
        r = self.rank
        zero = self.ring.zero
        rows = []
        for i in range(r):
            rows.append((zero,) * r + tuple(self.A[i]))
        for i in range(r):
            rows.append(tuple(self.B[i]) + (zero,) * r)
        return tuple(rows)

    def with_name(self, name: str) -> "EquivMF":
        return EquivMF(
            self.model, self.A, self.B, self.weights_even, self.weights_odd, self.rho, name
        )

    #
    # Group action
    #

    @cached_property
    def _rho_images(self) -> typ.Optional[typ.List[RhoPair]]:
        group = self.model.group
        f = self.model.field
        identity = scalar_identity(f, self.rank)

        def mul(a: RhoPair, b: RhoPair) -> RhoPair:
            return _freeze(linalg.matmul(a[0], b[0])), _freeze(linalg.matmul(a[1], b[1]))

        def equal(a: RhoPair, b: RhoPair) -> bool:
            return a == b

        return group.extend_along_generators(list(self.rho), (identity, identity), mul, equal)

    def rho_of(self, element_index: int) -> RhoPair:
        images = self._rho_images
        if images is None:
            raise EquivarianceError(
                f"{self.name}: rho does not respect the group relations",
                invariant="rho is a homomorphism",
            )
        return images[element_index]

    def rho_full(self, element_index: int) -> ScalarMatrix:
        rho0, rho1 = self.rho_of(element_index)
        return scalar_block_diag(self.model.field, [rho0, rho1])

    def rho_full_gen(self, k: int) -> ScalarMatrix:
        r0, r1 = self.rho[k]
        return scalar_block_diag(self.model.field, [r0, r1])

    #
    # Validation
    #

    def validate(self) -> "EquivMF":
        r = self.rank
        label = self.name or "factorization"
        if r == 0:
            raise ConstructionError(f"{label}: rank must be positive")
        for mat, tag in ((self.A, "A"), (self.B, "B")):
            if len(mat) != r or any(len(row) != r for row in mat):
                raise ConstructionError(f"{label}: {tag} must be {r}x{r}", invariant="square blocks")
        if len(self.weights_even) != r or len(self.weights_odd) != r:
            raise ConstructionError(f"{label}: need {r} even and {r} odd generator weights")

        w_id = matrix_scale(matrix_identity(self.ring, r), self.potential)
        if matrix_mul(self.A, self.B, self.ring) != w_id:
            raise ConstructionError(f"{label}: A*B is not w*Id")
        if matrix_mul(self.B, self.A, self.ring) != w_id:
            raise ConstructionError(f"{label}: B*A is not w*Id")

        group = self.model.group
        if len(self.rho) != len(group.generators):
            raise EquivarianceError(
                f"{label}: {len(self.rho)} rho matrices for {len(group.generators)} generators"
            )
        for k, (rho0, rho1) in enumerate(self.rho):
            for mat in (rho0, rho1):
                if len(mat) != r or any(len(row) != r for row in mat):
                    raise EquivarianceError(f"{label}: rho of generator {k} must be {r}x{r}")
            if not self.is_equivariant_for(k):
                raise EquivarianceError(
                    f"{label}: rho0(g{k}) (g{k}.A) != A rho1(g{k}) or "
                    f"rho1(g{k}) (g{k}.B) != B rho0(g{k})",
                )
        if self._rho_images is None:
            raise EquivarianceError(
                f"{label}: rho does not respect the group relations",
                invariant="rho is a homomorphism",
            )

        if self.model.graded:
            self._check_grading(label)
        return self

    def is_equivariant_for(self, k: int) -> bool:
        """rho0 (g.A) = A rho1 and rho1 (g.B) = B rho0 for the k-th generator."""
        rho0, rho1 = self.rho[k]
        group = self.model.group
        p0 = matrix_from_scalars(self.ring, rho0)
        p1 = matrix_from_scalars(self.ring, rho1)
        g_a = act_on_matrix(group, k, self.A)
        g_b = act_on_matrix(group, k, self.B)
        return matrix_mul(p0, g_a, self.ring) == matrix_mul(
            self.A, p1, self.ring
        ) and matrix_mul(p1, g_b, self.ring) == matrix_mul(self.B, p0, self.ring)

    def _check_grading(self, label: str):
        d = self.model.d
        assert d is not None
        for i in range(self.rank):
            for j in range(self.rank):
                expected_a = self.weights_even[i] - self.weights_odd[j]
                expected_b = d + self.weights_odd[i] - self.weights_even[j]
                for entry, expected, tag in (
                    (self.A[i][j], expected_a, "A"),
                    (self.B[i][j], expected_b, "B"),
                ):
                    if entry and entry.homogeneous_degree() != expected:
                        raise ConstructionError(
                            f"{label}: {tag}[{i}][{j}] = {entry} should be homogeneous "
                            f"of degree {expected}",
                            invariant="graded entries",
                        )


def act_on_matrix(group: DiagGroup, k: int, m: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(group.act_by_generator(k, x) for x in row) for row in m)


def make_mf(
    model: LGModel,
    A: typ.Sequence[typ.Sequence[Poly]],
    B: typ.Sequence[typ.Sequence[Poly]],
    rho: typ.Sequence[typ.Tuple[typ.Sequence[typ.Sequence[typ.Any]], typ.Sequence[typ.Sequence[typ.Any]]]],
    weights_even: typ.Optional[typ.Sequence[Fraction]] = None,
    weights_odd: typ.Optional[typ.Sequence[Fraction]] = None,
    name: str = "",
) -> EquivMF:
    r = len(A)
    f = model.field
    rho_pairs = tuple(
        (
            tuple(tuple(f.coerce(x) for x in row) for row in r0),
            tuple(tuple(f.coerce(x) for x in row) for row in r1),
        )
        for r0, r1 in rho
    )
    return EquivMF(
        model=model,
        A=_freeze(A),
        B=_freeze(B),
        weights_even=tuple(Fraction(x) for x in (weights_even or [0] * r)),
        weights_odd=tuple(Fraction(x) for x in (weights_odd or [0] * r)),
        rho=rho_pairs,
        name=name,
    ).validate()


#
# Koszul factorizations
#


def koszul_basis(k: int) -> typ.Tuple[typ.List[typ.Tuple[int, ...]], typ.List[typ.Tuple[int, ...]]]:
    """Even and odd subsets of {0..k-1}, each ordered by size then lexicographically."""
    subsets = [s for size in range(k + 1) for s in itertools.combinations(range(k), size)]
    return [s for s in subsets if len(s) % 2 == 0], [s for s in subsets if len(s) % 2 == 1]


def koszul_matrices(
    pairs: typ.Sequence[typ.Tuple[Poly, Poly]], ring: PolyRing
) -> typ.Tuple[PolyMatrix, PolyMatrix]:
    """a_i acts by wedge with e_i, b_i by contraction, both with sign (-1)^#{j in I: j < i}."""
    even, odd = koszul_basis(len(pairs))
    e_index = {s: i for i, s in enumerate(even)}
    o_index = {s: i for i, s in enumerate(odd)}
    r = len(even)
    A = [[ring.zero] * r for _ in range(r)]
    B = [[ring.zero] * r for _ in range(r)]
    for subset in even + odd:
        is_even = len(subset) % 2 == 0
        for i, (a, b) in enumerate(pairs):
            sign = -1 if sum(1 for j in subset if j < i) % 2 else 1
            if i in subset:
                target = tuple(j for j in subset if j != i)
                coeff = b * sign
            else:
                target = tuple(sorted(subset + (i,)))
                coeff = a * sign
            if not coeff:
                continue
            if is_even:
                row, col = o_index[target], e_index[subset]
                B[row][col] = B[row][col] + coeff
            else:
                row, col = e_index[target], o_index[subset]
                A[row][col] = A[row][col] + coeff
    return _freeze(A), _freeze(B)


def _pair_degrees(
    pairs: typ.Sequence[typ.Tuple[Poly, Poly]], d: Fraction
) -> typ.List[Fraction]:
    degrees = []
    for i, (a, b) in enumerate(pairs):
        da, db = a.homogeneous_degree(), b.homogeneous_degree()
        if (a and da is None) or (b and db is None):
            raise ConstructionError(
                f"Koszul pair {i} ({a}, {b}) is not homogeneous", invariant="graded entries"
            )
        if da is None and db is None:
            raise ConstructionError(f"Koszul pair {i} is zero", invariant="graded entries")
        if da is not None and db is not None and da + db != d:
            raise ConstructionError(
                f"Koszul pair {i} ({a}, {b}) has degrees {da} + {db} != {d}",
                invariant="graded entries",
            )
        degrees.append(da if da is not None else d - typ.cast(Fraction, db))
    return degrees


def koszul_weights(
    pairs: typ.Sequence[typ.Tuple[Poly, Poly]], model: LGModel
) -> typ.Tuple[typ.Tuple[Fraction, ...], typ.Tuple[Fraction, ...]]:
    """weight(e_I) = sum of deg a_i over I minus d * ceil(|I|/2); zero when ungraded."""
    even, odd = koszul_basis(len(pairs))
    if not model.graded or model.d is None:
        return (Fraction(0),) * len(even), (Fraction(0),) * len(odd)
    d = model.d
    degrees = _pair_degrees(pairs, d)

    def weight(subset: typ.Tuple[int, ...]) -> Fraction:
        return sum((degrees[i] for i in subset), Fraction(0)) - d * ((len(subset) + 1) // 2)

    return tuple(weight(s) for s in even), tuple(weight(s) for s in odd)


def koszul_rho(pairs: typ.Sequence[typ.Tuple[Poly, Poly]], model: LGModel) -> typ.Tuple[RhoPair, ...]:
    """rho(g) e_I = prod over I of chi_{a_i}(g)^(-1) e_I; needs semi-invariant entries."""
    group = model.group
    f = model.field
    even, odd = koszul_basis(len(pairs))
    chars: typ.List[Phases] = []
    for i, (a, b) in enumerate(pairs):
        ca = group.semi_invariant_character(a) if a else None
        cb = group.semi_invariant_character(b) if b else None
        if (a and ca is None) or (b and cb is None):
            raise EquivarianceError(
                f"Koszul pair {i} ({a}, {b}) is not semi-invariant; supply rho explicitly",
                invariant="semi-invariant Koszul entries",
            )
        if ca is not None and cb is not None:
            if any((x + y) % 1 for x, y in zip(ca, cb)):
                raise EquivarianceError(
                    f"characters of Koszul pair {i} ({a}, {b}) are not inverse",
                    invariant="semi-invariant Koszul entries",
                )
        if ca is None:
            ca = tuple((-y) % 1 for y in typ.cast(Phases, cb))
        chars.append(typ.cast(Phases, ca))

    rho = []
    for k in range(len(group.generators)):

        def diag(subsets: typ.List[typ.Tuple[int, ...]]) -> ScalarMatrix:
            values = [f.exp_phase(-sum((chars[i][k] for i in s), Fraction(0))) for s in subsets]
            return _freeze(
                [[values[i] if i == j else f.zero for j in range(len(values))] for i in range(len(values))]
            )

        rho.append((diag(even), diag(odd)))
    return tuple(rho)


def koszul(
    pairs: typ.Sequence[typ.Tuple[typ.Union[str, Poly], typ.Union[str, Poly]]],
    model: LGModel,
    name: str = "",
    rho: typ.Optional[typ.Sequence[RhoPair]] = None,
) -> EquivMF:
    ring = model.ring
    parsed = [
        (ring.parse(a) if isinstance(a, str) else a, ring.parse(b) if isinstance(b, str) else b)
        for a, b in pairs
    ]
    if not parsed:
        raise ConstructionError("a Koszul factorization needs at least one pair")
    total = ring.zero
    for a, b in parsed:
        total = total + a * b
    if total != model.w:
        raise ConstructionError(f"sum a_i*b_i = {total} is not the potential {model.w}")
    A, B = koszul_matrices(parsed, ring)
    weights_even, weights_odd = koszul_weights(parsed, model)
    rho_pairs = tuple(rho) if rho is not None else koszul_rho(parsed, model)
    return EquivMF(model, A, B, weights_even, weights_odd, rho_pairs, name).validate()


#
# Algebra
#


def dual(P: EquivMF, name: typ.Optional[str] = None) -> EquivMF:
    """Factorization of -w: A' = B^T, B' = -A^T, rho'(g) = (rho(g)^-1)^T blockwise."""
    model = P.model.negated()
    A = matrix_transpose(P.B)
    B = tuple(tuple(-x for x in row) for row in matrix_transpose(P.A))
    rho = tuple(
        (
            _freeze(linalg.transpose(linalg.inverse(r0))),
            _freeze(linalg.transpose(linalg.inverse(r1))),
        )
        for r0, r1 in P.rho
    )
    d = P.model.d or Fraction(0)
    weights_even = tuple(-w for w in P.weights_even)
    weights_odd = tuple(-w - d for w in P.weights_odd)
    return EquivMF(
        model, A, B, weights_even, weights_odd, rho, name if name is not None else f"{P.name}^v"
    ).validate()


def twist(P: EquivMF, character: typ.Sequence[typ.Union[str, Fraction]], name: str = "") -> EquivMF:
    """Multiply rho by the character sending generator k to e^(2 pi i c_k)."""
    group = P.model.group
    group.character_values(character)
    f = P.model.field
    rho = []
    for (r0, r1), c in zip(P.rho, character):
        value = f.exp_phase(Fraction(c))
        rho.append(
            (
                tuple(tuple(x * value for x in row) for row in r0),
                tuple(tuple(x * value for x in row) for row in r1),
            )
        )
    return EquivMF(
        P.model, P.A, P.B, P.weights_even, P.weights_odd, tuple(rho), name or P.name
    ).validate()


def direct_sum(P: EquivMF, Q: EquivMF, name: str = "") -> EquivMF:
    if not P.model.same_as(Q.model):
        raise ConstructionError("direct sum of factorizations over different models")
    ring = P.ring
    f = P.model.field
    rho = tuple(
        (scalar_block_diag(f, [p0, q0]), scalar_block_diag(f, [p1, q1]))
        for (p0, p1), (q0, q1) in zip(P.rho, Q.rho)
    )
    return EquivMF(
        P.model,
        poly_block_diag(ring, [P.A, Q.A]),
        poly_block_diag(ring, [P.B, Q.B]),
        P.weights_even + Q.weights_even,
        P.weights_odd + Q.weights_odd,
        rho,
        name or f"{P.name}+{Q.name}",
    ).validate()


def tensor(P: EquivMF, Q: EquivMF, name: str = "") -> EquivMF:
    """
    Z/2-graded tensor product, delta = delta_P (x) 1 + S_P (x) delta_Q with S = diag(1, -1).
    Same ring: internal product (potentials add, rho_P (x) rho_Q). Disjoint variables: external
    product over the product model.
    """
    internal = P.ring == Q.ring
    if internal:
        if P.model.group.generators != Q.model.group.generators:
            raise ConstructionError("internal tensor product needs the same group")
        model = P.model.with_potential(P.potential + Q.potential)
        ring = model.ring
        p_delta, q_delta = P.delta(), Q.delta()
    else:
        model = product_model(P.model, Q.model)
        ring = model.ring
        p_delta = tuple(tuple(x.coerce(ring) for x in row) for row in P.delta())
        q_delta = tuple(tuple(x.coerce(ring) for x in row) for row in Q.delta())
    f = model.field

    pp, pq = P.parities, Q.parities
    full_p, full_q = len(pp), len(pq)
    basis = [(p, q) for p in range(full_p) for q in range(full_q)]
    even = [(p, q) for p, q in basis if (pp[p] + pq[q]) % 2 == 0]
    odd = [(p, q) for p, q in basis if (pp[p] + pq[q]) % 2 == 1]

    def delta_entry(row: typ.Tuple[int, int], col: typ.Tuple[int, int]) -> Poly:
        (p2, q2), (p1, q1) = row, col
        entry = ring.zero
        if q2 == q1:
            entry = entry + p_delta[p2][p1]
        if p2 == p1:
            entry = entry + q_delta[q2][q1] * (-1 if pp[p1] else 1)
        return entry

    A = tuple(tuple(delta_entry(r, c) for c in odd) for r in even)
    B = tuple(tuple(delta_entry(r, c) for c in even) for r in odd)

    n_left = len(P.model.group.generators)
    rho = []
    if internal:
        factors = [(P.rho_full_gen(k), Q.rho_full_gen(k)) for k in range(n_left)]
    else:
        eye_p = scalar_identity(P.model.field, full_p)
        eye_q = scalar_identity(Q.model.field, full_q)
        factors = [(P.rho_full_gen(k), eye_q) for k in range(n_left)] + [
            (eye_p, Q.rho_full_gen(k)) for k in range(len(Q.model.group.generators))
        ]
    for rp, rq in factors:
        rp, rq = _embed_scalars(f, rp), _embed_scalars(f, rq)

        def block(rows: typ.List[typ.Tuple[int, int]]) -> ScalarMatrix:
            return tuple(
                tuple(rp[p2][p1] * rq[q2][q1] for (p1, q1) in rows) for (p2, q2) in rows
            )

        rho.append((block(even), block(odd)))

    if model.graded and model.d is not None:
        d = model.d
        wp, wq = P.weights, Q.weights

        def weight(p: int, q: int) -> Fraction:
            return wp[p] + wq[q] + (d if pp[p] and pq[q] else 0)

        weights_even = tuple(weight(p, q) for p, q in even)
        weights_odd = tuple(weight(p, q) for p, q in odd)
    else:
        weights_even = (Fraction(0),) * len(even)
        weights_odd = (Fraction(0),) * len(odd)
    return EquivMF(
        model, A, B, weights_even, weights_odd, tuple(rho), name or f"{P.name}*{Q.name}"
    ).validate()


#
# Sectors
#


@dataclass(frozen=True)
class RestrictedMF:
    sector: Sector
    A: PolyMatrix
    B: PolyMatrix
    rho0: ScalarMatrix
    rho1: ScalarMatrix

    @property
    def rank(self) -> int:
        return len(self.A)


def restrict_to_sector(P: EquivMF, s: Sector) -> RestrictedMF:
    """Entries on the fixed locus X^g together with rho(g), the canonical automorphism there."""
    rho0, rho1 = P.rho_of(s.element.index)
    return RestrictedMF(
        sector=s,
        A=tuple(tuple(s.restrict(x) for x in row) for row in P.A),
        B=tuple(tuple(s.restrict(x) for x in row) for row in P.B),
        rho0=rho0,
        rho1=rho1,
    )


#
# Morphisms
#


@dataclass(frozen=True)
class Morphism:
    """A homogeneous map source -> target as a full (2r_target x 2r_source) matrix."""

    source: EquivMF
    target: EquivMF
    matrix: PolyMatrix
    parity: int

    def compose(self, other: "Morphism") -> "Morphism":
        """self o other."""
        return Morphism(
            other.source,
            self.target,
            matrix_mul(self.matrix, other.matrix, self.source.ring),
            (self.parity + other.parity) % 2,
        )

    def differential(self) -> PolyMatrix:
        ring = self.source.ring
        left = matrix_mul(self.target.delta(), self.matrix, ring)
        right = matrix_mul(self.matrix, self.source.delta(), ring)
        if self.parity:
            return tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(left, right))
        return matrix_sub(left, right)

    def is_closed(self) -> bool:
        return all(not x for row in self.differential() for x in row)


def identity_morphism(P: EquivMF) -> Morphism:
    return Morphism(P, P, matrix_identity(P.ring, 2 * P.rank), 0)


def morphism_dual(
    f: Morphism,
    source_dual: typ.Optional[EquivMF] = None,
    target_dual: typ.Optional[EquivMF] = None,
) -> Morphism:
    """f^v = S^|f| f^T : target^v -> source^v, S = diag(1, -1) on source^v."""
    transposed = matrix_transpose(f.matrix)
    if f.parity:
        parities = f.source.parities
        transposed = tuple(
            tuple(-x for x in row) if parities[i] else tuple(row) for i, row in enumerate(transposed)
        )
    return Morphism(
        target_dual if target_dual is not None else dual(f.target),
        source_dual if source_dual is not None else dual(f.source),
        tuple(tuple(r) for r in transposed),
        f.parity,
    )


def homotopy_defect(P: EquivMF, name: str) -> PolyMatrix:
    """d_i w Id - (delta d_i delta + d_i delta delta); zero for every genuine factorization."""
    ring = P.ring
    delta = P.delta()
    d_delta = tuple(tuple(x.derive(name) for x in row) for row in delta)
    anti = tuple(
        tuple(x + y for x, y in zip(r1, r2))
        for r1, r2 in zip(matrix_mul(delta, d_delta, ring), matrix_mul(d_delta, delta, ring))
    )
    return matrix_sub(matrix_scale(matrix_identity(ring, 2 * P.rank), P.potential.derive(name)), anti)


#
# Orbifold diagonal
#


def difference_quotients(w: Poly, ring: PolyRing, n: int) -> typ.List[Poly]:
    """
    t_i with sum_i (x_i - y_i) t_i = w(y) - w(x) in `ring`, whose first n variables are the
    x copies and the next n the y copies. t_i telescopes w(y_1..y_i, x_i+1..) - w(y_1..y_i-1, x_i..).
    """
    quotients = [ring.zero] * n
    for m, c in w.terms.items():
        for i in range(n):
            e = m[i]
            if not e:
                continue
            acc: typ.Dict[typ.Tuple[int, ...], CycNum] = {}
            for k in range(e):
                exp = [0] * (2 * n)
                for j in range(n):
                    if j < i:
                        exp[n + j] = m[j]
                    elif j > i:
                        exp[j] = m[j]
                exp[i] = k
                exp[n + i] = e - 1 - k
                acc[tuple(exp)] = -c
            quotients[i] = quotients[i] + Poly(ring, acc)
    return quotients


def diagonal_kernel(model: LGModel) -> typ.Tuple[LGModel, EquivMF]:
    """
    The G-equivariant diagonal on (X x X, -w(x) + w(y)): the sum over h in G of Koszul
    factorizations of x_i - lambda_i(h) y_i. (g1, g2) sends summand h to h g1 g2^-1 and
    acts on e_I there by prod_{i in I} lambda_i(g1).
    """
    n = model.nvars
    if n == 0:
        raise ModelError("the diagonal needs at least one variable", module="mf")
    left = model.negated().renamed("_1")
    right = model.renamed("_2")
    product = product_model(left, right)
    ring = product.ring
    f = ring.field
    group = model.group
    gens = ring.gens
    xs, ys = gens[:n], gens[n:]

    w_in_product = model.w.coerce(
        ring, {name: name + "_1" for name in model.ring.names}
    )
    base = difference_quotients(w_in_product, ring, n)

    summands_a, summands_b = [], []
    weights_even: typ.List[Fraction] = []
    weights_odd: typ.List[Fraction] = []
    for h in group.elements:
        lam = [f.coerce(x) for x in group.eigenvalues(h)]
        factors = [f.one] * n + lam
        pairs = [(xs[i] - ys[i] * lam[i], base[i].scale_variables(factors)) for i in range(n)]
        A, B = koszul_matrices(pairs, ring)
        summands_a.append(A)
        summands_b.append(B)
        we, wo = koszul_weights(pairs, product)
        weights_even.extend(we)
        weights_odd.extend(wo)

    even, odd = koszul_basis(n)
    block = len(even)
    size = block * group.order

    def rho_for(g1_index: int, g2_index: int) -> RhoPair:
        g1, g2 = group.elements[g1_index], group.elements[g2_index]
        lam1 = [f.coerce(x) for x in group.eigenvalues(g1)]
        shift = group.multiply(g1, group.inverse(g2))

        def build(subsets: typ.List[typ.Tuple[int, ...]]) -> ScalarMatrix:
            out = linalg.zeros(f, size, size)
            for h in group.elements:
                target = group.multiply(h, shift).index
                for a, s in enumerate(subsets):
                    value = f.one
                    for i in s:
                        value = value * lam1[i]
                    out[target * block + a][h.index * block + a] = value
            return _freeze(out)

        return build(even), build(odd)

    gen_elements = [group.element(g).index for g in group.generators]
    rho = tuple(rho_for(e, 0) for e in gen_elements) + tuple(rho_for(0, e) for e in gen_elements)
    delta_mf = EquivMF(
        product,
        poly_block_diag(ring, summands_a),
        poly_block_diag(ring, summands_b),
        tuple(weights_even),
        tuple(weights_odd),
        rho,
        "diagonal",
    ).validate()
    return product, delta_mf


def sector_is_isolated(model: LGModel, s: Sector) -> bool:
    return s.n_g == 0 or model.sector_milnor(s).milnor_number != INFINITE
