"""
Ext between graded equivariant factorizations by linear algebra on the Hom complex.

A morphism f: P -> Q of internal degree t has entry f_ij of weighted degree
t + u^P_j - u^Q_i, where u are the internal degrees of the basis vectors. Every (t, parity)
piece of the Hom complex is finite-dimensional and d(f) = delta_Q f - (-1)^|f| f delta_P
raises t by d/2 and flips parity. Cohomology is taken on the invariants of
g * f = rho_Q(g) (g.f) rho_P(g)^-1.
"""

import logging
import typing as typ
from dataclasses import dataclass, field
from fractions import Fraction

from lgorbifold.core import config, linalg
from lgorbifold.core.errors import (
    ConstructionError,
    ContractViolationError,
    EquivarianceError,
    ResourceError,
)
from lgorbifold.core.mf import EquivMF, Morphism
from lgorbifold.core.poly import Monomial, PolyMatrix
from lgorbifold.core.scalars import CycNum
from lgorbifold.commands.ext.models import ExtPiece, ExtReport, ChiReport
from lgorbifold.commands.problems.handler import summarize_model

logger = logging.getLogger(__name__)

Coordinate = typ.Tuple[int, int, Monomial]
Vector = typ.List[CycNum]
PieceKey = typ.Tuple[Fraction, int]


@dataclass
class CohomologyPiece:
    degree: Fraction
    parity: int
    # cocycles independent modulo coboundaries
    representatives: typ.List[Vector]
    # spanning set of the coboundaries
    exact: typ.List[Vector]
    invariant_dimension: int

    @property
    def dimension(self) -> int:
        return len(self.representatives)


@dataclass(frozen=True)
class ExtClass:
    degree: Fraction
    parity: int
    morphism: Morphism
    label: str


@dataclass
class ExtBasis:
    P: EquivMF
    Q: EquivMF
    classes: typ.List[ExtClass]
    window: typ.Tuple[Fraction, Fraction]
    complex: "HomComplex"
    dimensions: typ.Dict[PieceKey, int] = field(default_factory=dict)

    def euler_characteristic(self) -> int:
        return sum(n if parity == 0 else -n for (_, parity), n in self.dimensions.items())

    def of_parity(self, parity: int) -> typ.List[ExtClass]:
        return [c for c in self.classes if c.parity == parity]


class HomComplex:
    def __init__(self, P: EquivMF, Q: EquivMF):
        if not P.model.same_as(Q.model):
            raise ConstructionError(
                f"Hom({P.name}, {Q.name}) needs both factorizations over the same model",
                module="ext",
            )
        P.model.require_graded()
        self.P = P
        self.Q = Q
        self.model = P.model
        self.ring = P.ring
        self.field = P.model.field
        self.d = typ.cast(Fraction, P.model.d)
        self.u_p = P.internal_degrees()
        self.u_q = Q.internal_degrees()
        self.parity_p = P.parities
        self.parity_q = Q.parities
        self._bases: typ.Dict[PieceKey, typ.List[Coordinate]] = {}
        self._indices: typ.Dict[PieceKey, typ.Dict[Coordinate, int]] = {}
        self._invariants: typ.Dict[PieceKey, typ.List[Vector]] = {}
        self._pieces: typ.Dict[PieceKey, CohomologyPiece] = {}
        self._rho_p_inverse: typ.Dict[int, linalg.Matrix] = {}
        self._diagonal = all(_is_diagonal(m) for pair in P.rho + Q.rho for m in pair)

    #
    # Ambient bases
    #

    def offsets(self) -> typ.List[Fraction]:
        return sorted({uq - up for uq in self.u_q for up in self.u_p})

    def basis(self, degree: Fraction, parity: int) -> typ.List[Coordinate]:
        key = (Fraction(degree), parity)
        if key not in self._bases:
            coords: typ.List[Coordinate] = []
            for i, pq in enumerate(self.parity_q):
                for j, pp in enumerate(self.parity_p):
                    if (pq + pp) % 2 != parity:
                        continue
                    for m in self.ring.monomials_of_degree(key[0] + self.u_p[j] - self.u_q[i]):
                        coords.append((i, j, m))
            self._bases[key] = coords
            self._indices[key] = {c: k for k, c in enumerate(coords)}
        return self._bases[key]

    def to_matrix(self, degree: Fraction, parity: int, vector: typ.Sequence[CycNum]) -> PolyMatrix:
        rows = [[self.ring.zero] * len(self.parity_p) for _ in self.parity_q]
        for (i, j, m), c in zip(self.basis(degree, parity), vector):
            if c:
                rows[i][j] = rows[i][j] + self.ring.monomial(m, c)
        return tuple(tuple(r) for r in rows)

    def to_vector(self, degree: Fraction, parity: int, matrix: PolyMatrix) -> Vector:
        self.basis(degree, parity)
        index = self._indices[(Fraction(degree), parity)]
        vector = [self.field.zero] * len(index)
        for i, row in enumerate(matrix):
            for j, entry in enumerate(row):
                for m, c in entry.terms.items():
                    k = index.get((i, j, m))
                    if k is None:
                        raise ContractViolationError(
                            f"morphism entry ({i}, {j}) = {entry} is not homogeneous of "
                            f"internal degree {degree} and parity {parity}",
                            module="ext",
                            invariant="homogeneous morphism",
                        )
                    vector[k] = vector[k] + c
        return vector

    def morphism(self, degree: Fraction, parity: int, vector: typ.Sequence[CycNum]) -> Morphism:
        return Morphism(self.P, self.Q, self.to_matrix(degree, parity, vector), parity)

    def differential(self, degree: Fraction, parity: int, vector: typ.Sequence[CycNum]) -> Vector:
        image = self.morphism(degree, parity, vector).differential()
        return self.to_vector(degree + self.d / 2, 1 - parity, image)

    #
    # Invariants
    #

    def _generator_scalar(self, k: int, coord: Coordinate) -> CycNum:
        i, j, m = coord
        rho_q = self.Q.rho[k][self.parity_q[i]]
        rho_p = self.P.rho[k][self.parity_p[j]]
        qi = i - self.Q.rank * self.parity_q[i]
        pj = j - self.P.rank * self.parity_p[j]
        phase = self.model.group.monomial_character(m)[k]
        return rho_q[qi][qi] * self.field.exp_phase(phase) / rho_p[pj][pj]

    def _act(self, element_index: int, degree: Fraction, parity: int, coord: Coordinate) -> Vector:
        i, j, m = coord
        group = self.model.group
        g = group.elements[element_index]
        rho_q = self.Q.rho_full(element_index)
        if element_index not in self._rho_p_inverse:
            self._rho_p_inverse[element_index] = linalg.inverse(self.P.rho_full(element_index))
        rho_p_inv = self._rho_p_inverse[element_index]
        scale = group.act(g, self.ring.monomial(m)).terms[m]
        index = self._indices[(degree, parity)]
        out = [self.field.zero] * len(index)
        for k, row in enumerate(rho_q):
            a = row[i]
            if not a:
                continue
            for l, b in enumerate(rho_p_inv[j]):
                if not b:
                    continue
                target = index.get((k, l, m))
                if target is None:
                    raise EquivarianceError(
                        "rho does not preserve the internal grading",
                        module="ext",
                        invariant="graded equivariant structure",
                    )
                out[target] = out[target] + a * scale * b
        return out

    def invariants(self, degree: Fraction, parity: int) -> typ.List[Vector]:
        key = (Fraction(degree), parity)
        if key in self._invariants:
            return self._invariants[key]
        coords = self.basis(*key)
        n = len(coords)
        group = self.model.group
        if self._diagonal:
            vectors = []
            for pos, coord in enumerate(coords):
                if all(
                    self._generator_scalar(k, coord) == 1 for k in range(len(group.generators))
                ):
                    vec = [self.field.zero] * n
                    vec[pos] = self.field.one
                    vectors.append(vec)
        else:
            weight = Fraction(1, group.order)
            images = []
            for coord in coords:
                acc = [self.field.zero] * n
                for g in group.elements:
                    acc = [x + y for x, y in zip(acc, self._act(g.index, key[0], parity, coord))]
                images.append([x * weight for x in acc])
            vectors = [images[k] for k in linalg.independent_columns(images)] if n else []
        self._invariants[key] = vectors
        return vectors

    #
    # Cohomology
    #

    def _image(self, degree: Fraction, parity: int, vectors: typ.Sequence[Vector]) -> typ.List[Vector]:
        return [self.differential(degree, parity, v) for v in vectors]

    def piece(self, degree: Fraction, parity: int) -> CohomologyPiece:
        key = (Fraction(degree), parity)
        if key in self._pieces:
            return self._pieces[key]
        degree = key[0]
        invariant = self.invariants(degree, parity)
        if not invariant:
            result = CohomologyPiece(degree, parity, [], [], 0)
            self._pieces[key] = result
            return result

        # cocycles: combinations of invariants killed by d
        images = self._image(degree, parity, invariant)
        target_dim = len(self.basis(degree + self.d / 2, 1 - parity))
        columns = linalg.transpose(images) if target_dim else []
        kernel = linalg.nullspace(columns, len(invariant), self.field)
        cocycles = [_combine(invariant, coeffs, self.field) for coeffs in kernel]

        previous = self.invariants(degree - self.d / 2, 1 - parity)
        exact = [
            v for v in self._image(degree - self.d / 2, 1 - parity, previous) if any(v)
        ]
        combined = exact + cocycles
        chosen = linalg.independent_columns(combined) if combined else []
        representatives = [combined[k] for k in chosen if k >= len(exact)]
        result = CohomologyPiece(degree, parity, representatives, exact, len(invariant))
        self._pieces[key] = result
        logger.debug(
            "Hom(%s, %s) degree %s parity %d: %d invariants, %d cocycles, dim %d",
            self.P.name,
            self.Q.name,
            degree,
            parity,
            len(invariant),
            len(cocycles),
            len(representatives),
        )
        return result

    def coordinates(self, morphism: Morphism, degree: Fraction) -> typ.Tuple[PieceKey, Vector]:
        """Coefficients of a closed morphism on the representatives of its piece."""
        key = (Fraction(degree), morphism.parity)
        piece = self.piece(*key)
        vector = self.to_vector(key[0], key[1], morphism.matrix)
        columns = piece.representatives + piece.exact
        if not columns:
            if any(vector):
                raise ContractViolationError(
                    "morphism is not a cocycle of the Hom complex", module="ext"
                )
            return key, []
        solution = linalg.solve(linalg.transpose(columns), vector)
        if solution is None:
            raise ContractViolationError(
                "morphism is not an invariant cocycle of the Hom complex", module="ext"
            )
        return key, solution[: len(piece.representatives)]


def _is_diagonal(m: typ.Sequence[typ.Sequence[CycNum]]) -> bool:
    return all(not x for i, row in enumerate(m) for j, x in enumerate(row) if i != j)


def _combine(vectors: typ.Sequence[Vector], coeffs: typ.Sequence[CycNum], f) -> Vector:
    out = [f.zero] * (len(vectors[0]) if vectors else 0)
    for c, v in zip(coeffs, vectors):
        if c:
            out = [x + c * y if y else x for x, y in zip(out, v)]
    return out


#
# Degree window
#


def reachable_degrees(weights: typ.Sequence[Fraction], bound: Fraction) -> typ.List[Fraction]:
    """Weighted degrees of monomials up to `bound`."""
    seen = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for value in frontier:
            for w in weights:
                candidate = value + w
                if candidate <= bound and candidate not in seen:
                    seen.add(candidate)
                    nxt.append(candidate)
        frontier = nxt
    return sorted(seen)


def degree_window(
    hom: HomComplex, slack: Fraction = config.DEGREE_WINDOW_SLACK
) -> typ.Tuple[Fraction, Fraction]:
    d = hom.d
    offsets = hom.offsets()
    socle = sum((d - 2 * w for w in hom.ring.weights), Fraction(0))
    return offsets[0], offsets[-1] + socle + d + Fraction(slack)


def _candidates(hom: HomComplex, lo: Fraction, hi: Fraction) -> typ.List[Fraction]:
    offsets = hom.offsets()
    degrees = reachable_degrees(hom.ring.weights, hi - offsets[0])
    return sorted({o + D for o in offsets for D in degrees if lo <= o + D <= hi})


def ext_basis(
    P: EquivMF,
    Q: EquivMF,
    slack: Fraction = config.DEGREE_WINDOW_SLACK,
    max_widenings: typ.Optional[int] = None,
) -> ExtBasis:
    hom = HomComplex(P, Q)
    d = hom.d
    lo, hi = degree_window(hom, slack)
    limit = config.MAX_WINDOW_WIDENINGS if max_widenings is None else max_widenings
    widenings = 0
    while True:
        guard = [t for t in _candidates(hom, lo, hi + d) if t > hi]
        if all(hom.piece(t, e).dimension == 0 for t in guard for e in (0, 1)):
            break
        widenings += 1
        if widenings > limit:
            raise ResourceError(
                f"Ext({P.name}, {Q.name}) still has cohomology past degree {hi} after "
                f"{limit} widenings",
                module="ext",
                invariant="finite degree window",
            )
        logger.warning(
            "Ext(%s, %s): cohomology in the guard band above %s, widening by %s",
            P.name,
            Q.name,
            hi,
            d,
        )
        hi += d

    classes: typ.List[ExtClass] = []
    dimensions: typ.Dict[PieceKey, int] = {}
    for t in _candidates(hom, lo, hi):
        for parity in (0, 1):
            piece = hom.piece(t, parity)
            if not piece.dimension:
                continue
            dimensions[(t, parity)] = piece.dimension
            for k, vec in enumerate(piece.representatives):
                classes.append(
                    ExtClass(
                        degree=t,
                        parity=parity,
                        morphism=hom.morphism(t, parity, vec),
                        label=f"{'even' if parity == 0 else 'odd'}[{t}]#{k}",
                    )
                )
    logger.debug("Ext(%s, %s): %d classes in window [%s, %s]", P.name, Q.name, len(classes), lo, hi)
    return ExtBasis(P, Q, classes, (lo, hi), hom, dimensions)


def euler_characteristic(P: EquivMF, Q: EquivMF, slack: Fraction = config.DEGREE_WINDOW_SLACK) -> int:
    return ext_basis(P, Q, slack).euler_characteristic()


#
# Cardy traces
#


def cardy_trace(a: ExtClass, b: ExtClass, basis_pq: ExtBasis) -> CycNum:
    """Supertrace of c -> (-1)^(|a||c|) b c a on Ext(P, Q)."""
    hom = basis_pq.complex
    f = hom.field
    total = f.zero
    for position, c in enumerate(basis_pq.classes):
        composed = b.morphism.compose(c.morphism.compose(a.morphism))
        degree = a.degree + b.degree + c.degree
        if (degree, composed.parity) != (c.degree, c.parity):
            # lands in another graded piece: no diagonal contribution
            continue
        key, coords = hom.coordinates(composed, degree)
        index = [k for k, other in enumerate(basis_pq.classes) if (other.degree, other.parity) == key]
        coefficient = coords[index.index(position)]
        if a.parity * c.parity % 2:
            coefficient = -coefficient
        total = total - coefficient if c.parity else total + coefficient
    return total


#
# Reports
#


def ext_report(P: EquivMF, Q: EquivMF, slack: Fraction = config.DEGREE_WINDOW_SLACK) -> ExtReport:
    basis = ext_basis(P, Q, slack)
    pieces = [
        ExtPiece(
            degree=str(t),
            parity=parity,
            dimension=n,
            representatives=[
                [[str(x) for x in row] for row in c.morphism.matrix]
                for c in basis.classes
                if (c.degree, c.parity) == (t, parity)
            ],
        )
        for (t, parity), n in basis.dimensions.items()
    ]
    return ExtReport(
        model=summarize_model(P.model),
        p=P.name,
        q=Q.name,
        window=[str(basis.window[0]), str(basis.window[1])],
        pieces=pieces,
        chi=basis.euler_characteristic(),
    )


def chi_report(P: EquivMF, Q: EquivMF, slack: Fraction = config.DEGREE_WINDOW_SLACK) -> ChiReport:
    basis = ext_basis(P, Q, slack)
    even = sum(n for (_, parity), n in basis.dimensions.items() if parity == 0)
    odd = sum(n for (_, parity), n in basis.dimensions.items() if parity == 1)
    return ChiReport(p=P.name, q=Q.name, ext_even=even, ext_odd=odd, chi=even - odd)


def identity_class(P: EquivMF) -> ExtClass:
    ring = P.ring
    size = 2 * P.rank
    matrix = tuple(
        tuple(ring.one if i == j else ring.zero for j in range(size)) for i in range(size)
    )
    return ExtClass(Fraction(0), 0, Morphism(P, P, matrix, 0), "identity")
