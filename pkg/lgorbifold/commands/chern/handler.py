"""
Hochschild Chern characters of equivariant factorizations, sector by sector.

On the fixed locus of g the class is str(rho(g) exp(-[nabla, delta])) with the trivial
connection nabla = d, truncated at the dimension of the fixed locus. Classes live in the
twisted de Rham model, so only the top-degree coefficient modulo Jac(w_g) is invariant.
"""

import logging
import typing as typ
from dataclasses import dataclass

from lgorbifold.core.errors import ContractViolationError, ModelError
from lgorbifold.core.forms import DiffForm, FormMatrix, d_matrix, exp_neg, supertrace
from lgorbifold.core.group import Sector, format_phases
from lgorbifold.core.groebner import normal_form
from lgorbifold.core.mf import EquivMF, LGModel, Morphism, restrict_to_sector
from lgorbifold.core.poly import Poly, PolyMatrix
from lgorbifold.core.scalars import CycNum
from lgorbifold.commands.chern.models import ChernReport, SectorChern
from lgorbifold.commands.problems.handler import summarize_model

logger = logging.getLogger(__name__)

# variable name -> 2r x 2r block-diagonal matrix commuting with rho
Connection = typ.Mapping[str, PolyMatrix]


@dataclass(frozen=True)
class SectorClass:
    sector: Sector
    raw_form: DiffForm
    top_poly: Poly
    sign_of_w: int = 1

    @property
    def scalar(self) -> CycNum:
        """Value of a class on a sector with no fixed variables."""
        return self.raw_form.components.get((), self.raw_form.ring.zero).constant_term()

    def is_zero(self) -> bool:
        return self.top_poly.is_zero()


def reduce_top(p: Poly, s: Sector, model: LGModel) -> Poly:
    """Normal form of a top coefficient modulo the Jacobian ideal of w on the sector."""
    if s.n_g == 0 or p.is_zero():
        return p
    data = model.sector_milnor(s)
    if not data.is_isolated:
        raise ModelError(
            f"sector {s.element.label()} is not an isolated singularity",
            module="chern",
            invariant="isolated singularity",
        )
    if data.basis is None:
        return p
    return normal_form(p, data.basis)[0]


def _restrict_matrix(m: PolyMatrix, s: Sector) -> PolyMatrix:
    return tuple(tuple(s.restrict(x) for x in row) for row in m)


def _connection_form(
    connection: Connection, s: Sector, parities: typ.Sequence[int]
) -> FormMatrix:
    ring = s.fixed_ring
    gamma = FormMatrix.zero(ring, parities)
    for name, matrix in connection.items():
        # dx of a moving variable vanishes on the fixed locus
        if name not in s.fixed_vars:
            continue
        dx = DiffForm.dx(ring, name)
        restricted = _restrict_matrix(matrix, s)
        gamma = gamma + FormMatrix(
            ring, [[dx.scale(x) for x in row] for row in restricted], parities
        )
    return gamma


def curvature(P: EquivMF, s: Sector, connection: typ.Optional[Connection] = None) -> FormMatrix:
    """[nabla, delta] restricted to the fixed locus: d delta, plus [Gamma, delta] when given."""
    restricted = restrict_to_sector(P, s)
    ring = s.fixed_ring
    form = d_matrix(restricted.A, restricted.B, ring)
    if connection:
        parities = P.parities
        delta = FormMatrix.from_polys(ring, _restrict_matrix(P.delta(), s), parities)
        gamma = _connection_form(connection, s, parities)
        form = form + gamma @ delta + delta @ gamma
    return form


def _sector_class(
    P: EquivMF, s: Sector, M: FormMatrix, sign_of_w: int
) -> SectorClass:
    raw = supertrace(M)
    top = raw.top_coefficient() if s.n_g else raw.components.get((), s.fixed_ring.zero)
    return SectorClass(
        sector=s,
        raw_form=raw,
        top_poly=reduce_top(top, s, P.model),
        sign_of_w=sign_of_w,
    )


def chern_sector(
    P: EquivMF,
    s: Sector,
    sign_of_w: int = 1,
    connection: typ.Optional[Connection] = None,
) -> SectorClass:
    rho0, rho1 = P.rho_of(s.element.index)
    ring = s.fixed_ring
    exp_form = exp_neg(curvature(P, s, connection), s.n_g)
    rho = FormMatrix.from_scalars(ring, _block_diag(rho0, rho1, P), P.parities)
    logger.debug("ch of %s on sector %s", P.name, s.element.label())
    return _sector_class(P, s, rho @ exp_form, sign_of_w)


def boundary_bulk(
    P: EquivMF,
    a: Morphism,
    s: Sector,
    sign_of_w: int = 1,
    connection: typ.Optional[Connection] = None,
) -> SectorClass:
    """str(a rho(g) exp(-[nabla, delta])) on the fixed locus of g, for a closed endomorphism a."""
    if a.source.rank != P.rank or a.target.rank != P.rank:
        raise ContractViolationError(
            f"boundary-bulk map of {P.name} needs an endomorphism of {P.name}"
        )
    if not a.is_closed():
        raise ContractViolationError(f"endomorphism of {P.name} is not closed")
    rho0, rho1 = P.rho_of(s.element.index)
    ring = s.fixed_ring
    exp_form = exp_neg(curvature(P, s, connection), s.n_g)
    rho = FormMatrix.from_scalars(ring, _block_diag(rho0, rho1, P), P.parities)
    a_form = FormMatrix.from_polys(ring, _restrict_matrix(a.matrix, s), P.parities)
    return _sector_class(P, s, a_form @ (rho @ exp_form), sign_of_w)


def _block_diag(rho0, rho1, P: EquivMF) -> typ.List[typ.List[CycNum]]:
    r = P.rank
    zero = P.model.field.zero
    rows = [list(row) + [zero] * r for row in rho0]
    rows += [[zero] * r + list(row) for row in rho1]
    return rows


def chern_all(P: EquivMF, sign_of_w: int = 1) -> typ.List[SectorClass]:
    return [chern_sector(P, s, sign_of_w) for s in P.model.sectors]


#
# Reports
#


def chern_report(P: EquivMF) -> ChernReport:
    rows = []
    for c in chern_all(P):
        s = c.sector
        rows.append(
            SectorChern(
                element=format_phases(s.element.phases),
                fixed_vars=list(s.fixed_vars),
                n_g=s.n_g,
                denominator=str(s.denominator),
                raw_form=str(c.raw_form),
                top=str(c.top_poly),
            )
        )
    return ChernReport(model=summarize_model(P.model), mf=P.name, sectors=rows)
