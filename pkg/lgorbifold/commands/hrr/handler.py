"""
Consistency checks tying the categorical side to the Hodge-theoretic side: the
Hirzebruch-Riemann-Roch formula, the Cardy condition and the decomposition of the diagonal.
"""

import logging
import typing as typ
from dataclasses import dataclass
from fractions import Fraction

from lgorbifold.core import config, linalg
from lgorbifold.core.errors import ConstructionError, EquivarianceError, ModelError
from lgorbifold.core.group import Sector, format_phases
from lgorbifold.core.mf import EquivMF, LGModel, Morphism, diagonal_kernel, dual, morphism_dual
from lgorbifold.core.poly import Monomial, Poly
from lgorbifold.core.scalars import CycNum
from lgorbifold.commands.chern.handler import boundary_bulk, chern_sector
from lgorbifold.commands.ext.handler import cardy_trace, euler_characteristic, ext_basis
from lgorbifold.commands.problems.handler import summarize_model
from lgorbifold.commands.residue.handler import pair_tops, sector_pairing
from lgorbifold.commands.hrr.models import (
    CardyPair,
    CardyReport,
    DiagonalPair,
    DiagonalReport,
    HRRReport,
    HRRSector,
)

logger = logging.getLogger(__name__)


def _check_same_model(P: EquivMF, Q: EquivMF):
    if not P.model.same_as(Q.model):
        raise ConstructionError(
            f"{P.name} and {Q.name} are factorizations of different models",
            module="hrr",
            invariant="common model",
        )


#
# Hirzebruch-Riemann-Roch
#


def hrr_sectors(P: EquivMF, Q: EquivMF) -> typ.List[typ.Tuple[Sector, Poly, Poly, CycNum]]:
    """(sector, top of ch(P^v), top of ch(Q), contribution) for every sector."""
    _check_same_model(P, Q)
    model = Q.model
    P_dual = dual(P)
    order = model.group.order
    rows = []
    for s, s_dual in zip(model.sectors, P_dual.model.sectors):
        cq = chern_sector(Q, s, 1)
        cp = chern_sector(P_dual, s_dual, -1)
        rows.append((s, cp.top_poly, cq.top_poly, sector_pairing(cp, cq, s, order, model)))
    return rows


def verify_hrr(
    P: EquivMF, Q: EquivMF, slack: Fraction = config.DEGREE_WINDOW_SLACK
) -> HRRReport:
    rows = hrr_sectors(P, Q)
    model = Q.model
    chi = model.field.zero
    for *_, contribution in rows:
        chi = chi + contribution
    chi_ext: typ.Optional[int] = None
    if model.graded:
        chi_ext = euler_characteristic(P, Q, slack)
        verdict = "equal" if chi == model.field.coerce(chi_ext) else "mismatch"
    else:
        logger.info("%s is not graded; comparing against Ext is skipped", model.w)
        verdict = "ext-skipped"
    integral = chi.is_integer()
    if verdict == "mismatch" or not integral:
        logger.warning("HRR for (%s, %s): sum of sectors %s, Ext gives %s", P.name, Q.name, chi, chi_ext)
    return HRRReport(
        model=summarize_model(model),
        p=P.name,
        q=Q.name,
        sectors=[
            HRRSector(
                element=format_phases(s.element.phases),
                n_g=s.n_g,
                denominator=str(s.denominator),
                ch_q_top=str(top_q),
                ch_p_dual_top=str(top_p),
                contribution=str(value),
            )
            for s, top_p, top_q, value in rows
        ],
        chi_hrr=str(chi),
        chi_ext=chi_ext,
        integral=integral,
        verdict=verdict,
    )


#
# Cardy condition
#


def cardy_pairing(a: Morphism, b: Morphism, P_dual: EquivMF) -> CycNum:
    """sum over sectors of <tau^{P^v}(a^v), tau^Q(b)>."""
    P, Q = a.source, b.source
    model = Q.model
    a_dual = morphism_dual(a, source_dual=P_dual, target_dual=P_dual)
    order = model.group.order
    total = model.field.zero
    for s, s_dual in zip(model.sectors, P_dual.model.sectors):
        left = boundary_bulk(P_dual, a_dual, s_dual, -1)
        if left.is_zero():
            continue
        right = boundary_bulk(Q, b, s, 1)
        total = total + sector_pairing(left, right, s, order, model)
    logger.debug("Cardy pairing for %s, %s: %s", P.name, Q.name, total)
    return total


def verify_cardy(
    P: EquivMF, Q: EquivMF, slack: Fraction = config.DEGREE_WINDOW_SLACK
) -> CardyReport:
    """
    For every basis pair a in Ext(P, P), b in Ext(Q, Q): the supertrace of c -> b c a on
    Ext(P, Q) equals the pairing of the boundary-bulk images of a^v and b.
    """
    _check_same_model(P, Q)
    basis_pp = ext_basis(P, P, slack)
    basis_qq = ext_basis(Q, Q, slack)
    basis_pq = ext_basis(P, Q, slack)
    P_dual = dual(P)
    pairs = []
    for a in basis_pp.classes:
        for b in basis_qq.classes:
            trace = cardy_trace(a, b, basis_pq)
            pairing = cardy_pairing(a.morphism, b.morphism, P_dual)
            pairs.append(
                CardyPair(
                    a=a.label, b=b.label, trace=str(trace), pairing=str(pairing), equal=trace == pairing
                )
            )
    verdict = "equal" if all(p.equal for p in pairs) else "mismatch"
    if verdict == "mismatch":
        logger.warning("Cardy condition fails for (%s, %s)", P.name, Q.name)
    return CardyReport(
        model=summarize_model(Q.model), p=P.name, q=Q.name, pairs=pairs, verdict=verdict
    )


#
# Decomposition of the diagonal
#


@dataclass(frozen=True)
class SectorBasisClass:
    """m dx_fixed on a sector; `monomial` is an exponent over the fixed variables."""

    sector: Sector
    monomial: Monomial

    def label(self) -> str:
        ring = self.sector.fixed_ring
        head = str(ring.monomial(self.monomial))
        tail = "".join(f" d{name}" for name in self.sector.fixed_vars)
        return f"{self.sector.element.label()} {head}{tail}"


def invariant_classes(model: LGModel) -> typ.List[SectorBasisClass]:
    """Standard monomials m of Jac(w_g) with m dx_fixed invariant, sector by sector."""
    group = model.group
    names = model.ring.names
    out = []
    for s in model.sectors:
        if s.n_g == 0:
            out.append(SectorBasisClass(s, ()))
            continue
        data = model.sector_milnor(s)
        if not data.is_isolated:
            raise ModelError(
                f"sector {s.element.label()} is not an isolated singularity",
                module="hrr",
                invariant="isolated singularity",
            )
        position = {name: names.index(name) for name in s.fixed_vars}
        for m in data.standard_monomials:
            exp = [0] * len(names)
            for name, e in zip(s.fixed_vars, m):
                exp[position[name]] = e + 1
            if not any(group.monomial_character(exp)):
                out.append(SectorBasisClass(s, tuple(m)))
    return out


def pairing_matrix(model: LGModel, classes: typ.Sequence[SectorBasisClass]) -> linalg.Matrix:
    f = model.field
    order = model.group.order
    m = linalg.zeros(f, len(classes), len(classes))
    for i, a in enumerate(classes):
        for j, b in enumerate(classes):
            if a.sector.element.index != b.sector.element.index:
                continue
            ring = a.sector.fixed_ring
            m[i][j] = pair_tops(ring.monomial(a.monomial), ring.monomial(b.monomial), a.sector, order, model)
    return m


def kernel_matrix(
    model: LGModel, classes: typ.Sequence[SectorBasisClass]
) -> linalg.Matrix:
    """Coefficients C_ab of ch(diagonal) = sum C_ab gamma_a(x) gamma_b(y) on the product sectors."""
    product, kernel = diagonal_kernel(model)
    f = product.field
    group = product.group
    c = linalg.zeros(f, len(classes), len(classes))
    by_sector: typ.Dict[int, typ.List[int]] = {}
    for i, a in enumerate(classes):
        by_sector.setdefault(a.sector.element.index, []).append(i)
    tops: typ.Dict[typ.Tuple[int, int], Poly] = {}
    for g1, rows in by_sector.items():
        for g2, cols in by_sector.items():
            s1, s2 = model.sectors[g1], model.sectors[g2]
            element = group.element(s1.element.phases + s2.element.phases)
            sector = product.sectors[element.index]
            top = tops.get((g1, g2))
            if top is None:
                top = chern_sector(kernel, sector, 1).top_poly
                tops[(g1, g2)] = top
            names = sector.fixed_ring.names
            for i in rows:
                for j in cols:
                    exp = [0] * len(names)
                    for name, e in zip(s1.fixed_vars, classes[i].monomial):
                        exp[names.index(name + "_1")] = e
                    for name, e in zip(s2.fixed_vars, classes[j].monomial):
                        exp[names.index(name + "_2")] = e
                    c[i][j] = f.coerce(top.terms.get(tuple(exp), f.zero))
    return c


def verify_diagonal_decomposition(model: LGModel) -> DiagonalReport:
    """
    Checks sum_i <gamma, T^i> <T_i, gamma'> = <gamma, gamma'> over a basis of invariant sector
    classes, i.e. M C^T M = M with M the pairing matrix and C the coefficients of ch(diagonal).
    """
    summary = summarize_model(model)
    try:
        classes = invariant_classes(model)
        pairing = pairing_matrix(model, classes)
        kernel = kernel_matrix(model, classes)
    except (ConstructionError, EquivarianceError, ModelError) as exc:
        logger.info("diagonal check is not applicable to %s: %s", model.w, exc)
        return DiagonalReport(model=summary, reason=str(exc), verdict="not-applicable")
    if classes:
        lhs = linalg.matmul(linalg.matmul(pairing, linalg.transpose(kernel)), pairing)
    else:
        lhs = []
    labels = [c.label() for c in classes]
    pairs = [
        DiagonalPair(gamma=labels[i], gamma_prime=labels[j], lhs=str(lhs[i][j]), rhs=str(pairing[i][j]))
        for i in range(len(classes))
        for j in range(len(classes))
    ]
    verdict = "equal" if linalg.equal(lhs, pairing) else "mismatch"
    if verdict == "mismatch":
        logger.warning("diagonal decomposition fails for %s", model.w)
    return DiagonalReport(
        model=summary,
        classes=labels,
        pairing=[[str(x) for x in row] for row in pairing],
        kernel=[[str(x) for x in row] for row in kernel],
        pairs=pairs,
        verdict=verdict,
    )
