"""
Grothendieck residues Res[h dx / (d_1 w, ..., d_n w)] by the transformation law.

Once x_i^N_i = sum_j a_ij d_j w is known, Res[h dx / dw] = Res[h det(a) dx / x^N], which is
the coefficient of x^(N - 1) in h det(a).
"""

import itertools
import logging
import typing as typ
from dataclasses import dataclass
from fractions import Fraction

from lgorbifold.core import linalg
from lgorbifold.core.errors import ModelError
from lgorbifold.core.group import Sector, format_phases
from lgorbifold.core.groebner import MilnorData, milnor_data, normal_form
from lgorbifold.core.mf import LGModel
from lgorbifold.core.poly import Monomial, Poly, PolyRing
from lgorbifold.core.scalars import CycNum
from lgorbifold.commands.chern.handler import SectorClass
from lgorbifold.commands.problems.handler import summarize_model
from lgorbifold.commands.residue.models import MilnorReport, ResidueCheck

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidueProblem:
    potential: Poly
    partials: typ.Tuple[Poly, ...]
    lift_exponents: typ.Tuple[int, ...]
    # cofactors[i][j] = a_ij with x_i^N_i = sum_j a_ij partials[j]
    cofactors: typ.Tuple[typ.Tuple[Poly, ...], ...]
    milnor: MilnorData

    @property
    def ring(self) -> PolyRing:
        return self.potential.ring

    def lift_holds(self) -> bool:
        ring = self.ring
        for i, (n, row) in enumerate(zip(self.lift_exponents, self.cofactors)):
            lhs = ring.gen(ring.names[i]) ** n
            rhs = ring.zero
            for a, p in zip(row, self.partials):
                rhs = rhs + a * p
            if lhs != rhs:
                return False
        return True


def residue_problem(w: Poly) -> ResidueProblem:
    ring = w.ring
    data = milnor_data(w, with_cofactors=True)
    if not data.is_isolated:
        raise ModelError(
            f"{w} has no isolated critical point; residues are undefined",
            module="residue",
            invariant="isolated singularity",
        )
    if ring.nvars == 0:
        return ResidueProblem(w, (), (), (), data)
    gb = data.basis
    if gb is None or gb.is_unit_ideal():
        raise ModelError(
            f"{w} has no critical point at the origin",
            module="residue",
            invariant="isolated singularity",
        )
    exponents = []
    cofactors = []
    bound = int(data.milnor_number) + 1
    for name in ring.names:
        x = ring.gen(name)
        power = x
        for n in range(1, bound + 1):
            remainder, cof = normal_form(power, gb, with_cofactors=True)
            if remainder.is_zero():
                exponents.append(n)
                cofactors.append(tuple(typ.cast(typ.Tuple[Poly, ...], cof)))
                break
            power = power * x
        else:
            raise ModelError(
                f"no power of {name} lies in the Jacobian ideal of {w}",
                module="residue",
                invariant="critical locus is the origin",
            )
    logger.debug("lift exponents for %s: %s", w, exponents)
    return ResidueProblem(w, gb.originals, tuple(exponents), tuple(cofactors), data)


def poly_determinant(m: typ.Sequence[typ.Sequence[Poly]], ring: PolyRing) -> Poly:
    n = len(m)
    total = ring.zero
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = ring.one
        for i in range(n):
            entry = m[i][perm[i]]
            if not entry:
                term = ring.zero
                break
            term = term * entry
        if term:
            total = total - term if inversions % 2 else total + term
    return total


def residue(h: Poly, rp: ResidueProblem) -> CycNum:
    ring = rp.ring
    if ring.nvars == 0:
        return h.constant_term()
    basis = rp.milnor.basis
    reduced = normal_form(h, basis)[0] if basis is not None else h
    if reduced.is_zero():
        return ring.field.zero
    product = reduced * poly_determinant(rp.cofactors, ring)
    target: Monomial = tuple(n - 1 for n in rp.lift_exponents)
    return product.terms.get(target, ring.field.zero)


def hessian(w: Poly) -> Poly:
    ring = w.ring
    partials = [w.derive(name) for name in ring.names]
    matrix = [[p.derive(name) for name in ring.names] for p in partials]
    return poly_determinant(matrix, ring)


def gram_matrix(rp: ResidueProblem) -> typ.List[typ.List[CycNum]]:
    ring = rp.ring
    monomials = [ring.monomial(m) for m in rp.milnor.standard_monomials]
    return [[residue(a * b, rp) for b in monomials] for a in monomials]


#
# Sector pairing
#


def sector_residue_problem(model: LGModel, element_index: int) -> ResidueProblem:
    """Residue data of w restricted to a sector, kept on the model."""
    cached = model.sector_residues.get(element_index)
    if cached is None:
        s = model.sectors[element_index]
        cached = residue_problem(model.sector_potential(s))
        model.sector_residues[element_index] = cached
    return cached


def pair_tops(top1: Poly, top2: Poly, s: Sector, order: int, model: LGModel) -> CycNum:
    """
    (1/|G|) (-1)^(n(n+1)/2) Res[top1 top2 dx / d w_g] / denominator_g, with the residue taken
    for the +w model; with no fixed variables the tops are scalars and simply multiply.
    """
    f = model.field
    n = s.n_g
    if n == 0:
        value = f.coerce(top1.constant_term()) * f.coerce(top2.constant_term())
    else:
        rp = sector_residue_problem(model, s.element.index)
        value = residue(top1 * top2, rp)
        if (n * (n + 1) // 2) % 2:
            value = -value
    return value * Fraction(1, order) / s.denominator


def sector_pairing(
    c1: SectorClass, c2: SectorClass, s: Sector, order: int, model: LGModel
) -> CycNum:
    """Pairing of a class of (X, -w) with a class of (X, w) on the sector s."""
    return pair_tops(c1.top_poly, c2.top_poly, s, order, model)


#
# Reports
#


def _format_monomial(m: Monomial, ring: PolyRing) -> str:
    return str(ring.monomial(m))


def residue_check(w: Poly, element: typ.List[str], fixed_vars: typ.List[str]) -> ResidueCheck:
    rp = residue_problem(w)
    mu = int(rp.milnor.milnor_number)
    res_hess = residue(hessian(w), rp)
    gram = gram_matrix(rp)
    gram_rank = linalg.rank(gram) if gram else 0
    return ResidueCheck(
        element=element,
        fixed_vars=fixed_vars,
        potential=str(w),
        milnor_number=mu,
        standard_monomials=[_format_monomial(m, w.ring) for m in rp.milnor.standard_monomials],
        lift_exponents=list(rp.lift_exponents),
        residue_of_hessian=str(res_hess),
        hessian_matches_milnor=res_hess == mu,
        gram_rank=gram_rank,
        gram_nonsingular=gram_rank == mu,
    )


def milnor_report(model: LGModel) -> MilnorReport:
    checks = []
    for s in model.sectors:
        if s.n_g == 0:
            continue
        checks.append(
            residue_check(
                model.sector_potential(s), format_phases(s.element.phases), list(s.fixed_vars)
            )
        )
    consistent = all(c.hessian_matches_milnor and c.gram_nonsingular for c in checks)
    if not consistent:
        logger.warning("residue self-check failed for %s", model.w)
    return MilnorReport(model=summarize_model(model), checks=checks, consistent=consistent)
