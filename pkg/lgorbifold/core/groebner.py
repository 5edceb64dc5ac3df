"""
Groebner bases (Buchberger), normal forms with cofactors, and Milnor data of Jacobian ideals.
"""

import itertools
import logging
import typing as typ
from dataclasses import dataclass

from sympy.polys.monomials import monomial_div, monomial_lcm, monomial_mul

from lgorbifold.core.poly import Monomial, Poly, PolyRing
from lgorbifold.core.scalars import CycNum

logger = logging.getLogger(__name__)

INFINITE = float("inf")

Cofactors = typ.Tuple[Poly, ...]


@dataclass(frozen=True)
class GroebnerBasis:
    ring: PolyRing
    generators: typ.Tuple[Poly, ...]
    originals: typ.Tuple[Poly, ...]
    # cofactor_log[i][j]: generators[i] = sum_j cofactor_log[i][j] * originals[j]
    cofactor_log: typ.Optional[typ.Tuple[Cofactors, ...]] = None

    @property
    def leading_monomials(self) -> typ.Tuple[Monomial, ...]:
        return tuple(g.leading_monomial for g in self.generators)

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() for g in self.generators)

    def contains(self, p: Poly) -> bool:
        return normal_form(p, self)[0].is_zero()


#
# Cofactor vectors
#


def _unit_vector(ring: PolyRing, size: int, j: int) -> typ.List[Poly]:
    return [ring.one if i == j else ring.zero for i in range(size)]


def _axpy(
    target: typ.List[Poly], coeff: CycNum, mono: Monomial, source: typ.Sequence[Poly]
) -> typ.List[Poly]:
    """target - coeff * x^mono * source, entrywise."""
    return [t - s.mul_term(mono, coeff) if s else t for t, s in zip(target, source)]


#
# Reduction
#


def _find_reducer(
    mono: Monomial, basis: typ.Sequence[Poly]
) -> typ.Optional[typ.Tuple[int, Monomial]]:
    for i, g in enumerate(basis):
        quotient = monomial_div(mono, g.leading_monomial)
        if quotient is not None:
            return i, quotient
    return None


def _reduce(
    p: Poly,
    basis: typ.Sequence[Poly],
    cof: typ.Optional[typ.List[Poly]] = None,
    basis_cofs: typ.Optional[typ.Sequence[typ.Sequence[Poly]]] = None,
) -> typ.Tuple[Poly, typ.Optional[typ.List[Poly]]]:
    """Full reduction of p; `cof` tracks p's expression and is updated alongside."""
    ring = p.ring
    remainder: typ.Dict[Monomial, CycNum] = {}
    work = p
    while work:
        mono = work.leading_monomial
        coeff = work.terms[mono]
        found = _find_reducer(mono, basis)
        if found is None:
            remainder[mono] = coeff
            work = work - ring.monomial(mono, coeff)
            continue
        i, quotient = found
        g = basis[i]
        factor = coeff / g.leading_coefficient
        work = work - g.mul_term(quotient, factor)
        if cof is not None and basis_cofs is not None:
            cof = _axpy(cof, factor, quotient, basis_cofs[i])
    return Poly(ring, remainder), cof


def _s_polynomial(
    f: Poly, g: Poly, cof_f: typ.Optional[typ.Sequence[Poly]], cof_g: typ.Optional[typ.Sequence[Poly]]
) -> typ.Tuple[Poly, typ.Optional[typ.List[Poly]]]:
    """Assumes f and g are monic."""
    lcm = monomial_lcm(f.leading_monomial, g.leading_monomial)
    m1 = monomial_div(lcm, f.leading_monomial)
    m2 = monomial_div(lcm, g.leading_monomial)
    one = f.ring.field.one
    s = f.mul_term(m1, one) - g.mul_term(m2, one)
    if cof_f is None or cof_g is None:
        return s, None
    cof = [a.mul_term(m1, one) - b.mul_term(m2, one) for a, b in zip(cof_f, cof_g)]
    return s, cof


#
# Buchberger
#


def buchberger(gens: typ.Sequence[Poly], with_cofactors: bool = False) -> GroebnerBasis:
    """Reduced Groebner basis of <gens> with monic generators."""
    if not gens:
        raise ValueError("buchberger needs at least one generator")
    ring = gens[0].ring
    size = len(gens)

    basis: typ.List[Poly] = []
    cofs: typ.List[typ.List[Poly]] = []
    for j, f in enumerate(gens):
        if f.is_zero():
            continue
        inv = f.leading_coefficient.inverse()
        basis.append(f * inv)
        cofs.append([c * inv for c in _unit_vector(ring, size, j)] if with_cofactors else [])

    pairs = set(itertools.combinations(range(len(basis)), 2))
    reductions_to_zero = 0

    while pairs:
        # normal selection strategy: smallest lcm of leading monomials
        i, j = min(
            pairs,
            key=lambda pr: ring.order_key(
                monomial_lcm(basis[pr[0]].leading_monomial, basis[pr[1]].leading_monomial)
            ),
        )
        pairs.remove((i, j))
        lm_i, lm_j = basis[i].leading_monomial, basis[j].leading_monomial
        # coprime leading monomials: the S-polynomial reduces to zero
        if monomial_mul(lm_i, lm_j) == monomial_lcm(lm_i, lm_j):
            continue

        s, cof = _s_polynomial(
            basis[i], basis[j], cofs[i] if with_cofactors else None, cofs[j] if with_cofactors else None
        )
        r, cof = _reduce(s, basis, cof, cofs if with_cofactors else None)
        if r.is_zero():
            reductions_to_zero += 1
            continue

        inv = r.leading_coefficient.inverse()
        basis.append(r * inv)
        cofs.append([c * inv for c in cof] if cof is not None else [])
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))

    generators, log = _interreduce(basis, cofs, with_cofactors)
    logger.debug(
        "groebner basis: %d generators, %d pairs reduced to zero", len(generators), reductions_to_zero
    )
    return GroebnerBasis(
        ring=ring,
        generators=tuple(generators),
        originals=tuple(gens),
        cofactor_log=tuple(tuple(c) for c in log) if with_cofactors else None,
    )


def _interreduce(
    basis: typ.List[Poly], cofs: typ.List[typ.List[Poly]], with_cofactors: bool
) -> typ.Tuple[typ.List[Poly], typ.List[typ.List[Poly]]]:
    ring = basis[0].ring if basis else None
    # minimal basis: drop elements whose leading monomial is divisible by another's
    keep: typ.List[int] = []
    order = sorted(range(len(basis)), key=lambda k: ring.order_key(basis[k].leading_monomial))
    for k in order:
        lm = basis[k].leading_monomial
        if any(monomial_div(lm, basis[i].leading_monomial) is not None for i in keep):
            continue
        keep.append(k)

    generators = [basis[k] for k in keep]
    log = [cofs[k] for k in keep]
    # reduced basis: tails reduced by the other generators
    for idx in range(len(generators)):
        g = generators[idx]
        others = generators[:idx] + generators[idx + 1:]
        other_cofs = log[:idx] + log[idx + 1:]
        lead = ring.monomial(g.leading_monomial, g.leading_coefficient)
        tail, cof = _reduce(
            g - lead,
            others,
            list(log[idx]) if with_cofactors else None,
            other_cofs if with_cofactors else None,
        )
        generators[idx] = lead + tail
        if with_cofactors and cof is not None:
            log[idx] = cof

    ranked = sorted(
        range(len(generators)),
        key=lambda k: ring.order_key(generators[k].leading_monomial),
        reverse=True,
    )
    return [generators[k] for k in ranked], [log[k] for k in ranked]


#
# Normal forms
#


def normal_form(
    p: Poly, gb: GroebnerBasis, with_cofactors: bool = False
) -> typ.Tuple[Poly, typ.Optional[Cofactors]]:
    """
    Remainder of p modulo the basis. With cofactors, also returns c such that
    p = sum_j c[j] * gb.originals[j] + remainder (requires a basis built with cofactors).
    """
    if not with_cofactors:
        return _reduce(p, gb.generators)[0], None
    if gb.cofactor_log is None:
        raise ValueError("basis was built without cofactor tracking")
    ring = p.ring
    start = [ring.zero] * len(gb.originals)
    remainder, cof = _reduce(p, gb.generators, start, gb.cofactor_log)
    # _reduce tracks -(quotients); p - remainder = sum quotients * originals
    return remainder, tuple(-c for c in cof or [])


#
# Milnor data
#


@dataclass(frozen=True)
class MilnorData:
    milnor_number: typ.Union[int, float]
    standard_monomials: typ.Tuple[Monomial, ...]
    basis: typ.Optional[GroebnerBasis]

    @property
    def is_isolated(self) -> bool:
        return self.milnor_number != INFINITE


def jacobian_ideal(w: Poly) -> typ.List[Poly]:
    return [w.derive(name) for name in w.ring.names]


def milnor_data(w: Poly, with_cofactors: bool = False) -> MilnorData:
    """Dimension and monomial basis of k[x]/Jac(w); INFINITE when not finite-dimensional."""
    ring = w.ring
    if ring.nvars == 0:
        return MilnorData(1, ((),), None)
    partials = jacobian_ideal(w)
    if all(p.is_zero() for p in partials):
        return MilnorData(INFINITE, (), None)

    gb = buchberger(partials, with_cofactors=with_cofactors)
    if gb.is_unit_ideal():
        return MilnorData(0, (), gb)

    leads = gb.leading_monomials
    bounds = []
    for i in range(ring.nvars):
        pure = [m[i] for m in leads if m[i] and not any(e for k, e in enumerate(m) if k != i)]
        if not pure:
            return MilnorData(INFINITE, (), gb)
        bounds.append(min(pure))

    standard = [
        exp
        for exp in itertools.product(*(range(b) for b in bounds))
        if not any(monomial_div(exp, lm) is not None for lm in leads)
    ]
    standard.sort(key=ring.order_key)
    return MilnorData(len(standard), tuple(standard), gb)
