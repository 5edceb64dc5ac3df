"""
Finite abelian groups acting diagonally on coordinates, and their inertia sectors.

A generator is a phase vector a; it scales the i-th coordinate point by e^(2 pi i a_i) and
acts on functions by pullback, so g.x_i = e^(-2 pi i a_i) x_i.
"""

import logging
import typing as typ
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from lgorbifold.core import config
from lgorbifold.core.errors import CharacterError, ConductorMismatchError, ModelError, ResourceError
from lgorbifold.core.poly import Poly, PolyRing
from lgorbifold.core.scalars import CycNum

logger = logging.getLogger(__name__)

Phases = typ.Tuple[Fraction, ...]
T = typ.TypeVar("T")


def normalize_phases(phases: typ.Iterable[typ.Union[str, int, Fraction]]) -> Phases:
    return tuple(Fraction(p) % 1 for p in phases)


def format_phases(phases: Phases) -> typ.List[str]:
    return [str(p) for p in phases]


@dataclass(frozen=True)
class GroupElement:
    index: int
    phases: Phases
    # exponents of the generators along the enumeration tree
    word: typ.Tuple[int, ...]

    @property
    def is_identity(self) -> bool:
        return not any(self.phases)

    def label(self) -> str:
        return "(" + ", ".join(format_phases(self.phases)) + ")"


class DiagGroup:
    def __init__(
        self,
        ring: PolyRing,
        generators: typ.Sequence[Phases],
        cap: typ.Optional[int] = None,
    ):
        self.ring = ring
        self.field = ring.field
        self.generators = tuple(normalize_phases(g) for g in generators)
        for k, gen in enumerate(self.generators):
            if len(gen) != ring.nvars:
                raise ModelError(
                    f"generator {k} has {len(gen)} phases for {ring.nvars} variables",
                    invariant="one phase per variable",
                )
            for p in gen:
                if self.field.conductor % p.denominator:
                    raise ConductorMismatchError(
                        f"phase {p} of generator {k} needs a {p.denominator}-th root of unity, "
                        f"conductor is {self.field.conductor}"
                    )
        self.cap = config.GROUP_ORDER_CAP if cap is None else cap
        self.elements, self.successors = self._enumerate()
        self._by_phases = {e.phases: e for e in self.elements}
        logger.debug("enumerated group of order %d", self.order)

    def _enumerate(self) -> typ.Tuple[typ.Tuple[GroupElement, ...], typ.List[typ.List[int]]]:
        identity = GroupElement(0, (Fraction(0),) * self.ring.nvars, (0,) * len(self.generators))
        elements = [identity]
        seen = {identity.phases: 0}
        successors: typ.List[typ.List[int]] = []
        queue = deque([0])
        while queue:
            idx = queue.popleft()
            current = elements[idx]
            row = []
            for k, gen in enumerate(self.generators):
                phases = tuple((a + b) % 1 for a, b in zip(current.phases, gen))
                if phases not in seen:
                    if len(elements) >= self.cap:
                        raise ResourceError(
                            f"group order exceeds the cap of {self.cap} elements"
                        )
                    word = list(current.word)
                    word[k] += 1
                    seen[phases] = len(elements)
                    elements.append(GroupElement(len(elements), phases, tuple(word)))
                    queue.append(seen[phases])
                row.append(seen[phases])
            successors.append(row)
        return tuple(elements), successors

    #
    # Structure
    #

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> GroupElement:
        return self.elements[0]

    def element(self, phases: typ.Iterable[typ.Union[str, Fraction]]) -> GroupElement:
        key = normalize_phases(phases)
        try:
            return self._by_phases[key]
        except KeyError:
            raise ModelError(f"{format_phases(key)} is not an element of the group")

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self._by_phases[tuple((x + y) % 1 for x, y in zip(a.phases, b.phases))]

    def inverse(self, a: GroupElement) -> GroupElement:
        return self._by_phases[tuple((-x) % 1 for x in a.phases)]

    def generator_order(self, k: int) -> int:
        return lcm(1, *(p.denominator for p in self.generators[k]))

    def extend_along_generators(
        self,
        values: typ.Sequence[T],
        identity: T,
        mul: typ.Callable[[T, T], T],
        equal: typ.Callable[[T, T], bool],
    ) -> typ.Optional[typ.List[T]]:
        """
        Images of all elements under the map fixed by the generator images, walking the
        Cayley graph. None when some relation of the group is not respected.
        """
        images: typ.List[typ.Optional[T]] = [None] * self.order
        images[0] = identity
        for idx in range(self.order):
            # enumeration order is BFS, so every parent precedes its children
            current = images[idx]
            if current is None:
                return None
            for k, target in enumerate(self.successors[idx]):
                image = mul(current, values[k])
                existing = images[target]
                if existing is None:
                    images[target] = image
                elif not equal(existing, image):
                    return None
        return typ.cast(typ.List[T], images)

    #
    # Action
    #

    def eigenvalues(self, g: GroupElement) -> typ.Tuple[CycNum, ...]:
        return tuple(self.field.exp_phase(p) for p in g.phases)

    def action_factors(self, g: GroupElement) -> typ.Tuple[CycNum, ...]:
        """Substitution x_i -> factor_i * x_i realising the pullback action of g."""
        return tuple(self.field.exp_phase(-p) for p in g.phases)

    def act(self, g: GroupElement, p: Poly) -> Poly:
        return p.scale_variables(self.action_factors(g))

    def act_by_generator(self, k: int, p: Poly) -> Poly:
        return p.scale_variables(tuple(self.field.exp_phase(-a) for a in self.generators[k]))

    def monomial_character(self, exp: typ.Sequence[int]) -> Phases:
        """Phase of g_k . x^exp for every generator g_k."""
        return tuple(
            (-sum((a * e for a, e in zip(gen, exp)), Fraction(0))) % 1 for gen in self.generators
        )

    def semi_invariant_character(self, p: Poly) -> typ.Optional[Phases]:
        """Generator phases c_k with g_k . p = e^(2 pi i c_k) p, or None if p is not semi-invariant."""
        if p.is_zero():
            return (Fraction(0),) * len(self.generators)
        characters = {self.monomial_character(m) for m in p.terms}
        if len(characters) != 1:
            return None
        return characters.pop()

    #
    # Characters
    #

    def character_values(self, phases: typ.Sequence[typ.Union[str, Fraction]]) -> typ.List[CycNum]:
        """Values on all elements of the character sending g_k to e^(2 pi i c_k)."""
        chars = normalize_phases(phases)
        if len(chars) != len(self.generators):
            raise CharacterError(
                f"character has {len(chars)} values for {len(self.generators)} generators"
            )
        try:
            values = [self.field.exp_phase(c) for c in chars]
        except ConductorMismatchError:
            raise CharacterError(
                f"character {format_phases(chars)} is not a character of the group"
            )
        images = self.extend_along_generators(
            values, self.field.one, lambda a, b: a * b, lambda a, b: a == b
        )
        if images is None:
            raise CharacterError(
                f"character {format_phases(chars)} does not respect the group relations"
            )
        return images


def build_group(
    generators: typ.Sequence[typ.Sequence[typ.Union[str, Fraction]]],
    ring: PolyRing,
    w: Poly,
    cap: typ.Optional[int] = None,
) -> DiagGroup:
    group = DiagGroup(ring, [normalize_phases(g) for g in generators], cap=cap)
    for k in range(len(group.generators)):
        if group.act_by_generator(k, w) != w:
            raise ModelError(
                f"potential is not invariant under generator {k} "
                f"{format_phases(group.generators[k])}",
                invariant="invariant potential",
            )
    return group


#
# Sectors
#


@dataclass(frozen=True)
class Sector:
    element: GroupElement
    fixed_vars: typ.Tuple[str, ...]
    moving_vars: typ.Tuple[str, ...]
    moving_eigenvalues: typ.Tuple[CycNum, ...]
    denominator: CycNum
    fixed_ring: PolyRing

    @property
    def n_g(self) -> int:
        return len(self.fixed_vars)

    @property
    def is_identity(self) -> bool:
        return self.element.is_identity

    def restrict(self, p: Poly) -> Poly:
        """p on the fixed locus, as a polynomial in the fixed variables."""
        return p.restrict(self.moving_vars).coerce(self.fixed_ring)


def sector_of(group: DiagGroup, g: GroupElement) -> Sector:
    ring = group.ring
    fixed = tuple(name for name, p in zip(ring.names, g.phases) if p == 0)
    moving = tuple(name for name, p in zip(ring.names, g.phases) if p != 0)
    eigen = tuple(group.field.exp_phase(p) for p in g.phases if p != 0)
    denominator = group.field.one
    for lam in eigen:
        denominator = denominator * (1 - lam.inverse())
    return Sector(
        element=g,
        fixed_vars=fixed,
        moving_vars=moving,
        moving_eigenvalues=eigen,
        denominator=denominator,
        fixed_ring=ring.subring(fixed),
    )


def sectors(group: DiagGroup) -> typ.List[Sector]:
    return [sector_of(group, g) for g in group.elements]
