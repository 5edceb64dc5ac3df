import typing as typ

from lgorbifold.core.models import BaseCamelModel
from lgorbifold.commands.problems.models import ModelSummary


class ResidueCheck(BaseCamelModel):
    element: typ.List[str]
    fixed_vars: typ.List[str]
    potential: str
    milnor_number: int
    standard_monomials: typ.List[str]
    lift_exponents: typ.List[int]
    residue_of_hessian: str
    hessian_matches_milnor: bool
    gram_rank: int
    gram_nonsingular: bool


class MilnorReport(BaseCamelModel):
    model: ModelSummary
    checks: typ.List[ResidueCheck]
    consistent: bool
