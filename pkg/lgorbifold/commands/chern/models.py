import typing as typ

from lgorbifold.core.models import BaseCamelModel
from lgorbifold.commands.problems.models import ModelSummary


class SectorChern(BaseCamelModel):
    element: typ.List[str]
    fixed_vars: typ.List[str]
    n_g: int
    denominator: str
    raw_form: str
    top: str


class ChernReport(BaseCamelModel):
    model: ModelSummary
    mf: str
    sectors: typ.List[SectorChern]
