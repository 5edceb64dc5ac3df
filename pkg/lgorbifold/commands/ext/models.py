import typing as typ

from lgorbifold.core.models import BaseCamelModel
from lgorbifold.commands.problems.models import ModelSummary


class ChiReport(BaseCamelModel):
    p: str
    q: str
    ext_even: int
    ext_odd: int
    chi: int


class ExtPiece(BaseCamelModel):
    degree: str
    parity: int
    dimension: int
    # one full (2r_Q x 2r_P) matrix per class
    representatives: typ.List[typ.List[typ.List[str]]]


class ExtReport(BaseCamelModel):
    model: ModelSummary
    p: str
    q: str
    window: typ.List[str]
    pieces: typ.List[ExtPiece]
    chi: int
