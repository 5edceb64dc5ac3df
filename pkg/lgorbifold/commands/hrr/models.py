import typing as typ

from lgorbifold.core.models import BaseCamelModel
from lgorbifold.commands.problems.models import ModelSummary

Verdict = typ.Literal["equal", "mismatch", "ext-skipped", "not-applicable"]


class HRRSector(BaseCamelModel):
    element: typ.List[str]
    n_g: int
    denominator: str
    ch_q_top: str
    ch_p_dual_top: str
    contribution: str


class HRRReport(BaseCamelModel):
    model: ModelSummary
    p: str
    q: str
    sectors: typ.List[HRRSector]
    chi_hrr: str
    chi_ext: typ.Optional[int] = None
    integral: bool
    verdict: Verdict


class CardyPair(BaseCamelModel):
    a: str
    b: str
    trace: str
    pairing: str
    equal: bool


class CardyReport(BaseCamelModel):
    model: ModelSummary
    p: str
    q: str
    pairs: typ.List[CardyPair]
    verdict: Verdict


class DiagonalPair(BaseCamelModel):
    gamma: str
    gamma_prime: str
    lhs: str
    rhs: str


class DiagonalReport(BaseCamelModel):
    model: ModelSummary
    classes: typ.List[str] = []
    pairing: typ.List[typ.List[str]] = []
    kernel: typ.List[typ.List[str]] = []
    pairs: typ.List[DiagonalPair] = []
    reason: typ.Optional[str] = None
    verdict: Verdict
