import re
import typing as typ
from fractions import Fraction

from pydantic import Field, field_validator, model_validator

from lgorbifold.core.models import BaseCamelModel, StrictCamelModel

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _check_rational(value: str) -> str:
    try:
        Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"'{value}' is not a rational number")
    return value


#
# Problem files
#


class VariableSpec(StrictCamelModel):
    name: str
    weight: str = "1"

    @field_validator("name")
    @classmethod
    def name_is_identifier(cls, value: str) -> str:
        if not _NAME.match(value):
            raise ValueError(f"'{value}' is not an identifier")
        return value

    @field_validator("weight")
    @classmethod
    def weight_is_positive(cls, value: str) -> str:
        _check_rational(value)
        if Fraction(value) <= 0:
            raise ValueError(f"weight must be positive, got {value}")
        return value


class MatrixSpec(StrictCamelModel):
    a: typ.List[typ.List[str]] = Field(alias="A")
    b: typ.List[typ.List[str]] = Field(alias="B")


class RhoSpec(StrictCamelModel):
    even: typ.List[typ.List[str]]
    odd: typ.List[typ.List[str]]


class MFSpec(StrictCamelModel):
    name: str
    koszul: typ.Optional[typ.List[typ.Tuple[str, str]]] = None
    matrices: typ.Optional[MatrixSpec] = None
    tensor: typ.Optional[typ.Tuple[str, str]] = None
    dual: typ.Optional[str] = None
    direct_sum: typ.Optional[typ.Tuple[str, str]] = None
    rho: typ.Optional[typ.List[RhoSpec]] = None
    weights_even: typ.Optional[typ.List[str]] = None
    weights_odd: typ.Optional[typ.List[str]] = None
    twist: typ.Optional[typ.List[str]] = None

    @field_validator("name")
    @classmethod
    def name_is_identifier(cls, value: str) -> str:
        if not _NAME.match(value):
            raise ValueError(f"'{value}' is not an identifier")
        return value

    @field_validator("weights_even", "weights_odd", "twist")
    @classmethod
    def rationals(cls, value: typ.Optional[typ.List[str]]) -> typ.Optional[typ.List[str]]:
        for item in value or []:
            _check_rational(item)
        return value

    @model_validator(mode="after")
    def exactly_one_constructor(self) -> "MFSpec":
        given = [
            key
            for key in ("koszul", "matrices", "tensor", "dual", "direct_sum")
            if getattr(self, key) is not None
        ]
        if len(given) != 1:
            raise ValueError(
                f"factorization '{self.name}' needs exactly one of koszul, matrices, tensor, "
                f"dual, directSum (got {given or 'none'})"
            )
        if self.matrices is not None and (self.weights_even is None) != (self.weights_odd is None):
            raise ValueError(f"factorization '{self.name}': give both weightsEven and weightsOdd")
        return self

    @property
    def kind(self) -> str:
        for key in ("koszul", "matrices", "tensor", "dual", "direct_sum"):
            if getattr(self, key) is not None:
                return key
        return ""


class ProblemOptions(StrictCamelModel):
    graded: bool = True
    group_order_cap: typ.Optional[int] = Field(default=None, gt=0)
    degree_window_slack: typ.Optional[str] = None

    @field_validator("degree_window_slack")
    @classmethod
    def slack_is_rational(cls, value: typ.Optional[str]) -> typ.Optional[str]:
        return value if value is None else _check_rational(value)


class ProblemFile(StrictCamelModel):
    variables: typ.List[VariableSpec]
    potential: str
    group: typ.List[typ.List[str]] = []
    mfs: typ.List[MFSpec] = []
    options: ProblemOptions = ProblemOptions()

    @field_validator("group")
    @classmethod
    def phases_are_rational(cls, value: typ.List[typ.List[str]]) -> typ.List[typ.List[str]]:
        for generator in value:
            for phase in generator:
                _check_rational(phase)
        return value

    @model_validator(mode="after")
    def consistent_names(self) -> "ProblemFile":
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        for k, generator in enumerate(self.group):
            if len(generator) != len(names):
                raise ValueError(
                    f"group generator {k} has {len(generator)} phases for {len(names)} variables"
                )
        mf_names = [m.name for m in self.mfs]
        if len(set(mf_names)) != len(mf_names):
            raise ValueError(f"duplicate factorization names: {mf_names}")
        return self


#
# Shared report pieces
#


class SectorSummary(BaseCamelModel):
    element: typ.List[str]
    fixed_vars: typ.List[str]
    n_g: int
    eigenvalues: typ.List[str]
    denominator: str
    milnor_number: typ.Optional[int] = None


class ModelSummary(BaseCamelModel):
    variables: typ.List[str]
    weights: typ.List[str]
    potential: str
    degree: typ.Optional[str] = None
    graded: bool
    conductor: int
    group_order: int
    milnor_number: typ.Optional[int] = None
    sectors: typ.List[SectorSummary]


# validate
class GeneratorCheck(BaseCamelModel):
    generator: typ.List[str]
    order: int
    equivariant: bool


class MFSummary(BaseCamelModel):
    name: str
    kind: str
    rank: int
    potential: str
    weights_even: typ.List[str]
    weights_odd: typ.List[str]
    equivariance: typ.List[GeneratorCheck]
    homotopy_identity: bool


class ValidateReport(BaseCamelModel):
    model: ModelSummary
    mfs: typ.List[MFSummary]
    valid: bool
