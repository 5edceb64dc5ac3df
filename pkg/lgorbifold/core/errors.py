import typing as typ


class OrbifoldError(Exception):
    """Base error; `module` and `invariant` end up in CLI diagnostics."""

    module: str = "core"
    invariant: str = ""

    def __init__(
        self,
        message: str,
        *,
        module: typ.Optional[str] = None,
        invariant: typ.Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        if module is not None:
            self.module = module
        if invariant is not None:
            self.invariant = invariant

    def to_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "module": self.module,
            "invariant": self.invariant,
            "message": self.message,
        }


class ConductorMismatchError(OrbifoldError):
    module = "scalars"
    invariant = "single conductor per problem"


class CycZeroDivisionError(OrbifoldError, ZeroDivisionError):
    module = "scalars"
    invariant = "nonzero divisor"


class ParseError(OrbifoldError):
    module = "poly"
    invariant = "polynomial grammar"

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text

    def to_dict(self) -> dict:
        return {**super().to_dict(), "position": self.position, "text": self.text}


class UnknownNameError(OrbifoldError):
    invariant = "declared name"


class ModelError(OrbifoldError):
    module = "group"
    invariant = "proper LG model"


class ResourceError(OrbifoldError):
    module = "group"
    invariant = "group order cap"


class ConstructionError(OrbifoldError):
    module = "mf"
    invariant = "delta squared equals w"


class EquivarianceError(OrbifoldError):
    module = "mf"
    invariant = "equivariant structure"


class CharacterError(OrbifoldError):
    module = "mf"
    invariant = "well-defined character"


class GradingRequiredError(OrbifoldError):
    module = "ext"
    invariant = "graded model"


class ContractViolationError(OrbifoldError):
    module = "chern"
    invariant = "closed endomorphism"


class DimensionMismatchError(OrbifoldError):
    module = "forms"
    invariant = "matching dimensions"
