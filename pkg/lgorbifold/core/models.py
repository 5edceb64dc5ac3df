import humps
from pydantic import BaseModel, ConfigDict


#
# Base Models
#


class BaseCamelModel(BaseModel):
    model_config = ConfigDict(
        alias_generator=humps.camelize,
        populate_by_name=True,
        extra="ignore",
    )

    def model_dump(self, *args, **kwargs) -> dict:
        if "by_alias" not in kwargs:
            kwargs["by_alias"] = True
        return super().model_dump(*args, **kwargs)

    def model_dump_json(self, *args, **kwargs) -> str:
        if "by_alias" not in kwargs:
            kwargs["by_alias"] = True
        return super().model_dump_json(*args, **kwargs)


class StrictCamelModel(BaseCamelModel):
    """Input models: unknown keys are an error rather than silently dropped."""

    model_config = ConfigDict(
        alias_generator=humps.camelize,
        populate_by_name=True,
        extra="forbid",
    )
