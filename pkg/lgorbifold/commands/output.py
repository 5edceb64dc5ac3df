import json
import typing as typ

import click

from lgorbifold.core.models import BaseCamelModel

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_MISMATCH = 2


def output_format(ctx: click.Context) -> str:
    obj = ctx.find_root().obj or {}
    return obj.get("format", "json")


def _text_lines(value: typ.Any, indent: int = 0) -> typ.List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar_text(item)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, dict):
                nested = _text_lines(item, indent + 1)
                lines.append(f"{pad}- {nested[0].strip()}" if nested else f"{pad}-")
                lines.extend(nested[1:])
            else:
                lines.append(f"{pad}- {_scalar_text(item)}")
        return lines
    return [f"{pad}{_scalar_text(value)}"]


def _scalar_text(value: typ.Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, dict)):
        return "[]" if isinstance(value, list) else "{}"
    return str(value)


def render_text(report: BaseCamelModel) -> str:
    return "\n".join(_text_lines(report.model_dump()))


def emit(ctx: click.Context, report: BaseCamelModel, mismatch: bool = False):
    """Write the report to stdout; a mathematical mismatch ends the command with exit code 2."""
    if output_format(ctx) == "text":
        click.echo(render_text(report))
    else:
        click.echo(report.model_dump_json(indent=2))
    if mismatch:
        ctx.exit(EXIT_MISMATCH)


def emit_error(ctx: typ.Optional[click.Context], payload: dict):
    fmt = output_format(ctx) if ctx is not None else "json"
    if fmt == "text":
        where = "/".join(x for x in (payload.get("module"), payload.get("invariant")) if x)
        click.echo(f"error [{payload['error']}] {where}: {payload['message']}", err=True)
    else:
        click.echo(json.dumps(payload, indent=2, default=str))
