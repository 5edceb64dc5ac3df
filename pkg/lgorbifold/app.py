import logging
import sys
import typing as typ

import click
from pydantic import ValidationError

from lgorbifold.core import config
from lgorbifold.core.errors import OrbifoldError
from lgorbifold.commands.chern.commands import chern
from lgorbifold.commands.ext.commands import chi, ext
from lgorbifold.commands.hrr.commands import cardy, diagonal, hrr
from lgorbifold.commands.output import EXIT_INPUT_ERROR, emit_error
from lgorbifold.commands.problems.commands import validate
from lgorbifold.commands.residue.commands import milnor

ErrorHandler = typ.Callable[[click.Context, Exception], None]


class OrbifoldCLI(click.Group):
    """Command group that turns registered exception types into diagnostics and exit codes."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.error_handlers: typ.Dict[typ.Type[Exception], ErrorHandler] = {}

    def errorhandler(self, exc_type: typ.Type[Exception]):
        def register(fn: ErrorHandler) -> ErrorHandler:
            self.error_handlers[exc_type] = fn
            return fn

        return register

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except Exception as exc:
            for klass in type(exc).__mro__:
                handler = self.error_handlers.get(klass)
                if handler is not None:
                    handler(ctx, exc)
                    ctx.exit(EXIT_INPUT_ERROR)
            raise


def create_app() -> OrbifoldCLI:
    @click.group(cls=OrbifoldCLI)
    @click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "text"]),
        default="json",
        show_default=True,
        help=(
            "Report format on stdout. Input errors replace the report on stdout as a JSON "
            "object with json, and are written as one line to stderr with text."
        ),
    )
    @click.option(
        "--log-level",
        default=config.LOG_LEVEL,
        show_default=True,
        type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
        help="Diagnostics on stderr.",
    )
    @click.pass_context
    def app(ctx: click.Context, fmt: str, log_level: str):
        """Exact invariants of Landau-Ginzburg orbifolds and their matrix factorizations."""
        logging.basicConfig(
            level=log_level.upper(),
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
            force=True,
        )
        ctx.ensure_object(dict)
        ctx.obj["format"] = fmt

    _register_commands(app)
    _register_error_handlers(app)
    return app


def _register_commands(app: OrbifoldCLI):
    for command in (validate, milnor, chern, chi, ext, hrr, cardy, diagonal):
        app.add_command(command)


def _register_error_handlers(app: OrbifoldCLI):
    @app.errorhandler(OrbifoldError)
    def handle_orbifold_error(ctx: click.Context, error: OrbifoldError):
        emit_error(ctx, error.to_dict())

    @app.errorhandler(ValidationError)
    def handle_validation_error(ctx: click.Context, error: ValidationError):
        emit_error(
            ctx,
            {
                "error": "ValidationError",
                "module": "problems",
                "invariant": "problem file schema",
                "message": f"{error.error_count()} validation error(s)",
                "messages": error.errors(include_context=False, include_url=False),
            },
        )

    @app.errorhandler(OSError)
    def handle_os_error(ctx: click.Context, error: OSError):
        emit_error(
            ctx,
            {"error": type(error).__name__, "module": "cli", "invariant": "", "message": str(error)},
        )


cli = create_app()
