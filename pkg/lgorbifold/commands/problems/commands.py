import click

from lgorbifold.commands.output import emit
import lgorbifold.commands.problems.handler as problems_handler

problem_file_argument = click.argument(
    "problem_file", type=click.Path(dir_okay=False, path_type=str)
)


@click.command("validate")
@problem_file_argument
@click.pass_context
def validate(ctx: click.Context, problem_file: str):
    """Check that the problem file describes a valid model and factorizations."""
    problem = problems_handler.load_problem(problem_file)
    report = problems_handler.validate_problem(problem)
    emit(ctx, report, mismatch=not report.valid)
