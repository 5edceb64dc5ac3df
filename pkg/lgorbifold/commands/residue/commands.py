import click

from lgorbifold.commands.output import emit
from lgorbifold.commands.problems.commands import problem_file_argument
import lgorbifold.commands.problems.handler as problems_handler
import lgorbifold.commands.residue.handler as residue_handler


@click.command("milnor")
@problem_file_argument
@click.pass_context
def milnor(ctx: click.Context, problem_file: str):
    """Milnor numbers and residue self-checks for w and every twisted sector."""
    problem = problems_handler.load_problem(problem_file)
    report = residue_handler.milnor_report(problem.model)
    emit(ctx, report, mismatch=not report.consistent)
