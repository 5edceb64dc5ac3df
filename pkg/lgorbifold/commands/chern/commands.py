import click

from lgorbifold.commands.output import emit
from lgorbifold.commands.problems.commands import problem_file_argument
import lgorbifold.commands.chern.handler as chern_handler
import lgorbifold.commands.problems.handler as problems_handler


@click.command("chern")
@problem_file_argument
@click.option("--mf", "mf_name", required=True, help="Name of the factorization.")
@click.pass_context
def chern(ctx: click.Context, problem_file: str, mf_name: str):
    """Sector-wise Chern characters of one factorization."""
    problem = problems_handler.load_problem(problem_file)
    emit(ctx, chern_handler.chern_report(problem.get_mf(mf_name)))
