import click

from lgorbifold.commands.output import emit
from lgorbifold.commands.problems.commands import problem_file_argument
import lgorbifold.commands.ext.handler as ext_handler
import lgorbifold.commands.problems.handler as problems_handler

p_option = click.option("--p", "p_name", required=True, help="Source factorization.")
q_option = click.option("--q", "q_name", required=True, help="Target factorization.")


@click.command("chi")
@problem_file_argument
@p_option
@q_option
@click.pass_context
def chi(ctx: click.Context, problem_file: str, p_name: str, q_name: str):
    """Euler characteristic of Ext(P, Q) on the invariant Hom complex."""
    problem = problems_handler.load_problem(problem_file)
    report = ext_handler.chi_report(
        problem.get_mf(p_name), problem.get_mf(q_name), problem.degree_window_slack
    )
    emit(ctx, report)


@click.command("ext")
@problem_file_argument
@p_option
@q_option
@click.pass_context
def ext(ctx: click.Context, problem_file: str, p_name: str, q_name: str):
    """Ext(P, Q) degree by degree, with explicit representatives."""
    problem = problems_handler.load_problem(problem_file)
    report = ext_handler.ext_report(
        problem.get_mf(p_name), problem.get_mf(q_name), problem.degree_window_slack
    )
    emit(ctx, report)
