import click

from lgorbifold.commands.ext.commands import p_option, q_option
from lgorbifold.commands.output import emit
from lgorbifold.commands.problems.commands import problem_file_argument
import lgorbifold.commands.hrr.handler as hrr_handler
import lgorbifold.commands.problems.handler as problems_handler


@click.command("hrr")
@problem_file_argument
@p_option
@q_option
@click.pass_context
def hrr(ctx: click.Context, problem_file: str, p_name: str, q_name: str):
    """Compare chi(P, Q) with the sum of sector pairings of Chern characters."""
    problem = problems_handler.load_problem(problem_file)
    report = hrr_handler.verify_hrr(
        problem.get_mf(p_name), problem.get_mf(q_name), problem.degree_window_slack
    )
    emit(ctx, report, mismatch=report.verdict == "mismatch" or not report.integral)


@click.command("cardy")
@problem_file_argument
@p_option
@q_option
@click.pass_context
def cardy(ctx: click.Context, problem_file: str, p_name: str, q_name: str):
    """Check the Cardy condition on every pair of Ext basis classes."""
    problem = problems_handler.load_problem(problem_file)
    report = hrr_handler.verify_cardy(
        problem.get_mf(p_name), problem.get_mf(q_name), problem.degree_window_slack
    )
    emit(ctx, report, mismatch=report.verdict == "mismatch")


@click.command("diagonal")
@problem_file_argument
@click.pass_context
def diagonal(ctx: click.Context, problem_file: str):
    """Check the decomposition of the orbifold diagonal against the residue pairing."""
    problem = problems_handler.load_problem(problem_file)
    report = hrr_handler.verify_diagonal_decomposition(problem.model)
    emit(ctx, report, mismatch=report.verdict == "mismatch")
