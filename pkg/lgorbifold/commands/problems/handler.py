import logging
import typing as typ
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from lgorbifold.core import config
from lgorbifold.core.errors import (
    ConstructionError,
    EquivarianceError,
    UnknownNameError,
)
from lgorbifold.core.group import format_phases
from lgorbifold.core.mf import (
    EquivMF,
    LGModel,
    RhoPair,
    build_model,
    direct_sum,
    dual,
    homotopy_defect,
    koszul,
    make_mf,
    make_ring,
    tensor,
    twist,
)
from lgorbifold.core.poly import PolyMatrix, VarSpec
from lgorbifold.core.scalars import CycNum
from lgorbifold.commands.problems.models import (
    GeneratorCheck,
    MFSpec,
    MFSummary,
    ModelSummary,
    ProblemFile,
    RhoSpec,
    SectorSummary,
    ValidateReport,
)

logger = logging.getLogger(__name__)


@dataclass
class Problem:
    model: LGModel
    mfs: typ.Dict[str, EquivMF]
    specs: typ.Dict[str, MFSpec] = field(default_factory=dict)
    degree_window_slack: Fraction = config.DEGREE_WINDOW_SLACK

    def get_mf(self, name: str) -> EquivMF:
        try:
            return self.mfs[name]
        except KeyError:
            raise UnknownNameError(
                f"no factorization named '{name}' (defined: {', '.join(self.mfs) or 'none'})",
                module="cli",
            )


#
# Loading
#


def load_problem(path: typ.Union[str, Path]) -> Problem:
    text = Path(path).read_text()
    logger.debug("loading problem file %s", path)
    return build_problem(ProblemFile.model_validate_json(text))


def build_problem(data: ProblemFile) -> Problem:
    variables = [VarSpec(v.name, Fraction(v.weight)) for v in data.variables]
    ring = make_ring(variables, data.group)
    model = build_model(
        ring,
        data.potential,
        data.group,
        graded=data.options.graded,
        cap=data.options.group_order_cap,
    )
    slack = (
        Fraction(data.options.degree_window_slack)
        if data.options.degree_window_slack is not None
        else config.DEGREE_WINDOW_SLACK
    )
    specs = {spec.name: spec for spec in data.mfs}
    mfs: typ.Dict[str, EquivMF] = {}
    for spec in data.mfs:
        _resolve(spec.name, specs, mfs, model, ())
    logger.debug("built %d factorizations", len(mfs))
    return Problem(model=model, mfs=mfs, specs=specs, degree_window_slack=slack)


def _resolve(
    name: str,
    specs: typ.Mapping[str, MFSpec],
    built: typ.Dict[str, EquivMF],
    model: LGModel,
    stack: typ.Tuple[str, ...],
) -> EquivMF:
    if name in built:
        return built[name]
    if name in stack:
        raise ConstructionError(
            f"factorizations refer to each other in a cycle: {' -> '.join(stack + (name,))}",
            module="cli",
        )
    if name not in specs:
        raise UnknownNameError(f"no factorization named '{name}'", module="cli")
    spec = specs[name]
    stack = stack + (name,)

    def ref(other: str) -> EquivMF:
        return _resolve(other, specs, built, model, stack)

    if spec.koszul is not None:
        rho = _rho_from_spec(spec.rho, model) if spec.rho is not None else None
        P = koszul([tuple(pair) for pair in spec.koszul], model, name, rho=rho)
    elif spec.matrices is not None:
        P = _from_matrices(spec, model)
    elif spec.tensor is not None:
        P = tensor(ref(spec.tensor[0]), ref(spec.tensor[1]), name)
    elif spec.dual is not None:
        P = dual(ref(spec.dual), name)
    else:
        left, right = typ.cast(typ.Tuple[str, str], spec.direct_sum)
        P = direct_sum(ref(left), ref(right), name)

    if spec.twist is not None:
        P = twist(P, spec.twist, name)
    built[name] = P
    return P


def _scalar(text: str, model: LGModel, where: str) -> CycNum:
    p = model.ring.parse(text)
    if not p.is_constant():
        raise ConstructionError(f"{where}: '{text}' is not a constant", module="cli")
    return p.constant_term()


def _rho_from_spec(rho: typ.Sequence[RhoSpec], model: LGModel) -> typ.Tuple[RhoPair, ...]:
    pairs = []
    for k, item in enumerate(rho):
        even = tuple(
            tuple(_scalar(x, model, f"rho[{k}].even") for x in row) for row in item.even
        )
        odd = tuple(tuple(_scalar(x, model, f"rho[{k}].odd") for x in row) for row in item.odd)
        pairs.append((even, odd))
    return tuple(pairs)


def _parse_matrix(rows: typ.Sequence[typ.Sequence[str]], model: LGModel) -> PolyMatrix:
    return tuple(tuple(model.ring.parse(x) for x in row) for row in rows)


def _from_matrices(spec: MFSpec, model: LGModel) -> EquivMF:
    matrices = typ.cast(typ.Any, spec.matrices)
    A = _parse_matrix(matrices.a, model)
    B = _parse_matrix(matrices.b, model)
    if spec.rho is None:
        if model.group.generators:
            raise EquivarianceError(
                f"{spec.name}: matrix factorizations need rho for every group generator",
                module="cli",
            )
        rho: typ.Tuple[RhoPair, ...] = ()
    else:
        rho = _rho_from_spec(spec.rho, model)

    if spec.weights_even is not None and spec.weights_odd is not None:
        weights_even = [Fraction(x) for x in spec.weights_even]
        weights_odd = [Fraction(x) for x in spec.weights_odd]
    elif model.graded:
        weights_even, weights_odd = infer_weights(A, B, model)
    else:
        weights_even = weights_odd = [Fraction(0)] * len(A)
    return make_mf(model, A, B, rho, weights_even, weights_odd, spec.name)


def infer_weights(
    A: PolyMatrix, B: PolyMatrix, model: LGModel
) -> typ.Tuple[typ.List[Fraction], typ.List[Fraction]]:
    """
    Generator weights from the entry degrees: we_i - wo_j = deg A_ij and
    wo_i - we_j = deg B_ij - d. Each connected block is anchored at weight 0.
    """
    d = model.d or Fraction(0)
    r = len(A)
    # node i is e0_i, node r + j is e1_j; edge (v, delta) from u means weight(v) = weight(u) + delta
    edges: typ.Dict[int, typ.List[typ.Tuple[int, Fraction]]] = {k: [] for k in range(2 * r)}

    def link(u: int, v: int, delta: Fraction):
        edges[u].append((v, delta))
        edges[v].append((u, -delta))

    for i, row in enumerate(A):
        for j, entry in enumerate(row):
            degree = entry.homogeneous_degree() if entry else None
            if degree is not None and j < r:
                link(i, r + j, -degree)
    for i, row in enumerate(B):
        for j, entry in enumerate(row):
            degree = entry.homogeneous_degree() if entry else None
            if degree is not None and i < r and j < r:
                link(j, r + i, degree - d)

    weights: typ.List[typ.Optional[Fraction]] = [None] * (2 * r)
    for start in range(2 * r):
        if weights[start] is not None:
            continue
        weights[start] = Fraction(0)
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for other, delta in edges[node]:
                if weights[other] is None:
                    weights[other] = typ.cast(Fraction, weights[node]) + delta
                    queue.append(other)
    resolved = [typ.cast(Fraction, x) for x in weights]
    return resolved[:r], resolved[r:]


#
# Reports
#


def _milnor_number(value: typ.Union[int, float]) -> typ.Optional[int]:
    return None if value == float("inf") else int(value)


def summarize_model(model: LGModel) -> ModelSummary:
    sectors = []
    for s in model.sectors:
        sectors.append(
            SectorSummary(
                element=format_phases(s.element.phases),
                fixed_vars=list(s.fixed_vars),
                n_g=s.n_g,
                eigenvalues=[str(x) for x in s.moving_eigenvalues],
                denominator=str(s.denominator),
                milnor_number=_milnor_number(model.sector_milnor(s).milnor_number),
            )
        )
    return ModelSummary(
        variables=list(model.ring.names),
        weights=[str(w) for w in model.ring.weights],
        potential=str(model.w),
        degree=None if model.d is None else str(model.d),
        graded=model.graded,
        conductor=model.field.conductor,
        group_order=model.group.order,
        milnor_number=_milnor_number(model.milnor.milnor_number),
        sectors=sectors,
    )


def homotopy_identity_holds(P: EquivMF) -> bool:
    return all(
        not x for name in P.ring.names for row in homotopy_defect(P, name) for x in row
    )


def summarize_mf(P: EquivMF, kind: str = "") -> MFSummary:
    group = P.model.group
    checks = [
        GeneratorCheck(
            generator=format_phases(gen),
            order=group.generator_order(k),
            equivariant=P.is_equivariant_for(k),
        )
        for k, gen in enumerate(group.generators)
    ]
    return MFSummary(
        name=P.name,
        kind=kind,
        rank=P.rank,
        potential=str(P.potential),
        weights_even=[str(x) for x in P.weights_even],
        weights_odd=[str(x) for x in P.weights_odd],
        equivariance=checks,
        homotopy_identity=homotopy_identity_holds(P),
    )


def validate_problem(problem: Problem) -> ValidateReport:
    summaries = []
    for name, P in problem.mfs.items():
        spec = problem.specs.get(name)
        summary = summarize_mf(P, spec.kind if spec else "")
        if not summary.homotopy_identity:
            logger.warning("%s: homotopy identity fails", name)
        summaries.append(summary)
    return ValidateReport(
        model=summarize_model(problem.model),
        mfs=summaries,
        valid=all(s.homotopy_identity for s in summaries),
    )
