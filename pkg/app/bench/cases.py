"""Turning a run configuration into problems and experiment cases."""
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from pydantic import ValidationError

from app.core.errors import ConfigurationError
from app.fields.field_io import load
from app.fields.generator import PermeabilityField, generate
from app.physics.assembly import Problem
from app.schemas.experiment import ExperimentCase, ExperimentSpec, SweepKind
from app.schemas.field import FieldConfig
from app.schemas.grid import CoarseningRatio, FineGrid, GridConfig
from app.schemas.physics import BoundarySpec, FluidConfig
from app.schemas.run_config import RunConfigFile
from app.schemas.solver import (
    BasisVariant,
    CorrectionVariant,
    RestrictionKind,
    SolverConfig,
    SolverMethod,
)

DEFAULT_SWEEP_VALUES: Dict[SweepKind, List[Any]] = {
    SweepKind.CORRECTION: [v.value for v in CorrectionVariant],
    SweepKind.SMOOTHING: [1, 5, 20],
    SweepKind.COARSENING: [2, 4, 8],
    SweepKind.VARIANCE: [1.0, 2.0, 4.0],
    SweepKind.ASPECT_RATIO: [1.0, 5.0, 10.0],
}


def build_field(fine: FineGrid, config: FieldConfig, seed: int) -> PermeabilityField:
    if config.file:
        if not Path(config.file).is_file():
            raise ConfigurationError(f"field file not found: {config.file}")
        return load(config.file, dims=fine.dims)
    return generate(config.to_spec(fine, seed))


def build_problem(
    grid: GridConfig,
    field: FieldConfig,
    fluid: FluidConfig,
    boundary: BoundarySpec,
    seed: int,
) -> Problem:
    fine = grid.to_fine_grid()
    return Problem(
        grid=fine,
        field=build_field(fine, field, seed),
        fluid=fluid.fluid(),
        rock=fluid.rock,
        boundary=boundary,
        reference=fluid.reference,
    )


def problem_from_config(config: RunConfigFile, seed: Optional[int] = None) -> Problem:
    seed = config.experiment.seed if seed is None else seed
    return build_problem(config.grid, config.field, config.fluid, config.boundary, seed)


def as_ratio(value: Any) -> CoarseningRatio:
    """Sweep value for a coarsening ratio: ``c``, ``[cx, cy, cz]`` or a mapping."""
    try:
        if isinstance(value, CoarseningRatio):
            return value
        if isinstance(value, int):
            return CoarseningRatio.cube(value)
        if isinstance(value, dict):
            return CoarseningRatio(**value)
        cx, cy, cz = value
        return CoarseningRatio(cx=cx, cy=cy, cz=cz)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"invalid coarsening ratio {value!r}: {exc}") from exc


def check_ratio(grid: GridConfig, ratio: CoarseningRatio) -> None:
    for n, c, axis in zip((grid.nx, grid.ny, grid.nz), ratio.as_tuple(), "xyz"):
        if n % c:
            raise ConfigurationError(
                f"coarsening ratio {ratio.label()} does not divide the {n} cells along {axis}"
            )


def _derive(base: SolverConfig, tag: str, **updates) -> SolverConfig:
    try:
        derived = SolverConfig.model_validate({**base.model_dump(), **updates, "label": None})
    except ValidationError as exc:
        raise ConfigurationError(f"invalid solver variant {updates}: {exc}") from exc
    if base.label:
        derived = derived.model_copy(update={"label": f"{base.label}-{tag}"})
    return derived


def solver_variants(config: RunConfigFile) -> List[SolverConfig]:
    base = config.solver
    if not config.experiment.variants:
        return [base]
    variants = []
    for index, overrides in enumerate(config.experiment.variants):
        overrides = dict(overrides)
        label = overrides.pop("label", None)
        variant = _derive(base, label or f"v{index}", **overrides)
        if label:
            variant = variant.model_copy(update={"label": label})
        variants.append(variant)
    return variants


def expand_solver_sweep(base: SolverConfig, kind: SweepKind, values: Iterable[Any]) -> List[SolverConfig]:
    """Solver side sweeps; field and grid sweeps run through ``app.bench.sweeps``."""
    if kind == SweepKind.BASIS:
        try:
            variants = [BasisVariant(v) for v in values] if values else list(BasisVariant)
        except ValueError as exc:
            raise ConfigurationError(f"invalid basis sweep values {list(values)}: {exc}") from exc
        return [
            _derive(base, f"{v.value}-{r.value}", basis_variant=v, restriction=r)
            for v in variants
            for r in (RestrictionKind.FE, RestrictionKind.FV)
        ]
    if kind == SweepKind.CORRECTION:
        return [_derive(base, str(v), correction=v) for v in values]
    if kind == SweepKind.SMOOTHING:
        return [_derive(base, f"ilu{v}", smoothing_steps=v) for v in values]
    return [base]


def build_experiment(config: RunConfigFile) -> ExperimentSpec:
    """Experiment with every solver variant and solver sweep expanded.

    Everything that can be checked without solving is checked here, so a bad
    configuration fails before the first run starts.
    """
    exp = config.experiment
    kind = exp.sweep.kind
    values = exp.sweep.values or DEFAULT_SWEEP_VALUES.get(kind, [])
    solvers = []
    for base in solver_variants(config):
        solvers.extend(expand_solver_sweep(base, kind, values))

    cases = [
        ExperimentCase(config_id=s.config_id, solver=s, grid=config.grid, field=config.field)
        for s in solvers
    ]
    check_cases(cases)
    try:
        return ExperimentSpec(
            name=exp.name,
            cases=cases,
            n_realizations=exp.n_realizations,
            seed=exp.seed,
            schedule=config.schedule,
            fluid=config.fluid,
            boundary=config.boundary,
            output_dir=exp.output_dir,
            jobs=exp.jobs,
        )
    except ValidationError as exc:
        raise ConfigurationError(f"invalid experiment: {exc}") from exc


def check_cases(cases: List[ExperimentCase]) -> None:
    seen = set()
    for case in cases:
        if case.config_id in seen:
            raise ConfigurationError(f"duplicate config id {case.config_id}")
        seen.add(case.config_id)
        if case.solver.method == SolverMethod.MULTISCALE:
            check_ratio(case.grid, case.solver.coarsening)
        if case.field.file and not Path(case.field.file).is_file():
            raise ConfigurationError(f"field file not found: {case.field.file}")
