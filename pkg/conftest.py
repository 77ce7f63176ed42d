import numpy as np
import pytest

from app.fields.generator import PermeabilityField, generate
from app.grid.hierarchy import build_hierarchy
from app.physics.assembly import Problem
from app.schemas.field import FieldSpec
from app.schemas.grid import CoarseningRatio, FineGrid
from app.schemas.physics import BoundarySpec, FluidModel, RockModel


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run desk-scale studies")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale study, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def grid8():
    return FineGrid(nx=8, ny=8, nz=8)


@pytest.fixture
def hierarchy8(grid8):
    return build_hierarchy(grid8, CoarseningRatio.cube(4))


def patchy_field(n: int, seed: int, var: float = 4.0, psi=(0.125, 0.125, 0.125)) -> PermeabilityField:
    return generate(FieldSpec(nx=n, ny=n, nz=n, mean_lnk=-1.0, var_lnk=var, psi=psi, seed=seed))


def homogeneous_field(grid: FineGrid, k: float = 1.0) -> PermeabilityField:
    return PermeabilityField(k=np.full(grid.n_cells, k), dims=grid.dims)


@pytest.fixture
def make_problem():
    def factory(n=16, seed=0, var=4.0, eta=1.0, boundary=None, field=None, grid=None):
        grid = grid or FineGrid(nx=n, ny=n, nz=n)
        if field is None:
            field = patchy_field(grid.nx, seed, var) if var > 0 else homogeneous_field(grid, np.exp(-1.0))
        return Problem(
            grid=grid,
            field=field,
            fluid=FluidModel(eta=eta),
            rock=RockModel(),
            boundary=boundary or BoundarySpec(),
        )

    return factory


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
