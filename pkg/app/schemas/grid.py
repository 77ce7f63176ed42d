from typing import Tuple
from pydantic import BaseModel, Field


class FineGrid(BaseModel):
    nx: int = Field(ge=1)
    ny: int = Field(ge=1)
    nz: int = Field(ge=1)
    dx: float = Field(default=1.0, gt=0)
    dy: float = Field(default=1.0, gt=0)
    dz: float = Field(default=1.0, gt=0)

    model_config = {"frozen": True, "extra": "forbid"}

    @classmethod
    def stretched(cls, nx: int, ny: int, nz: int, h: float = 1.0, alpha: float = 1.0) -> "FineGrid":
        """Grid with dx / alpha = dy = dz = h."""
        return cls(nx=nx, ny=ny, nz=nz, dx=alpha * h, dy=h, dz=h)

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny * self.nz

    @property
    def dims(self) -> Tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    @property
    def shape(self) -> Tuple[int, int, int]:
        # array layout, i runs fastest
        return (self.nz, self.ny, self.nx)

    @property
    def spacing(self) -> Tuple[float, float, float]:
        return (self.dx, self.dy, self.dz)

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy * self.dz

    @property
    def aspect_ratio(self) -> float:
        return self.dx / self.dy

    @property
    def lengths(self) -> Tuple[float, float, float]:
        return (self.nx * self.dx, self.ny * self.dy, self.nz * self.dz)

    def linear_index(self, i: int, j: int, k: int) -> int:
        return i + self.nx * (j + self.ny * k)


class CoarseningRatio(BaseModel):
    cx: int = Field(default=8, ge=1)
    cy: int = Field(default=8, ge=1)
    cz: int = Field(default=8, ge=1)

    model_config = {"frozen": True, "extra": "forbid"}

    @classmethod
    def cube(cls, c: int) -> "CoarseningRatio":
        return cls(cx=c, cy=c, cz=c)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.cx, self.cy, self.cz)

    def label(self) -> str:
        return f"{self.cx}x{self.cy}x{self.cz}"


class GridConfig(BaseModel):
    """Grid section of a run configuration."""

    nx: int = Field(default=16, ge=1)
    ny: int = Field(default=16, ge=1)
    nz: int = Field(default=16, ge=1)
    h: float = Field(default=1.0, gt=0)
    alpha: float = Field(default=1.0, gt=0)

    model_config = {"extra": "forbid"}

    def to_fine_grid(self) -> FineGrid:
        return FineGrid.stretched(self.nx, self.ny, self.nz, h=self.h, alpha=self.alpha)
