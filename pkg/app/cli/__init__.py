from .main import build_parser, main
from .vtk import read_structured_points, write_structured_points

__all__ = ["build_parser", "main", "read_structured_points", "write_structured_points"]
