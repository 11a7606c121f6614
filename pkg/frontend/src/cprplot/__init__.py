"""Figure generation for cprdyn simulation output."""

__version__ = "0.1.0"

from .figures import FigureRequest, build_critical_map, build_density, build_trajectories, render
from .readers import (
    CriticalMapData,
    DensityData,
    SchemaError,
    Series,
    read_axis,
    read_critical_map,
    read_density,
    read_matrix,
    read_series,
)

__all__ = [name for name in dir() if not name.startswith("_")]
