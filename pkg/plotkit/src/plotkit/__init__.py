"""CSV-to-figure rendering for action time series."""
from .core import (LOG_FLOOR, ActionSeries, PlotSpec, SchemaError,
                   plot_actions, read_actions_csv)

__version__ = "0.1.0"

__all__ = ["LOG_FLOOR", "ActionSeries", "PlotSpec", "SchemaError",
           "plot_actions", "read_actions_csv"]
