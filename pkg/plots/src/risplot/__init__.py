"""Comparison figures from riswitch harness result CSVs."""

from .figures import PlotSpec, ecdf, plot_sinr_cdf, plot_sweep

__version__ = "0.1.0"
