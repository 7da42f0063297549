"""File formats, the built-in catalog, batch suites and the command line."""

from .catalog import CatalogEntry, UnknownName, catalog, catalog_names
from .search import DEFAULT_GRID, GridHit, UnclassifiedSolution, grid_completeness_search
from .suite import RunReport, SuiteConfig, run_verification_suite

__all__ = [
    "CatalogEntry",
    "UnknownName",
    "catalog",
    "catalog_names",
    "DEFAULT_GRID",
    "GridHit",
    "UnclassifiedSolution",
    "grid_completeness_search",
    "RunReport",
    "SuiteConfig",
    "run_verification_suite",
]
