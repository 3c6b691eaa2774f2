"""Exact k-apex solving: delete at most k vertices to make a graph planar."""

from .constants import Constants, radius_for
from .generate import generate_planted_instance, plant
from .graph import CapacityError, DomainError, Graph, ParseError, ResourceLimitError, load_graph
from .pipeline import PipelineConfig, run_pipeline, run_pipeline_traced
from .planarity import find_kuratowski, is_planar, planar_embedding
from .solver import ApexOutcome, brute_force_oracle, solve_exact, verify_solution

__all__ = [
    "ApexOutcome",
    "CapacityError",
    "Constants",
    "DomainError",
    "Graph",
    "ParseError",
    "PipelineConfig",
    "ResourceLimitError",
    "brute_force_oracle",
    "find_kuratowski",
    "generate_planted_instance",
    "is_planar",
    "load_graph",
    "plant",
    "planar_embedding",
    "radius_for",
    "run_pipeline",
    "run_pipeline_traced",
    "solve_exact",
    "verify_solution",
]

__version__ = "0.1.0"
