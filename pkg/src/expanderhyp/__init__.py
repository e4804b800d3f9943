"""Hyperbolicity and expansion measurements for finite graphs."""
from .graph import Graph, emit, load_graph, read_graph, remove_vertices
from .metric import (
    UNREACHABLE,
    DistanceMatrix,
    GeodesicBudgetExceeded,
    GeodesicSegment,
    all_pairs_distances,
    ball,
    bfs_distances,
    diameter_pair,
    enumerate_geodesics,
    extract_geodesic,
    interval,
    neighborhood,
)

__version__ = "0.1.0"
