"""Exact and constructive L(h,k)-labelings of direct products of paths and cycles."""

from .constructions import construct, construct_with_method, derive_tile, load_fig1_tiles
from .errors import (
    DataIntegrityError,
    InfeasibleError,
    InvalidSizeError,
    KeyParseError,
    LambdaLabError,
    MissingLabelError,
    OutOfRegimeError,
    ResourceLimitError,
    SeamViolationError,
    UnsupportedRegimeError,
    VertexRangeError,
)
from .estimator import LambdaLabeler, check_graph, check_hk
from .graphs import Graph, cartesian_product, connected_components, cycle, direct_product, path, product_of, star
from .keys import UNRESOLVED, InstanceKey, expected_lambda, published_claims
from .labeling import Labeling, Violation, is_valid, lambda_cycle, lambda_path, star_lower_bound, verify
from .solver import SearchConfig, brute_force, decide, solve_exact, solve_via_square
from .store import ResultRecord, ResultStore
from .tiles import PatternTile, concat_tiles

__version__ = "0.1.0"
