"""Isometry invariants and elastic metrics for periodic sequences."""

from .errors import *  # noqa: F401,F403
from .highdim import (
    CyclicDistanceMatrix,
    PeriodicSequenceND,
    TimeValueInvariant,
    cdm,
    elm_oriented_nd,
    equivalent,
    is_generic,
    make_sequence_nd,
    multiple_nd,
    project_time,
    project_values,
    reconstruct_from_cdm,
    reduce_nd,
    tvi,
)
from .isoset import (
    AlphaPartition,
    CenteredCluster,
    Isoset,
    alpha_cluster,
    alpha_partition,
    bridge,
    isoset,
    isoset_equal,
    isotree,
    min_stable_radius,
)
from .metric1d import ElasticDistance, elm, elm_normalized, elm_oriented
from .oracle import PerturbationSpec, bottleneck_1d, check_axioms, perturb, perturb_nd
from .seqcore import (
    DEFAULT_EPS,
    DistanceList,
    PeriodicSequence1D,
    distance_list,
    multiple,
    ndl,
    ndl_oriented,
    normalize,
    reduce_to_minimal_period,
    reflect,
    scale,
    sdl,
    sdl_oriented,
    translate,
)

__version__ = "0.1.0"
