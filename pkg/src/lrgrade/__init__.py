"""LR meshes, LR B-splines and Effective Grading refinement."""

from .bsplines import (LRBSpline, LRSet, LocalMesh, evaluate, evaluate_set, format_set, has_minimal_support,
                       initial_lr_set, knot_insert, local_mesh, parse_set, update_lr_set)
from .eg import (BoxShape, Variant, box_level_and_shape, eg_grader, eg_iterate, halve_box, parent_diameter_sq,
                 refining_step, shadow_direction)
from .mesh import (FULL, RESOLUTION_BITS, Box, Domain, LRMesh, MeshError, MeshFormatError, Meshline, Segment,
                   box_partition, crossing_count, format_mesh, insert_segment, make_open_tensor_mesh, parse_mesh,
                   validate_mesh)
from .shadow import Region, classic_shadow, generalized_shadow, separation_distance, shadow_endpoints
from .verify import (GradingReport, NestedPair, box_support_counts, find_nested_pairs, grading_report,
                     local_independence_bruteforce, partition_of_unity_deviation, run_checks, spanning_condition)

__version__ = "0.1.0"
