"""Slow-convergence pullback algorithms for quadratic matings, captures,
and spiders, plus the exact angle combinatorics that drives them."""

from .sphere import (
    INF,
    BicriticalMap,
    BranchAmbiguity,
    DegenerateTriple,
    MobiusMap,
    continuous_root,
    mobius_from_three,
    pullback_radicand,
    sph_dist,
    sph_midpoint,
)
from .angles import (
    AngleOrbit,
    CyclicClass,
    RayClassPartition,
    angle_orbit,
    conjugate_limbs,
    lands_together,
    limb_of,
    parse_angle,
    ray_classes,
    wake,
)
from .quadratic import (
    alpha_fixed,
    beta_fixed,
    critical_orbit,
    newton_polish,
    orbit_residual,
)
from .engine import (
    AmbiguousClustering,
    AnchorRule,
    HomotopyFailure,
    MarkedPoint,
    PathState,
    RunOptions,
    RunResult,
    Status,
    classify,
    convergence_measure,
    detect_collisions,
    pullback_step,
    run_pullback,
)
from .spider import SpiderResult, spider_init, spider_run
from .mating import (
    ConjugateLimbError,
    MatingResult,
    MatingSpec,
    TrackedPoint,
    mating_init,
    mating_run,
    scale_radius,
)
from .capture import (
    CaptureResult,
    CaptureSpec,
    PathTooClose,
    RayPolyline,
    RayTraceFailure,
    capture_init,
    capture_run,
    mobius_coefficient_distance,
    trace_external_ray,
    trace_ray_family,
    trace_ray_set,
)
from .entropy import (
    NonConvergent,
    NonnegIntMatrix,
    PairTransitionSystem,
    block_leading_eigenvalues,
    core_entropy,
    is_reducible,
    leading_eigenvalue,
    pair_transitions,
    scc_blocks,
    transpose_relation,
)
from .render import (
    FrameRecorder,
    FrameSpec,
    TreeNode,
    build_tracked_set,
    emit_frames,
    rasterize,
    render_run,
    select_for_side,
    write_ppm,
)

__version__ = "0.1.0"
