"""Point-cloud frames of a pullback run.

A run's filled-Julia-set images are approximated by the iterated
square-root preimages of the repelling beta fixed point (the "beta
tree"), which are forward invariant, tagged by dyadic external angles,
and carried along the pullback like any other tracked coordinate.  Each
scheduled sample time becomes one binary PPM frame with additive
blending: P-side cloud blue, Q-side cloud red, marked points white.
"""

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .angles import norm_angle
from .capture import trace_ray_set
from .engine import Status
from .mating import TrackedPoint, mating_run
from .sphere import INF
from .spider import spider_run

MAX_TREE_DEPTH = 16

P_COLOR = (0, 0, 255)
Q_COLOR = (255, 0, 0)
MARKED_COLOR = (255, 255, 255)


@dataclass(frozen=True)
class TreeNode:
    """One node of a beta tree: a ray landing value, its dyadic angle,
    its level, and the index of its forward image in the same tuple."""

    angle: Fraction
    value: complex
    level: int
    forward: int


def _tree_values(c, depth, rays, theta):
    """angle -> landing value for the dyadic tree, rebuilt level by level.

    Backward square roots from the beta root, branch-matched against the
    traced landings, keep full precision where the landing sits on the
    critical orbit and the Newton polish inside the ray tracer levels
    off (zero Jacobian).  When the polynomial's own angle ``theta`` is
    dyadic, the node at ``theta`` is the critical value and its halves
    are the critical point, so those values are pinned exactly.
    """
    exact = {}
    if theta is not None:
        theta = norm_angle(theta)
        if theta and (theta.denominator & (theta.denominator - 1)) == 0:
            exact[theta] = c
            exact[norm_angle(theta / 2)] = 0j
            exact[norm_angle(theta / 2 + Fraction(1, 2))] = 0j
    values = {Fraction(0): rays[Fraction(0)].landing}
    for level in range(1, depth + 1):
        width = 1 << level
        for j in range(1, width, 2):
            angle = Fraction(j, width)
            if angle in exact:
                values[angle] = exact[angle]
                continue
            image = values[angle * 2 % 1]
            root = np.sqrt(complex(image - c))
            traced = rays[angle].landing
            values[angle] = root if abs(root - traced) <= abs(-root - traced) else -root
    return values


def build_tracked_set(c, depth, theta=None):
    """Beta tree of ``z^2 + c``: all square-root preimages of the beta
    fixed point down to ``depth`` levels.

    Level k holds 2^k nodes, one per angle j/2^k, values taken from the
    traced external rays; angles already present at a shallower level
    reappear as fresh nodes, so the tree always has 2^(depth+1) - 1
    entries.  Every node's value maps onto its forward node's value to
    1e-9.  Pass the polynomial's own external angle as ``theta`` so that
    landings on the critical orbit come out exact when it is dyadic.
    """
    depth = int(depth)
    if depth < 0 or depth > MAX_TREE_DEPTH:
        raise ValueError("depth must be in 0..%d" % MAX_TREE_DEPTH)
    c = complex(c)
    denom = 1 << depth
    rays = trace_ray_set(c, [Fraction(j, denom) for j in range(denom)])
    values = _tree_values(c, depth, rays, theta)
    nodes = []
    for level in range(depth + 1):
        width = 1 << level
        offset_up = (width >> 1) - 1
        for j in range(width):
            angle = Fraction(j, width)
            forward = 0 if level == 0 else offset_up + j % (width >> 1)
            nodes.append(
                TreeNode(
                    angle=angle,
                    value=values[angle],
                    level=level,
                    forward=forward,
                )
            )
    for node in nodes:
        image = nodes[node.forward].value
        if abs(node.value**2 + c - image) > 1e-9:
            raise ArithmeticError(
                "tree node %s misses its image by more than 1e-9" % (node.angle,)
            )
    return tuple(nodes)


def select_for_side(nodes, side):
    """Distinct-angle representatives of a beta tree, tagged with a
    side, in the shape the path initializers consume."""
    seen = set()
    out = []
    for node in nodes:
        if node.angle in seen:
            continue
        seen.add(node.angle)
        out.append(TrackedPoint(side=side, angle=node.angle, value=node.value))
    return tuple(out)


@dataclass(frozen=True)
class FrameSpec:
    """Viewport, schedule, and output layout for frame emission."""

    outdir: str
    width: int = 512
    height: int = 512
    center: complex = 0j
    half_width: float = 2.5
    fps: int = 25
    pattern: str = "frame_%05d.ppm"

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise ValueError("frames must be at least 16x16")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.fps < 1:
            raise ValueError("fps must be at least 1")


class FrameRecorder:
    """Engine observer that keeps the sampled configurations needed to
    rasterize ``fps`` frames per unit window, plus the final endpoint."""

    def __init__(self, fps):
        self.fps = int(fps)
        self.points = None
        self.frames = []
        self.tail = None

    def __call__(self, state):
        if self.points is None:
            if self.fps > state.nsamples:
                raise ValueError("fps exceeds engine samples per unit")
            self.points = state.points
        for i in range(self.fps):
            self.frames.append(state.config(i * state.nsamples // self.fps))
        self.tail = state.end_config()

    def all_frames(self):
        out = list(self.frames)
        if self.tail is not None:
            out.append(self.tail)
        return out


def _point_color(pt):
    if pt is None or not getattr(pt, "tracked", False):
        return MARKED_COLOR
    return P_COLOR if pt.side == "P" else Q_COLOR


def rasterize(config, points, spec):
    """Plot one configuration as an additive-blend RGB array."""
    img = np.zeros((spec.height, spec.width, 3), dtype=np.uint16)
    cx, cy = spec.center.real, spec.center.imag
    half_h = spec.half_width * spec.height / spec.width
    for k, value in enumerate(config):
        if value is INF:
            continue
        px = int(round((value.real - cx + spec.half_width)
                       / (2 * spec.half_width) * (spec.width - 1)))
        py = int(round((half_h - (value.imag - cy))
                       / (2 * half_h) * (spec.height - 1)))
        if 0 <= px < spec.width and 0 <= py < spec.height:
            img[py, px] += np.array(
                _point_color(points[k] if points else None), dtype=np.uint16
            )
    return np.minimum(img, 255).astype(np.uint8)


def write_ppm(path, img):
    height, width = img.shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (width, height))
        fh.write(img.tobytes())


def emit_frames(run, frame_spec):
    """Write one frame per scheduled sample of a recorded run.

    ``run`` is a :class:`FrameRecorder` fed to the engine as observer.
    Returns the written paths; output is byte deterministic for fixed
    inputs.
    """
    os.makedirs(frame_spec.outdir, exist_ok=True)
    paths = []
    for k, config in enumerate(run.all_frames()):
        img = rasterize(config, run.points, frame_spec)
        path = os.path.join(frame_spec.outdir, frame_spec.pattern % k)
        write_ppm(path, img)
        paths.append(path)
    return tuple(paths)


def render_run(spec, frame_spec, depth=6, options=None, c_p=None, c_q=None):
    """Run a mating with beta trees tracked on both sides and emit its
    frames.  Returns ``(mating_result, paths)``."""
    if c_p is None:
        side = spider_run(spec.theta_p, nsamples=spec.nsamples)
        if side.result is not None and side.status is not Status.CONVERGED:
            raise RuntimeError("P-side spider did not converge")
        c_p = side.c
    if c_q is None:
        side = spider_run(spec.theta_q, nsamples=spec.nsamples)
        if side.result is not None and side.status is not Status.CONVERGED:
            raise RuntimeError("Q-side spider did not converge")
        c_q = side.c
    tracked = select_for_side(build_tracked_set(c_p, depth, spec.theta_p), "P") + \
        select_for_side(build_tracked_set(c_q, depth, spec.theta_q), "Q")
    recorder = FrameRecorder(frame_spec.fps)
    result = mating_run(
        spec, options=options, observer=recorder, tracked=tracked,
        c_p=c_p, c_q=c_q,
    )
    return result, emit_frames(recorder, frame_spec)
