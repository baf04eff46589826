"""Windowed path-pullback engine.

A ``PathState`` holds one unit time window [n, n+1] of a path of marked
configurations on the sphere, sampled at N+1 equally spaced times.  One
``pullback_step`` produces the window [n+1, n+2]: each non-pinned marked
point i is replaced by the d-th root, on the branch continuous along the
window, of the Moebius radicand built from the three anchor values at the
same sample time, applied to the sample of the forward image i#.

Memory stays bounded: one window plus at most K_MAX + 1 integer-time
snapshots for cycle detection.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum

from .sphere import (
    INF,
    BicriticalMap,
    BranchAmbiguity,
    DegenerateTriple,
    continuous_root,
    mobius_from_three,
    pullback_radicand,
    sph_dist,
    sph_midpoint,
)
from .sphere import DEGENERATE_TOL, BRANCH_RHO

DEFAULT_SAMPLES = 64
TOL_CONVERGE = 1e-10
TOL_DEGENERATE = 1e-8
TOL_COLLIDE = 1e-6
TOL_CYCLE = 1e-6
K_MAX = 8
MAX_ITER = 200
MAX_SUBDIVISION_DEPTH = 20
PROXIMITY_DEPTH = 6
RADICAND_PROXIMITY = 1e-3
SEGMENT_MOTION_FLOOR = 1e-8
MAX_SAMPLE_GAP = 0.5


class Status(Enum):
    CONVERGED = "Converged"
    DEGENERATE = "Degenerate"
    CYCLE_DETECTED = "CycleDetected"
    MAX_ITER = "MaxIter"
    HOMOTOPY_FAILURE = "HomotopyFailure"


class HomotopyFailure(ArithmeticError):
    """Branch tracking failed even at the maximum subdivision depth."""


class AmbiguousClustering(ValueError):
    """Some pair of limit values sits between tol_collide and
    10 * tol_collide: the run has not separated its clusters yet."""


@dataclass(frozen=True)
class MarkedPoint:
    """Bookkeeping for one path coordinate.

    ``target`` is the index of the forward image under the marked map
    (i#); ``pin`` freezes the coordinate at an exact value; ``side`` and
    ``angle`` carry the external-angle tag when one exists; tracked points
    follow the pullback but are never anchors.
    """

    pid: str
    target: int
    pin: object = None
    side: str = None
    angle: object = None
    tracked: bool = False


@dataclass(frozen=True)
class AnchorRule:
    """How to read the three values m(INF), m(0), m(1) off a configuration.

    kind "rational": (config[alpha], config[beta], 1)  -- maps normalized
    by f(1) = 1 with both critical values marked.
    kind "polynomial": (INF, config[beta], config[beta] + 1) -- the monic
    centered family z^d + c, where the Moebius part is w + c.
    """

    kind: str
    alpha: int = -1
    beta: int = -1

    def anchors(self, config):
        if self.kind == "rational":
            return (config[self.alpha], config[self.beta], 1 + 0j)
        if self.kind == "polynomial":
            head = config[self.beta]
            if head is INF:
                raise DegenerateTriple("polynomial coefficient at infinity")
            return (INF, head, head + 1)
        raise ValueError("unknown anchor kind %r" % self.kind)


@dataclass
class PathState:
    """One unit window [n, n+1] of the pulled-back path."""

    n: int
    nsamples: int
    degree: int
    points: tuple
    samples: list
    anchor: AnchorRule

    def config(self, j):
        return [row[j] for row in self.samples]

    def start_config(self):
        return self.config(0)

    def end_config(self):
        return self.config(self.nsamples)

    def index_of(self, pid):
        for i, pt in enumerate(self.points):
            if pt.pid == pid:
                return i
        raise KeyError(pid)

    def validate(self):
        """Check the structural invariants of a freshly built window."""
        if len(self.samples) != len(self.points):
            raise ValueError("sample rows do not match points")
        for pt, row in zip(self.points, self.samples):
            if len(row) != self.nsamples + 1:
                raise ValueError("wrong sample count for %s" % pt.pid)
            if not 0 <= pt.target < len(self.points):
                raise ValueError("bad target index for %s" % pt.pid)
            if pt.pin is not None and any(v is not pt.pin and v != pt.pin for v in row):
                raise ValueError("pinned point %s moved" % pt.pid)
            for a, b in zip(row, row[1:]):
                if sph_dist(a, b) > MAX_SAMPLE_GAP:
                    raise ValueError(
                        "consecutive samples of %s are %.3f apart" % (pt.pid, sph_dist(a, b))
                    )
        return self


def _near_singular(radicand):
    if radicand is INF or radicand == 0:
        return False
    return (
        sph_dist(radicand, 0j) < RADICAND_PROXIMITY
        or sph_dist(radicand, INF) < RADICAND_PROXIMITY
    )


def _segment_motion(anch0, tgt0, anch1, tgt1):
    total = sph_dist(tgt0, tgt1)
    for a, b in zip(anch0, anch1):
        total += sph_dist(a, b)
    return total


def _interp_triple(anch0, anch1):
    return tuple(sph_midpoint(a, b) for a, b in zip(anch0, anch1))


def _continue_segment(prev, anch0, tgt0, anch1, tgt1, degree, rho, depth):
    """Value at the right end of a path segment, following the branch
    continuously from ``prev`` at the left end; subdivides on ambiguity
    (hard limit) or on radicand proximity to 0/INF (soft limit)."""
    radicand = pullback_radicand(anch1[0], anch1[1], anch1[2], tgt1)
    moving = _segment_motion(anch0, tgt0, anch1, tgt1) > SEGMENT_MOTION_FLOOR
    if moving and depth < PROXIMITY_DEPTH and _near_singular(radicand):
        return _split_segment(prev, anch0, tgt0, anch1, tgt1, degree, rho, depth)
    try:
        root, _ = continuous_root(prev, radicand, degree, rho)
    except BranchAmbiguity as exc:
        if depth >= MAX_SUBDIVISION_DEPTH:
            raise HomotopyFailure(
                "branch ambiguity %.3f persists at subdivision depth %d"
                % (exc.ambiguity, depth)
            ) from exc
        return _split_segment(prev, anch0, tgt0, anch1, tgt1, degree, rho, depth)
    return root


def _split_segment(prev, anch0, tgt0, anch1, tgt1, degree, rho, depth):
    anch_mid = _interp_triple(anch0, anch1)
    tgt_mid = sph_midpoint(tgt0, tgt1)
    mid = _continue_segment(
        prev, anch0, tgt0, anch_mid, tgt_mid, degree, rho, depth + 1
    )
    return _continue_segment(
        mid, anch_mid, tgt_mid, anch1, tgt1, degree, rho, depth + 1
    )


def pullback_step(state, rho=BRANCH_RHO):
    """Pull the window [n, n+1] back to [n+1, n+2].

    The new sample j of point i solves f_t(new) = old sample j of i#,
    where f_t is the bicritical map anchored at the old sample j; the
    root branch is seeded at j = 0 by the old window's final sample of i
    and then follows continuity.  Pinned coordinates are copied exactly.
    """
    npts = len(state.points)
    nsm = state.nsamples
    anchor_vals = []
    for j in range(nsm + 1):
        triple = state.anchor.anchors(state.config(j))
        a, b, g = triple
        if (
            sph_dist(a, b) <= DEGENERATE_TOL
            or sph_dist(a, g) <= DEGENERATE_TOL
            or sph_dist(b, g) <= DEGENERATE_TOL
        ):
            raise DegenerateTriple(
                "anchor triple collapsed at sample %d of window %d" % (j, state.n)
            )
        anchor_vals.append(triple)

    new_samples = []
    for i in range(npts):
        pt = state.points[i]
        if pt.pin is not None:
            new_samples.append([pt.pin] * (nsm + 1))
            continue
        targets = state.samples[pt.target]
        row = [None] * (nsm + 1)
        prev = state.samples[i][nsm]
        row[0] = prev
        for j in range(1, nsm + 1):
            try:
                value = _continue_segment(
                    prev,
                    anchor_vals[j - 1],
                    targets[j - 1],
                    anchor_vals[j],
                    targets[j],
                    state.degree,
                    rho,
                    0,
                )
            except HomotopyFailure as exc:
                raise HomotopyFailure(
                    "%s (point %s, window %d, sample %d)"
                    % (exc, pt.pid, state.n, j)
                ) from exc
            row[j] = value
            prev = value
        new_samples.append(row)
    return PathState(
        n=state.n + 1,
        nsamples=nsm,
        degree=state.degree,
        points=state.points,
        samples=new_samples,
        anchor=state.anchor,
    )


def convergence_measure(state):
    """Largest spherical arc length of any marked point over the window."""
    worst = 0.0
    for pt, row in zip(state.points, state.samples):
        if pt.pin is not None:
            continue
        length = 0.0
        for a, b in zip(row, row[1:]):
            length += sph_dist(a, b)
        if length > worst:
            worst = length
    return worst


def _config_dist(cfg_a, cfg_b):
    return max(sph_dist(a, b) for a, b in zip(cfg_a, cfg_b))


@dataclass
class RunOptions:
    tol: float = TOL_CONVERGE
    tol_degen: float = TOL_DEGENERATE
    tol_collide: float = TOL_COLLIDE
    tol_cycle: float = TOL_CYCLE
    k_max: int = K_MAX
    max_iter: int = MAX_ITER
    rho: float = BRANCH_RHO


def classify(state, history, iterations, options, measure=None):
    """Terminal status of the current state, or None to keep iterating.

    Precedence: Converged, then Degenerate (critical values f(0), f(INF)
    closer than tol_degen), then CycleDetected (integer-time configuration
    repeats at some lag 2..k_max while still genuinely moving), then
    MaxIter.
    """
    if measure is None:
        measure = convergence_measure(state)
    if measure < options.tol:
        return Status.CONVERGED, None
    end = state.end_config()
    try:
        x_alpha, x_beta, _ = state.anchor.anchors(end)
        degen = sph_dist(x_alpha, x_beta) < options.tol_degen
    except DegenerateTriple:
        degen = True
    if degen:
        return Status.DEGENERATE, None
    if len(history) >= 3:
        latest = history[-1]
        if _config_dist(latest, history[-2]) > 10 * options.tol_cycle:
            for lag in range(2, min(options.k_max, len(history) - 1) + 1):
                if _config_dist(latest, history[-1 - lag]) < options.tol_cycle:
                    return Status.CYCLE_DETECTED, lag
    if iterations >= options.max_iter:
        return Status.MAX_ITER, None
    return None, None


def detect_collisions(items, tol_collide=TOL_COLLIDE):
    """Single-linkage clusters of (id, value) pairs at scale tol_collide.

    Raises AmbiguousClustering when any pair of values falls in the gap
    (tol_collide, 10 * tol_collide): the scales have not separated.
    """
    ids = [pid for pid, _ in items]
    values = [value for _, value in items]
    parent = list(range(len(ids)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            dist = sph_dist(values[i], values[j])
            if tol_collide < dist < 10 * tol_collide:
                raise AmbiguousClustering(
                    "pair (%s, %s) at distance %.3e is between tol and 10*tol"
                    % (ids[i], ids[j], dist)
                )
            if dist <= tol_collide:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups = {}
    for i, pid in enumerate(ids):
        groups.setdefault(find(i), []).append(pid)
    return tuple(
        sorted((frozenset(g) for g in groups.values()), key=lambda s: sorted(s))
    )


@dataclass
class RunResult:
    status: Status
    period: object
    iterations: int
    state: PathState
    limits: dict
    final_map: object
    collisions: object
    trace: list
    warnings: list

    @property
    def exit_code(self):
        return {
            Status.CONVERGED: 0,
            Status.DEGENERATE: 2,
            Status.CYCLE_DETECTED: 3,
            Status.MAX_ITER: 4,
            Status.HOMOTOPY_FAILURE: 4,
        }[self.status]


def run_pullback(state, options=None, observer=None):
    """Iterate pullback steps until a terminal status is reached.

    ``observer(state)`` is invoked on the initial window and after every
    step, so callers can stream samples (frames, traces) without the
    engine storing more than one window.
    """
    options = options or RunOptions()
    history = deque(maxlen=options.k_max + 2)
    history.append(state.start_config())
    trace = []
    warnings = []
    iterations = 0
    if observer is not None:
        observer(state)
    status = period = None
    while True:
        measure = convergence_measure(state)
        trace.append(measure)
        history.append(state.end_config())
        status, period = classify(state, history, iterations, options, measure)
        if status is not None:
            break
        try:
            state = pullback_step(state, rho=options.rho)
        except HomotopyFailure as exc:
            warnings.append(str(exc))
            status = Status.HOMOTOPY_FAILURE
            break
        except DegenerateTriple as exc:
            warnings.append(str(exc))
            status = Status.DEGENERATE
            break
        iterations += 1
        if observer is not None:
            observer(state)

    limits = {pt.pid: value for pt, value in zip(state.points, state.end_config())}
    final_map = None
    try:
        triple = state.anchor.anchors(state.end_config())
        final_map = BicriticalMap(mobius_from_three(*triple), state.degree)
    except DegenerateTriple:
        pass
    collisions = None
    if status is Status.CONVERGED:
        marked = [
            (pt.pid, value)
            for pt, value in zip(state.points, state.end_config())
            if not pt.tracked
        ]
        try:
            collisions = detect_collisions(marked, options.tol_collide)
        except AmbiguousClustering as exc:
            warnings.append(str(exc))
    return RunResult(
        status=status,
        period=period,
        iterations=iterations,
        state=state,
        limits=limits,
        final_map=final_map,
        collisions=collisions,
        trace=trace,
        warnings=warnings,
    )
