"""Slow mating of two postcritically finite quadratic polynomials.

The P-side plane sits near the origin of the sphere scaled by 1/R(t), the
Q-side plane sits near infinity scaled by R(t), with R(t) = R1^(2^(1-t))
sliding from R1^2 down toward 1 as the path parameter t grows.  Marked
points are both postcritical orbits plus the three pins 0, INF, 1; each
engine step halves log R, so the two planes squeeze together and the
pulled-back configurations converge exactly when the geometric mating
exists.

Everything runs in the normalization f(1) = 1 with critical points 0 and
INF ("N1").  Results are also reported rescaled by the Q-side critical
value so that f(INF) = 1 ("N2"), which is the convenient frame for
reading off coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .angles import (
    CyclicClass,
    angle_orbit,
    conjugate_limbs,
    norm_angle,
    ray_classes,
)
from .engine import (
    DEFAULT_SAMPLES,
    AnchorRule,
    MarkedPoint,
    PathState,
    RunOptions,
    Status,
    detect_collisions,
    run_pullback,
)
from .quadratic import critical_orbit
from .sphere import INF, BicriticalMap, MobiusMap
from .spider import spider_run

DEFAULT_R1 = math.e**2


class ConjugateLimbError(ValueError):
    """The two angles sit in conjugate limbs, so the geometric mating
    degenerates.  Pass force=True to run the pullback anyway."""


@dataclass(frozen=True)
class MatingSpec:
    theta_p: Fraction
    theta_q: Fraction
    r1: float = DEFAULT_R1
    nsamples: int = DEFAULT_SAMPLES
    force: bool = False

    def __post_init__(self):
        object.__setattr__(self, "theta_p", norm_angle(self.theta_p))
        object.__setattr__(self, "theta_q", norm_angle(self.theta_q))
        if not self.r1 > 1:
            raise ValueError("r1 must exceed 1")
        if not self.force and conjugate_limbs(self.theta_p, self.theta_q):
            raise ConjugateLimbError(
                "angles %s and %s lie in conjugate limbs"
                % (self.theta_p, self.theta_q)
            )


@dataclass(frozen=True)
class TrackedPoint:
    """A non-postcritical point carried along the pullback: ``value`` is
    its position in the respective polynomial plane, ``angle`` the
    external angle it lands at (dyadic for the beta tree)."""

    side: str
    angle: Fraction
    value: complex


def scale_radius(t, r1=DEFAULT_R1):
    return r1 ** (2.0 ** (1 - t))


def _prefactor(t, c_p, c_q, r1):
    s = 1.0 - t
    return (1 + s * c_q / r1**2) / (1 + s * c_p / r1**2)


def p_side_path(w, t, c_p, c_q, r1=DEFAULT_R1):
    """Initial-window position of the P-plane point w at time t in [0, 1]."""
    radius = scale_radius(t, r1)
    s = 1.0 - t
    return (
        _prefactor(t, c_p, c_q, r1)
        * (w / radius)
        / (1 + s * (c_q / r1**4) * (w - c_p))
    )


def q_side_path(w, t, c_p, c_q, r1=DEFAULT_R1):
    """Initial-window position of the Q-plane point w at time t in [0, 1].

    The Q-plane origin is the glued sphere's point at infinity, so w = 0
    maps to INF (it can only arise for tracked points sitting exactly on
    the Q critical point)."""
    if w == 0:
        return INF
    radius = scale_radius(t, r1)
    s = 1.0 - t
    return (
        _prefactor(t, c_p, c_q, r1)
        * radius
        * (1 + s * (c_p / r1**4) * (w - c_q))
        / w
    )


def _chain(orbit, prefix):
    """(pids, angles, plane orbit length) of the free marked chain.

    A preperiodic orbit is fully marked; a periodic one stops before the
    critical point itself, which is one of the pins.
    """
    if orbit.preperiod > 0:
        count = orbit.length
    else:
        count = orbit.period - 1
    pids = ["%s%d" % (prefix, i + 1) for i in range(count)]
    angles = list(orbit.orbit[:count])
    return pids, angles


def mating_init(spec, c_p, c_q, tracked=()):
    """Unit window [0, 1] for the mating pullback."""
    orbit_p = angle_orbit(spec.theta_p)
    orbit_q = angle_orbit(spec.theta_q)
    x_pids, x_angles = _chain(orbit_p, "x")
    y_pids, y_angles = _chain(orbit_q, "y")
    n_p, n_q = len(x_pids), len(y_pids)
    pin0_idx = n_p + n_q
    pininf_idx = pin0_idx + 1
    pin1_idx = pin0_idx + 2

    def chain_target(i, orbit, base, count, pin_idx):
        if i + 1 < count:
            return base + i + 1
        if orbit.preperiod > 0:
            return base + orbit.preperiod
        return pin_idx

    points = []
    for i, (pid, angle) in enumerate(zip(x_pids, x_angles)):
        points.append(
            MarkedPoint(
                pid=pid,
                target=chain_target(i, orbit_p, 0, n_p, pin0_idx),
                side="P",
                angle=angle,
            )
        )
    for i, (pid, angle) in enumerate(zip(y_pids, y_angles)):
        points.append(
            MarkedPoint(
                pid=pid,
                target=chain_target(i, orbit_q, n_p, n_q, pininf_idx),
                side="Q",
                angle=angle,
            )
        )
    points.append(
        MarkedPoint(
            pid="pin0",
            target=0 if n_p else pin0_idx,
            pin=0j,
            side="P",
        )
    )
    points.append(
        MarkedPoint(
            pid="pininf",
            target=n_p if n_q else pininf_idx,
            pin=INF,
            side="Q",
        )
    )
    points.append(MarkedPoint(pid="pin1", target=pin1_idx, pin=1 + 0j))

    tracked = tuple(tracked)
    index_of = {pt.pid: i for i, pt in enumerate(points)}
    tracked_index = {}
    base = len(points)
    for j, tp in enumerate(tracked):
        pid = "t%s_%d_%d" % (
            tp.side.lower(),
            tp.angle.numerator,
            tp.angle.denominator,
        )
        tracked_index[(tp.side, tp.angle)] = base + j
        index_of[pid] = base + j
    for j, tp in enumerate(tracked):
        angle = norm_angle(2 * tp.angle)
        if angle == 0 and tp.angle == 0:
            # the beta point is fixed: continue it backward through itself,
            # like the tail of a periodic marked chain
            target = tracked_index[(tp.side, tp.angle)]
        elif angle == 0:
            target = tracked_index.get((tp.side, Fraction(0)), pin1_idx)
        else:
            key = (tp.side, angle)
            if key not in tracked_index:
                raise ValueError(
                    "tracked set not forward closed at %s %s" % (tp.side, tp.angle)
                )
            target = tracked_index[key]
        pid = "t%s_%d_%d" % (
            tp.side.lower(),
            tp.angle.numerator,
            tp.angle.denominator,
        )
        # a tracked value on the critical point IS the corresponding pin
        # (P plane origin -> 0, Q plane origin -> INF), so fix it there
        # instead of pulling it back as a free point
        pin = None
        if tp.value == 0:
            pin = 0j if tp.side == "P" else INF
        points.append(
            MarkedPoint(
                pid=pid,
                target=target,
                pin=pin,
                side=tp.side,
                angle=tp.angle,
                tracked=True,
            )
        )

    p_orbit_pts = critical_orbit(c_p, n_p) if n_p else []
    q_orbit_pts = critical_orbit(c_q, n_q) if n_q else []
    nsm = spec.nsamples
    times = [j / nsm for j in range(nsm + 1)]
    samples = []
    for w in p_orbit_pts:
        samples.append([p_side_path(w, t, c_p, c_q, spec.r1) for t in times])
    for w in q_orbit_pts:
        samples.append([q_side_path(w, t, c_p, c_q, spec.r1) for t in times])
    samples.append([0j] * (nsm + 1))
    samples.append([INF] * (nsm + 1))
    samples.append([1 + 0j] * (nsm + 1))
    for tp in tracked:
        if tp.value == 0:
            fill = 0j if tp.side == "P" else INF
            samples.append([fill] * (nsm + 1))
            continue
        path = p_side_path if tp.side == "P" else q_side_path
        samples.append([path(tp.value, t, c_p, c_q, spec.r1) for t in times])

    state = PathState(
        n=0,
        nsamples=nsm,
        degree=2,
        points=tuple(points),
        samples=samples,
        anchor=AnchorRule(
            kind="rational",
            alpha=n_p if n_q else pininf_idx,
            beta=0 if n_p else pin0_idx,
        ),
    )
    return state.validate()


@dataclass
class MatingResult:
    spec: MatingSpec
    c_p: complex
    c_q: complex
    spider_p: object
    spider_q: object
    result: object

    @property
    def status(self):
        return self.result.status

    @property
    def limits(self):
        return self.result.limits

    @property
    def collisions(self):
        return self.result.collisions

    def limits_n2(self):
        """Limit configuration rescaled so that f(INF) = 1, or None when
        the Q side carries no free critical value."""
        y1 = self.result.limits.get("y1")
        if y1 is None or y1 is INF or y1 == 0:
            return None
        out = {}
        for pid, value in self.result.limits.items():
            out[pid] = INF if value is INF else value / y1
        return out

    def map_n1(self):
        return self.result.final_map

    def map_n2(self):
        """Final map conjugated by z -> z / y1, normalized so f(INF) = 1."""
        fmap = self.result.final_map
        y1 = self.result.limits.get("y1")
        if fmap is None or y1 is None or y1 is INF or y1 == 0:
            return None
        a, b, c, d = fmap.m.coefficients()
        m = MobiusMap(a * y1**2, b, c * y1**3, d * y1)
        return BicriticalMap(m, fmap.d)

    def oracle_tags(self, include_tracked=True):
        """pid -> (side, angle) for every marked point with a meaningful
        landing angle: preperiodic-side orbit points, the three pins, and
        tracked points.  Hyperbolic-side orbit points sit inside Fatou
        components, so no ray lands on them and they are skipped."""
        orbit_p = angle_orbit(self.spec.theta_p)
        orbit_q = angle_orbit(self.spec.theta_q)
        tags = {"pin1": ("P", Fraction(0))}
        if orbit_p.is_preperiodic:
            tags["pin0"] = ("P", self.spec.theta_p / 2)
        if orbit_q.is_preperiodic:
            tags["pininf"] = ("Q", self.spec.theta_q / 2)
        for pt in self.result.state.points:
            if pt.angle is None or pt.pin is not None:
                continue
            if pt.tracked and not include_tracked:
                continue
            side_orbit = orbit_p if pt.side == "P" else orbit_q
            if not pt.tracked and not side_orbit.is_preperiodic:
                continue
            tags[pt.pid] = (pt.side, pt.angle)
        return tags

    def ray_comparison(self, include_tracked=True, tol_collide=None):
        """(observed, expected) partitions of ray tags.

        Observed clusters come from single-linkage collision detection on
        the final configuration; expected ones from the combinatorial ray
        classes restricted to the same tags.  The two are equal exactly
        when the run landed the way the angle dynamics says it must.
        """
        tags = self.oracle_tags(include_tracked)
        options_tol = tol_collide
        if options_tol is None:
            options_tol = RunOptions().tol_collide
        items = [
            (pt.pid, value)
            for pt, value in zip(
                self.result.state.points, self.result.state.end_config()
            )
            if include_tracked or not pt.tracked
        ]
        clusters = detect_collisions(items, options_tol)
        observed = set()
        for cls in clusters:
            cut = frozenset(tags[pid] for pid in cls if pid in tags)
            if cut:
                observed.add(cut)
        partition = ray_classes(
            self.spec.theta_p, self.spec.theta_q, angles=set(tags.values())
        )
        expected = set(partition.restricted(set(tags.values())))
        return observed, expected


def mating_run(
    spec,
    options=None,
    observer=None,
    tracked=(),
    c_p=None,
    c_q=None,
):
    """Full mating pipeline: spiders for both parameters (unless given),
    path initialization, pullback run, and result packaging."""
    spider_p = spider_q = None
    if c_p is None:
        spider_p = spider_run(spec.theta_p, nsamples=spec.nsamples)
        if spider_p.result is not None and spider_p.status is not Status.CONVERGED:
            raise RuntimeError("P-side spider did not converge")
        c_p = spider_p.c
    if c_q is None:
        spider_q = spider_run(spec.theta_q, nsamples=spec.nsamples)
        if spider_q.result is not None and spider_q.status is not Status.CONVERGED:
            raise RuntimeError("Q-side spider did not converge")
        c_q = spider_q.c
    state = mating_init(spec, c_p, c_q, tracked=tracked)
    result = run_pullback(state, options=options, observer=observer)
    return MatingResult(
        spec=spec,
        c_p=c_p,
        c_q=c_q,
        spider_p=spider_p,
        spider_q=spider_q,
        result=result,
    )
