"""Spider runs: postcritically finite quadratic parameters from external
angles by pulling back straight spider legs.

The marked points are the critical value orbit x_1 = c, x_2 = f(c), ...
in the monic centered normalization, so one pullback step is the classic
spider relation x_i <- +-sqrt(x_{i+1} - x_1) with the branch chosen by
path continuity.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .angles import angle_orbit, norm_angle
from .engine import (
    DEFAULT_SAMPLES,
    AnchorRule,
    MarkedPoint,
    PathState,
    RunOptions,
    Status,
    run_pullback,
)
from .quadratic import newton_polish, orbit_residual
from .sphere import INF


@dataclass
class SpiderResult:
    theta: Fraction
    orbit: object
    preperiod: int
    period: int
    effective_period: int
    c_raw: complex
    c: complex
    residual: float
    collisions: object
    result: object

    @property
    def status(self):
        return self.result.status


def spider_init(theta, nsamples=DEFAULT_SAMPLES):
    """Initial unit window for the spider of angle theta.

    Legs start as radial segments at the orbit angles: the critical value
    leg grows from the origin out to the unit circle, the final leg of a
    periodic orbit shrinks to the origin (it represents the critical
    point itself), everything else stands still.
    """
    theta = norm_angle(theta)
    orbit = angle_orbit(theta)
    n = orbit.length
    points = []
    for i, angle in enumerate(orbit.orbit):
        if i + 1 < n:
            target = i + 1
        else:
            target = orbit.preperiod if orbit.preperiod > 0 else 0
        points.append(MarkedPoint(pid="x%d" % (i + 1), target=target, angle=angle))
    samples = []
    for i, angle in enumerate(orbit.orbit):
        leg = cmath.exp(2j * cmath.pi * float(angle))
        row = []
        for j in range(nsamples + 1):
            t = j / nsamples
            if i == 0:
                row.append(t * leg)
            elif i == n - 1 and orbit.preperiod == 0:
                value = (1 - t) * leg
                row.append(value if t < 1 else 0j)
            else:
                row.append(leg)
        samples.append(row)
    state = PathState(
        n=0,
        nsamples=nsamples,
        degree=2,
        points=tuple(points),
        samples=samples,
        anchor=AnchorRule(kind="polynomial", beta=0),
    )
    return state.validate()


def _effective_period(orbit, collisions, points):
    """Cycle length of the limit orbit, shortened when marked cycle points
    collide (satellite landings glue the angle cycle onto a shorter one)."""
    k, p = orbit.preperiod, orbit.period
    if collisions is None or p == 1:
        return p
    cluster_of = {}
    for cls in collisions:
        for pid in cls:
            cluster_of[pid] = cls
    cycle = ["x%d" % (k + 1 + i) for i in range(p)]
    for q in range(1, p):
        if p % q:
            continue
        if all(
            cluster_of[cycle[i]] is cluster_of[cycle[(i + q) % p]]
            for i in range(p)
        ):
            return q
    return p


def spider_run(theta, nsamples=DEFAULT_SAMPLES, options=None, observer=None):
    """Run the spider of a rational angle to its parameter.

    The raw parameter is the limit of the critical value leg; it is then
    Newton-polished against the orbit relation using the effective cycle
    length read off the collision clusters.
    """
    theta = norm_angle(theta)
    if theta == 0:
        orbit = angle_orbit(theta)
        return SpiderResult(
            theta=theta,
            orbit=orbit,
            preperiod=0,
            period=1,
            effective_period=1,
            c_raw=0j,
            c=0j,
            residual=0.0,
            collisions=(frozenset({"x1"}),),
            result=None,
        )
    orbit = angle_orbit(theta)
    state = spider_init(theta, nsamples)
    result = run_pullback(state, options=options, observer=observer)
    c_raw = result.limits["x1"]
    q = _effective_period(orbit, result.collisions, result.state.points)
    c = c_raw
    residual = float("nan")
    if result.status is Status.CONVERGED and c_raw is not INF:
        c = newton_polish(c_raw, orbit.preperiod, q)
        residual = orbit_residual(c, orbit.preperiod, q)
    return SpiderResult(
        theta=theta,
        orbit=orbit,
        preperiod=orbit.preperiod,
        period=orbit.period,
        effective_period=q,
        c_raw=c_raw,
        c=c,
        residual=residual,
        collisions=result.collisions,
        result=result,
    )
