"""Captures: push the second critical value from infinity into the
filled Julia set along an external ray, then pull the path back.

The base polynomial z^2 + p is conjugated so its beta fixed point sits
at 1, putting the map in the same f(1) = 1 frame the mating pipeline
uses: F(w) = beta w^2 + p/beta with critical points 0 and INF.  The
initial window keeps every marked point still while the image of INF
travels from INF down the traced ray to the landing point z1.  When the
run converges, the final map realizes the mating of p with the
polynomial of the reflected angle, in the identical normalization, so
coefficients can be compared directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .angles import angle_orbit, norm_angle
from .engine import (
    DEFAULT_SAMPLES,
    AnchorRule,
    MarkedPoint,
    PathState,
    run_pullback,
)
from .quadratic import beta_fixed, polish_preperiodic, preperiodic_residual
from .sphere import INF, sph_dist

START_POTENTIAL = 2.0
DEFAULT_DEPTH = 40
STALL_STEP = 1e-14
MIN_CLEARANCE = 1e-4
MATCH_TOL = 1e-8
MAX_CHAIN = 64


class RayTraceFailure(ArithmeticError):
    """Backward ray iteration stopped making progress far from landing."""


class PathTooClose(ValueError):
    """The traced ray passes within MIN_CLEARANCE of another marked point."""


@dataclass(frozen=True)
class RayPolyline:
    """An external ray of z^2 + c sampled from potential START_POTENTIAL
    down to the Newton-polished landing point (appended at potential 0)."""

    c: complex
    theta: Fraction
    potentials: tuple
    samples: tuple

    @property
    def landing(self):
        return self.samples[-1]

    def validate(self):
        if len(self.potentials) != len(self.samples):
            raise ValueError("potential/sample length mismatch")
        for a, b in zip(self.potentials, self.potentials[1:]):
            if not b < a:
                raise ValueError("potentials must strictly decrease")
        orb = angle_orbit(self.theta)
        if preperiodic_residual(self.c, self.landing, orb.preperiod,
                                orb.period) > 1e-6:
            raise ValueError("landing estimate is not preperiodic")
        return self


def trace_ray_set(c, angles, depth=DEFAULT_DEPTH):
    """Trace rays for a finite angle set closed under doubling.

    Level 0 seeds come from the truncated Boettcher series W + c/(2W) at
    potential START_POTENTIAL; each subsequent level pulls the ray of the
    doubled angle back one square root, choosing the branch nearest the
    same ray's previous level.  Returns {angle: RayPolyline}.
    """
    c = complex(c)
    angles = sorted({norm_angle(a) for a in angles})
    succ = {a: norm_angle(2 * a) for a in angles}
    if any(s not in succ for s in succ.values()):
        raise ValueError("angle set is not closed under doubling")
    pots = [START_POTENTIAL / 2.0**level for level in range(depth + 1)]
    rows = {}
    for a in angles:
        w = cmath.exp(complex(START_POTENTIAL, 2 * math.pi * float(a)))
        rows[a] = [w + c / (2 * w)]
    for level in range(1, depth + 1):
        for a in angles:
            prev = rows[a][level - 1]
            root = cmath.sqrt(rows[succ[a]][level - 1] - c)
            if abs(root - prev) > abs(root + prev):
                root = -root
            if abs(root - prev) < STALL_STEP and pots[level] > 1e-6:
                raise RayTraceFailure(
                    "ray %s stalled at potential %.3g" % (a, pots[level])
                )
            rows[a].append(root)
    out = {}
    for a in angles:
        sub = angle_orbit(a)
        landing = polish_preperiodic(c, rows[a][-1], sub.preperiod, sub.period)
        out[a] = RayPolyline(
            c=c,
            theta=a,
            potentials=tuple(pots) + (0.0,),
            samples=tuple(rows[a]) + (landing,),
        ).validate()
    return out


def trace_ray_family(c, theta, depth=DEFAULT_DEPTH):
    """Trace the whole doubling orbit of ``theta`` at once."""
    return trace_ray_set(c, angle_orbit(theta).orbit, depth)


def trace_external_ray(c, theta, depth=DEFAULT_DEPTH):
    return trace_ray_family(c, theta, depth)[norm_angle(theta)]


@dataclass(frozen=True)
class CaptureSpec:
    p: complex
    theta: Fraction
    scale: complex = None
    depth: int = DEFAULT_DEPTH
    nsamples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        object.__setattr__(self, "theta", norm_angle(self.theta))
        object.__setattr__(self, "p", complex(self.p))
        if self.theta == 0:
            raise ValueError("capture angle must be nonzero")
        if self.scale is not None:
            # the frame demands F(1) = 1, i.e. the scale is a fixed point
            if abs(self.scale**2 - self.scale + self.p) > 1e-6:
                raise ValueError("scale must be a fixed point of z^2 + p")


def _interp(a, b, frac):
    """Point a fraction of the way from a to b, switching to the
    reciprocal chart when the segment lives near infinity."""
    if a is INF or b is INF or (abs(a) > 2 and abs(b) > 2):
        ra = 0j if a is INF else 1 / a
        rb = 0j if b is INF else 1 / b
        w = ra + frac * (rb - ra)
        return INF if w == 0 else 1 / w
    return a + frac * (b - a)


def _resample(pts, nsamples):
    """Respace a polyline to uniform spherical arclength; endpoints are
    preserved exactly."""
    lengths = [0.0]
    for a, b in zip(pts, pts[1:]):
        lengths.append(lengths[-1] + sph_dist(a, b))
    total = lengths[-1]
    out = [pts[0]]
    seg = 0
    for j in range(1, nsamples):
        s = total * j / nsamples
        while seg + 2 < len(lengths) and lengths[seg + 1] < s:
            seg += 1
        width = lengths[seg + 1] - lengths[seg]
        frac = 0.0 if width == 0 else (s - lengths[seg]) / width
        out.append(_interp(pts[seg], pts[seg + 1], frac))
    out.append(pts[-1])
    return out


def _append_chain(values, pids, prefix, start, step, tol=MATCH_TOL):
    """Extend the marked list by the forward orbit of start until it runs
    into an already-marked value.  values/pids are parallel lists that get
    mutated; returns (new pids, their target pids)."""
    chain_pids = []
    targets = []
    current = start
    for k in range(MAX_CHAIN):
        pid = "%s%d" % (prefix, k + 1)
        values.append(current)
        pids.append(pid)
        chain_pids.append(pid)
        nxt = step(current)
        hit = None
        for v, other in zip(values, pids):
            if v is not INF and sph_dist(nxt, v) < tol:
                hit = other
                break
        if hit is not None:
            targets.append(hit)
            return chain_pids, targets
        targets.append("%s%d" % (prefix, k + 2))
        current = nxt
    raise RuntimeError("marked orbit of %r did not close" % start)


def capture_init(spec):
    """Unit window [0, 1] for the capture pullback."""
    return _prepare(spec)[0]


def _prepare(spec):
    p = spec.p
    beta = spec.scale if spec.scale is not None else beta_fixed(p)
    family = trace_ray_family(p, spec.theta, spec.depth)
    ray = family[spec.theta]

    # all marked values live in the beta -> 1 frame
    values = [0j, INF, 1 + 0j]
    pids = ["pin0", "pininf", "pin1"]

    def step(w):
        return beta * w * w + p / beta

    x_pids, x_targets = _append_chain(values, pids, "x", p / beta, step)

    z1 = ray.landing / beta
    for v, other in zip(values, pids):
        if v is not INF and sph_dist(z1, v) < MATCH_TOL:
            raise ValueError(
                "capture point %s coincides with marked point %s" % (z1, other)
            )
    z_pids, z_targets = _append_chain(values, pids, "z", z1, step)

    # traced ray must clear every other marked point
    for v, other in zip(values, pids):
        if other == "z1" or v is INF:
            continue
        gap = min(sph_dist(s / beta, v) for s in ray.samples)
        if gap < MIN_CLEARANCE:
            raise PathTooClose(
                "ray passes within %.2g of %s" % (gap, other)
            )

    index = {pid: i for i, pid in enumerate(pids)}
    target_of = {"pin0": x_pids[0] if x_pids else "pin0",
                 "pininf": "z1", "pin1": "pin1"}
    for pid, tgt in zip(x_pids, x_targets):
        target_of[pid] = tgt
    for pid, tgt in zip(z_pids, z_targets):
        target_of[pid] = tgt

    pins = {"pin0": 0j, "pininf": INF, "pin1": 1 + 0j}
    points = tuple(
        MarkedPoint(
            pid=pid,
            target=index[target_of[pid]],
            pin=pins.get(pid),
            side="P" if pid in x_pids or pid in pins else "Q",
        )
        for pid in pids
    )

    nsm = spec.nsamples
    head = [INF]
    for g in (64.0, 32.0, 16.0, 8.0, 4.0):
        w = cmath.exp(complex(g, 2 * math.pi * float(spec.theta)))
        head.append((w + p / (2 * w)) / beta)
    head.extend(s / beta for s in ray.samples)
    head_row = _resample(head, nsm)

    samples = []
    for pid, v in zip(pids, values):
        if pid == "z1":
            samples.append(head_row)
        else:
            samples.append([v] * (nsm + 1))

    state = PathState(
        n=0,
        nsamples=nsm,
        degree=2,
        points=points,
        samples=samples,
        anchor=AnchorRule(
            kind="rational",
            alpha=index["z1"],
            beta=index[x_pids[0]] if x_pids else index["pin0"],
        ),
    )
    return state.validate(), beta, ray, tuple(values[3 + len(x_pids):])


@dataclass
class CaptureResult:
    spec: CaptureSpec
    beta: complex
    ray: RayPolyline
    z_orbit: tuple
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

    def map_n1(self):
        return self.result.final_map


def capture_run(spec, options=None, observer=None):
    state, beta, ray, z_orbit = _prepare(spec)
    result = run_pullback(state, options=options, observer=observer)
    return CaptureResult(
        spec=spec, beta=beta, ray=ray, z_orbit=z_orbit, result=result
    )


def mobius_coefficient_distance(f, g):
    """Scale-invariant max gap between the coefficients of two Mobius
    maps (or the Mobius parts of two bicritical maps)."""
    mf = getattr(f, "m", f)
    mg = getattr(g, "m", g)
    vf = (mf.a, mf.b, mf.c, mf.d)
    vg = (mg.a, mg.b, mg.c, mg.d)
    k = max(range(4), key=lambda i: abs(vf[i]))
    if vg[k] == 0:
        return float("inf")
    return max(abs(a / vf[k] - b / vg[k]) for a, b in zip(vf, vg))
