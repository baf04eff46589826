"""Exact combinatorics of angle doubling: orbits, wakes, limbs, landing
relations and ray-equivalence classes.

All angles are ``fractions.Fraction`` values taken mod 1; nothing in this
module uses floating point.  Tags for the two-polynomial constructions are
pairs ``(side, angle)`` with side ``"P"`` or ``"Q"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

HALF = Fraction(1, 2)


def norm_angle(theta):
    """theta mod 1 as an exact Fraction."""
    return Fraction(theta) % 1


def parse_angle(text):
    """Parse an exact angle string like '9/56' or '0'."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return norm_angle(Fraction(int(num), int(den)))
    return norm_angle(Fraction(int(text)))


def double(theta):
    return (2 * theta) % 1


def conjugate(theta):
    return (-theta) % 1


@dataclass(frozen=True)
class AngleOrbit:
    """Doubling orbit of a rational angle.

    ``orbit`` lists theta, 2 theta, ... of length preperiod + period;
    entries from index ``preperiod`` on are the cycle.
    """

    theta: Fraction
    preperiod: int
    period: int
    orbit: tuple

    @property
    def length(self):
        return self.preperiod + self.period

    @property
    def is_preperiodic(self):
        return self.preperiod > 0


def angle_orbit(theta):
    theta = norm_angle(theta)
    seen = {}
    orbit = []
    x = theta
    while x not in seen:
        seen[x] = len(orbit)
        orbit.append(x)
        x = double(x)
    first = seen[x]
    return AngleOrbit(
        theta=theta,
        preperiod=first,
        period=len(orbit) - first,
        orbit=tuple(orbit),
    )


def wake(rotation):
    """Boundary angle pair (lo, hi) of the p/q wake.

    Among the doubling cycles on denominators dividing 2^q - 1 there is
    exactly one whose circular order is rotated by p positions per step;
    the wake boundary is the shortest complementary arc of that cycle.
    """
    rotation = Fraction(rotation)
    p, q = rotation.numerator, rotation.denominator
    if not 0 < rotation < 1 or q < 2:
        raise ValueError("rotation number must lie strictly between 0 and 1")
    mod = 2**q - 1
    seen = set()
    for k in range(1, mod):
        if k in seen:
            continue
        cycle = []
        j = k
        while True:
            cycle.append(j)
            j = (2 * j) % mod
            if j == k:
                break
        seen.update(cycle)
        if len(cycle) != q:
            continue
        order = sorted(cycle)
        position = {value: i for i, value in enumerate(order)}
        shifts = {(position[(2 * v) % mod] - position[v]) % q for v in cycle}
        if len(shifts) != 1 or shifts.pop() != p:
            continue
        gaps = []
        for i in range(q - 1):
            gaps.append((order[i + 1] - order[i], order[i], order[i + 1]))
        gaps.append((mod + order[0] - order[-1], order[-1], order[0]))
        gap, lo, hi = min(gaps)
        if hi < lo:
            raise AssertionError("shortest wake arc crossed angle 0")
        return (Fraction(lo, mod), Fraction(hi, mod))
    raise ValueError("no rotation cycle with number %s" % rotation)


def limb_of(theta, q_max=None):
    """Rotation number p/q of the main limb whose wake contains theta.

    The search is bounded by q <= preperiod + period of theta (a limb
    containing a rational angle cannot have larger denominator); returns
    None when no wake of that range contains theta.  Boundaries count as
    inside.
    """
    theta = norm_angle(theta)
    if theta == 0:
        return None
    if q_max is None:
        q_max = angle_orbit(theta).length
    for q in range(2, q_max + 1):
        for p in range(1, q):
            if Fraction(p, q).denominator != q:
                continue
            lo, hi = wake(Fraction(p, q))
            if lo <= theta <= hi:
                return Fraction(p, q)
    return None


def conjugate_limbs(theta_p, theta_q):
    """True when the two angles come from conjugate limbs: theta_p lies in
    the p/q wake and -theta_q lies in the same wake."""
    limb = limb_of(theta_p)
    if limb is None:
        return False
    lo, hi = wake(limb)
    mirrored = conjugate(norm_angle(theta_q))
    return lo <= mirrored <= hi


def _in_open_arc(x, a, b):
    """x strictly inside the counterclockwise open arc from a to b."""
    span = (b - a) % 1
    offset = (x - a) % 1
    return 0 < offset < span


def lands_together(a, b, theta_c):
    """Do the external rays of angles a and b land at the same point of the
    Julia set of the postcritically finite parameter with critical value
    angle theta_c?

    The unordered pair is iterated under doubling.  A pair strictly
    separated by the critical leaf {theta_c/2, (theta_c+1)/2} lands apart;
    a pair that revisits a previous state, or becomes equal, lands
    together.  Leaf-endpoint hits are the delicate cases.  The full leaf
    pair lands together exactly when theta_c is preperiodic (both endpoints
    then land at the critical point).  A single endpoint hit continues
    through the critical value angle; for periodic theta_c the partner
    must sit on the admissible side of the leaf first: the endpoint lying
    on the ray cycle of theta_c lands where the cycle does, so it admits
    partners on the side containing theta_c, while the other endpoint
    lands at the opposite preimage and admits the complementary side.
    For preperiodic theta_c both endpoints land at the critical point,
    whose rays may sit on either side, so no side check applies.
    """
    a = norm_angle(a)
    b = norm_angle(b)
    theta_c = norm_angle(theta_c)
    if a == b:
        return True
    u = theta_c / 2
    v = u + HALF
    orbit = angle_orbit(theta_c)
    preperiodic = orbit.is_preperiodic
    cycle_endpoint = None
    if not preperiodic and theta_c != 0:
        cycle_endpoint = u if u in orbit.orbit else v
    seen = set()
    while True:
        if a == b:
            return True
        pair = (a, b) if a <= b else (b, a)
        if pair in seen:
            return True
        seen.add(pair)
        a_on = a == u or a == v
        b_on = b == u or b == v
        if a_on and b_on:
            return preperiodic
        if a_on or b_on:
            x, y = (a, b) if a_on else (b, a)
            if not preperiodic:
                if theta_c == 0:
                    return False
                value_side = _in_open_arc(theta_c, u, v)
                y_side = _in_open_arc(y, u, v)
                admissible = (
                    y_side == value_side
                    if x == cycle_endpoint
                    else y_side != value_side
                )
                if not admissible:
                    return False
            a, b = theta_c, double(y)
            continue
        u_inside = _in_open_arc(u, a, b)
        v_inside = _in_open_arc(v, a, b)
        if u_inside != v_inside:
            return False
        a, b = double(a), double(b)


class CyclicClass(Exception):
    """A ray-equivalence class closes a cycle (conjugate limbs / removable
    obstruction situation); carries the offending tag component."""

    def __init__(self, component):
        tags = sorted(component, key=lambda t: (t[0], t[1]))
        super().__init__("cyclic ray class through %s" % (tags,))
        self.component = frozenset(component)


@dataclass(frozen=True)
class RayClassPartition:
    """Partition of tagged angles (side, angle) into ray classes."""

    classes: tuple

    def class_of(self, tag):
        side, angle = tag
        tag = (side, norm_angle(angle))
        for cls in self.classes:
            if tag in cls:
                return cls
        raise KeyError(tag)

    def restricted(self, tags):
        """Partition induced on a subset of tags, dropping empty classes."""
        tags = {(side, norm_angle(angle)) for side, angle in tags}
        out = []
        for cls in self.classes:
            cut = cls & tags
            if cut:
                out.append(frozenset(cut))
        return tuple(sorted(out, key=lambda c: sorted(c)))


def default_ray_tags(theta_p, theta_q):
    """Marked tags for a mating: both postcritical orbits, the angle 0
    (beta) on both sides, and for preperiodic sides the two critical-point
    angles theta_c/2 and (theta_c+1)/2."""
    tags = set()
    for side, theta in (("P", norm_angle(theta_p)), ("Q", norm_angle(theta_q))):
        orbit = angle_orbit(theta)
        for angle in orbit.orbit:
            tags.add((side, angle))
        tags.add((side, Fraction(0)))
        if orbit.is_preperiodic:
            tags.add((side, theta / 2))
            tags.add((side, theta / 2 + HALF))
    return tags


class _UnionFind:
    def __init__(self, items):
        self.parent = {item: item for item in items}

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def groups(self):
        out = {}
        for item in self.parent:
            out.setdefault(self.find(item), set()).add(item)
        return list(out.values())


def ray_classes(theta_p, theta_q, angles=None):
    """Ray-equivalence classes of tagged angles for the mating of the
    parameters with critical value angles theta_p, theta_q.

    Generated by the conjugate gluing (P, t) ~ (Q, -t) together with
    same-side landing (``lands_together`` relative to each side's critical
    value angle); the tag set is closed under conjugation first.  Raises
    CyclicClass when a class contains a closed ray cycle, detected on the
    bipartite graph of landing clusters joined by conjugate pairs.
    """
    theta_p = norm_angle(theta_p)
    theta_q = norm_angle(theta_q)
    if angles is None:
        tags = default_ray_tags(theta_p, theta_q)
    else:
        tags = {(side, norm_angle(angle)) for side, angle in angles}
    closed = set(tags)
    for side, angle in tags:
        other = "Q" if side == "P" else "P"
        closed.add((other, conjugate(angle)))
    tags = closed

    theta_of_side = {"P": theta_p, "Q": theta_q}
    landing = _UnionFind(tags)
    by_side = {"P": [], "Q": []}
    for tag in tags:
        by_side[tag[0]].append(tag)
    for side, members in by_side.items():
        theta_c = theta_of_side[side]
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if lands_together(members[i][1], members[j][1], theta_c):
                    landing.union(members[i], members[j])

    # Bipartite cycle check: vertices are landing clusters, one edge per
    # conjugate pair of angles.
    cluster = {tag: landing.find(tag) for tag in tags}
    adjacency = {}
    edge_count = {}
    for tag in by_side["P"]:
        partner = ("Q", conjugate(tag[1]))
        a, b = cluster[tag], cluster[partner]
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)
        key = (a, b) if a <= b else (b, a)
        edge_count[key] = edge_count.get(key, 0) + 1
    for vertex in cluster.values():
        adjacency.setdefault(vertex, set())
    visited = set()
    for start in adjacency:
        if start in visited:
            continue
        component = set()
        stack = [start]
        while stack:
            node = stack.pop()
            if node in component:
                continue
            component.add(node)
            stack.extend(adjacency[node])
        visited |= component
        edges = sum(
            count
            for (a, b), count in edge_count.items()
            if a in component
        )
        if edges > len(component) - 1:
            offending = {t for t in tags if cluster[t] in component}
            raise CyclicClass(offending)

    merged = _UnionFind(tags)
    for tag, root in cluster.items():
        merged.union(tag, root)
    for tag in by_side["P"]:
        merged.union(tag, ("Q", conjugate(tag[1])))
    classes = tuple(
        sorted(
            (frozenset(group) for group in merged.groups()),
            key=lambda c: sorted(c),
        )
    )
    return RayClassPartition(classes=classes)
