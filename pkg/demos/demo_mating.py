#!/usr/bin/env python3
"""Mate two postcritically finite quadratics and watch the limit form.

The two filled Julia sets are glued back to back along their circles at
infinity; the glued sphere carries marked points (both critical orbits
plus three pins at 0, 1, infinity).  Each iteration pulls the whole
configuration back one generation, which transports it down a path of
sphere maps.  When the marked points stop moving the path has reached a
rational map, and points whose orbits collided tell us which external
rays landed together.

The classic example 1/6 with 1/3 converges to a map conjugate to
    f(z) = (z^2 + 2) / (z^2 - 1).

Some pairs cannot converge: angles from conjugate limbs tear the sphere
apart instead (the basilica self-mating 1/3 with 1/3 is the standard
example, run here with force=True so the collapse is observable).
"""

from fractions import Fraction

from slowmating import MatingSpec, Status, conjugate_limbs, mating_run

spec = MatingSpec(Fraction(1, 6), Fraction(1, 3))
mr = mating_run(spec)

print("mating 1/6 with 1/3")
print("  status     ", mr.status.value)
print("  iterations ", mr.result.iterations)
print("  c_p = %s   c_q = %s" % (mr.c_p, mr.c_q))

m = mr.map_n2().m
print("  limit map  (%.6g z^2 %+.6g) / (%.6g z^2 %+.6g)"
      % (m.a.real, m.b.real, m.c.real, m.d.real))

print("  marked-point limits:")
for pid, value in sorted(mr.limits_n2().items()):
    print("    %-7s %s" % (pid, value))

print("  collision classes:", sorted(sorted(c) for c in mr.collisions))
observed, expected = mr.ray_comparison()
print("  matches the angle-doubling landing oracle:", observed == expected)

# final stretch of the convergence trace: geometric decay to the stop
tail = mr.result.trace[-6:]
print("  last movements:", " ".join("%.2e" % t for t in tail))
print()

# a pair that can never converge
tp, tq = Fraction(1, 3), Fraction(1, 3)
print("mating 1/3 with 1/3 (conjugate limbs: %s)" % conjugate_limbs(tp, tq))
mr = mating_run(MatingSpec(tp, tq, force=True))
print("  status %s after %d iterations" % (mr.status.value,
                                           mr.result.iterations))
assert mr.status is Status.DEGENERATE
