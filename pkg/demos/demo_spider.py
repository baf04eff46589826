#!/usr/bin/env python3
"""Land external angles on quadratic parameters with the spider iteration.

For each angle theta the algorithm starts from a flat configuration of
orbit legs and repeatedly pulls it back under z -> z^2 + c, reading off a
new c each round from the head of the configuration.  Periodic angles
land on centers of hyperbolic components; preperiodic angles land on
Misiurewicz points.
"""

from fractions import Fraction

from slowmating import angle_orbit, orbit_residual, spider_run

ANGLES = [
    Fraction(1, 3),    # basilica center, c = -1
    Fraction(3, 7),    # period 3 on the real axis (airplane)
    Fraction(1, 4),    # dendrite tip
    Fraction(1, 6),    # c = i
    Fraction(5, 12),   # satellite: two legs land together
    Fraction(9, 56),   # preperiod 3, period 3
]

for theta in ANGLES:
    orbit = angle_orbit(theta)
    res = spider_run(theta)
    print("theta = %-5s  preperiod %d period %d" % (theta, orbit.preperiod,
                                                    orbit.period))
    print("   c = %.15g %+.15gi" % (res.c.real, res.c.imag))
    print("   status %-10s iterations %s" % (
        res.status.value, res.result.iterations if res.result else 0))
    print("   orbit residual %.3g" % orbit_residual(
        res.c, res.preperiod, res.effective_period))
    merged = [cls for cls in res.collisions if len(cls) > 1]
    if merged:
        print("   collided legs:", sorted(sorted(c) for c in merged))
    print()
