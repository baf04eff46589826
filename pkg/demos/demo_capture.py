#!/usr/bin/env python3
"""Build a capture map: send the free critical value down an external ray.

A capture takes one postcritically finite polynomial z^2 + p and drags
the second critical value of a perturbed sphere map along the external
ray of angle theta until it lands on the Julia set.  The pullback
iteration then settles on a rational map.  For suitable angles the
result agrees with a mating, up to Mobius conjugacy - compared here
coefficient by coefficient.
"""

from fractions import Fraction

from slowmating import (
    CaptureSpec,
    MatingSpec,
    RunOptions,
    capture_run,
    mating_run,
    mobius_coefficient_distance,
    spider_run,
    trace_external_ray,
)

theta_base = Fraction(9, 56)
p = spider_run(theta_base).c
print("base polynomial: spider(%s) -> p = %s" % (theta_base, p))

# the ray itself, traced backward from large potential to its landing
ray = trace_external_ray(p, Fraction(3, 4))
print("ray 3/4 lands at %s after %d steps" % (ray.landing, len(ray.samples)))

cap = capture_run(CaptureSpec(p, Fraction(3, 4)),
                  options=RunOptions(max_iter=400))
print("capture status %s after %d iterations" % (cap.status.value,
                                                 cap.result.iterations))
f_cap = cap.map_n1()
print("capture map coefficients:", f_cap.m.coefficients())

mate = mating_run(MatingSpec(theta_base, Fraction(1, 4)),
                  options=RunOptions(max_iter=400))
f_mate = mate.map_n1()
print("mating 9/56 with 1/4 coefficients:", f_mate.m.coefficients())

gap = mobius_coefficient_distance(f_cap, f_mate)
print("normalized coefficient distance: %.3g" % gap)
