#!/usr/bin/env python3
"""Render a mating run as a PPM frame sequence.

Beta trees (iterated preimages of the repelling fixed point, tagged by
dyadic angles) are tracked on both sides of the gluing, so every frame
scatters a point cloud of both Julia sets: P side blue, Q side red,
marked orbit points white.  Each unit window is sampled fps times, plus
one closing frame.

Writes frames to ./frames_16_13/ as frame_00000.ppm, frame_00001.ppm...
Convert to video with e.g.
    ffmpeg -i frames_16_13/frame_%05d.ppm -pix_fmt yuv420p mating.mp4
"""

from fractions import Fraction

from slowmating import FrameSpec, MatingSpec, RunOptions, render_run

UNITS = 12  # path time to cover; one unit = one pullback window

spec = MatingSpec(Fraction(1, 6), Fraction(1, 3))
frame_spec = FrameSpec(
    outdir="frames_16_13",
    width=320,
    height=320,
    half_width=2.5,
    fps=4,
)

result, paths = render_run(
    spec, frame_spec, depth=6, options=RunOptions(max_iter=UNITS - 1))

# the budget is the excerpt length, so MaxIter just means the excerpt
# ended; let the run go further (more units) to watch it converge
print("status %s, wrote %d frames to %s"
      % (result.status.value, len(paths), frame_spec.outdir))

with open(paths[0], "rb") as fh:
    magic, dims, maxval = fh.readline(), fh.readline(), fh.readline()
print("first frame: %s %s" % (magic.strip().decode(),
                              dims.strip().decode()))
