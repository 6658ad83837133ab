# The cubic z(1-z)^2 from the word (1, 1): cycles, orbits and its Julia set.
import sys

import numpy as np

from rileyslice import (
    PolynomialSystem,
    backward_orbit,
    escape_raster,
    hausdorff,
    iterate,
    periodic_points,
    word_polynomial,
)

p = word_polynomial((1, 1))
print("p =", p)

for n in (1, 2, 3):
    cycles = periodic_points(p, n, exact=True)
    print(f"period {n}: {len(cycles)} cycles")
    for c in cycles[:3]:
        print("   ", np.round(c.points, 6))

print("orbit of i:", np.round(iterate(p, 1j, 4).points, 12))
print("orbit of 1:", iterate(p, 1, 4).points)

res = int(sys.argv[1]) if len(sys.argv) > 1 else 256
raster = escape_raster(p, (-1, 3, -2, 2), res, res)
with open("cubic_julia.pgm", "wb") as fh:
    fh.write(raster.to_pgm())
print("wrote cubic_julia.pgm,", raster.escaping().mean().round(3), "of pixels escape")

# backward orbit from the repelling 2-cycle
start = (1 + 1j * np.sqrt(3)) / 2
cloud = backward_orbit(PolynomialSystem.from_words([(1, 1)]), start, 5000, seed=0)
d = hausdorff(cloud.points, raster.boundary_points())
print(f"Hausdorff distance cloud vs raster boundary: {d / raster.pixel_diagonal:.1f} pixel diagonals")
# the gap sits in the cusps at the parabolic point 0 and its preimage 1,
# which uniform inverse branches almost never reach
pts = raster.boundary_points()
tree_d = np.array([np.min(np.abs(cloud.points - q)) for q in pts])
print("worst boundary pixels:", np.round(pts[np.argsort(tree_d)[-3:]], 3))
