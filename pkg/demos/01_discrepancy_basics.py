"""Star discrepancy of a few point sets, and how it scales for random points.

Run: python demos/01_discrepancy_basics.py
"""
import math

import numpy as np

from thinpoint import bounds, from_unsorted, max_gap, star_discrepancy, star_discrepancy_bruteforce

# equispaced midpoints are the best possible n-point set: discrepancy 1/(2n)
mid = from_unsorted([(2 * i - 1) / 8 for i in range(1, 5)])
print("midpoints of 4 cells:", star_discrepancy(mid))

# the closed form and the brute-force evaluation agree
ps = from_unsorted([0.1, 0.2, 0.3])
print("clustered set:", star_discrepancy(ps), star_discrepancy_bruteforce(ps))

# for n random points sqrt(n) * D_n follows the Kolmogorov law
rng = np.random.default_rng(0)
n = 100_000
scaled = [math.sqrt(n) * star_discrepancy(from_unsorted(rng.random(n))) for _ in range(200)]
print(f"median sqrt(n) D_n over 200 trials: {np.median(scaled):.4f}")
print(f"P(sup|B| >= 0.8276) = {bounds.kolmogorov_sf(0.8276):.4f}")

# the largest empty interval is about (ln n + 0.5772) / n
gaps = [max_gap(from_unsorted(rng.random(n))) for _ in range(50)]
print(f"mean max gap {np.mean(gaps):.3e}  vs  {(math.log(n) + 0.5772) / n:.3e}")
