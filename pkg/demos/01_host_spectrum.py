"""
Random regular hosts and their spectral ratio
=============================================

A random d'-regular graph is close to Ramanujan: its second eigenvalue
sits near 2 sqrt(d' - 1). We build a few hosts and compare.
"""

import numpy as np

from blockroute import alon_boppana_reference, generate_regular, spectral_ratio

# one host per degree, n = 2000 vertices
for d_prime in (50, 100, 200, 400):
    g = generate_regular(2000, d_prime, seed=0)
    s = spectral_ratio(g, d_prime)
    print(f"d'={d_prime:3d}  beta={s.beta:.3f}  ramanujan={alon_boppana_reference(d_prime):.3f}"
          f"  lambda_2={s.lambda_2:7.2f}  lambda_min={s.lambda_min:7.2f}")

# the Lanczos values agree with a dense solve on a small host
small = generate_regular(150, 8, seed=1)
w = np.linalg.eigvalsh(small.to_dense())
s = spectral_ratio(small, 8)
print("dense:", w[-1].round(6), w[-2].round(6), w[0].round(6))
print("lanczos:", round(s.lambda_max, 6), round(s.lambda_2, 6), round(s.lambda_min, 6))
