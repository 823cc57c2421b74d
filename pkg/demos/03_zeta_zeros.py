"""Zeros of zeta: sign-change scan versus Gram-block computation."""
import numpy as np

from lzeta.zeta_zeros import compute_first_zeros, count_N, rvm_estimate, scan_zeros

z = scan_zeros(0.0, 1000.0)
print("N(1000) by scan:", count_N(1000, z), " Riemann-von Mangoldt estimate:", round(rvm_estimate(1000), 2))
g = compute_first_zeros(len(z))
print("max |scan - Gram blocks| over", len(z), "zeros:", float(np.max(np.abs(z.ordinates - g.ordinates))))
print("first five:", z.ordinates[:5])
