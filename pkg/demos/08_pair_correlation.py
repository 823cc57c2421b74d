"""Cross pair correlation of zeros of zeta and of L(s, chi_4)."""
import numpy as np

from lzeta.characters import parse_character
from lzeta.lfunc import scan_L_zeros
from lzeta.paircorr import f_alpha, h0_proportion, sinc_kernel_sum
from lzeta.zeta_zeros import compute_first_zeros

zeros = compute_first_zeros(1000)
T = zeros.T
lz = scan_L_zeros(parse_character("4.1"), 0.0, T + 10)
for a, v in zip(np.arange(0, 3.01, 0.5), f_alpha(np.arange(0, 3.01, 0.5), T, zeros, lz)):
    print(f"F({a:.1f}, T) = {v:+.4f}")
print("sinc sum (delta = 1):", sinc_kernel_sum(1.0, T, zeros, lz))
print("h0 proportions:", [round(h0_proportion(e, T, zeros, lz), 4) for e in (0.25, 0.5, 1.0)])
