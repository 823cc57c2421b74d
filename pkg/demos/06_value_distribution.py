"""Distribution of log|L(rho, chi_3)| over the first 5000 zeros of zeta."""
import numpy as np

from lzeta.characters import parse_character
from lzeta.stats import build_sample, char_fn_empirical, ks_normal, proportion_in_interval, standardize
from lzeta.zeta_zeros import compute_first_zeros

chi3 = parse_character("3.1")
zeros = compute_first_zeros(5000)
for ev in ("true_L", "selberg_poly"):
    s = standardize(build_sample(zeros, [1], [chi3], ev, X=100.0), [1])
    print(f"{ev:13s} n={len(s)} mean={np.mean(s.values):+.3f} var={np.var(s.values):.3f} "
          f"KS={ks_normal(s):.4f} P(|Z|<=1.96)={proportion_in_interval(s, -1.96, 1.96):.3f} "
          f"phi(1)={char_fn_empirical(s, 1.0).real:.3f}")
