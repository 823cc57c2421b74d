"""How often L(rho, chi_3) + L(rho, chi_4) is close to 0 at zeros of zeta."""
from lzeta.characters import parse_character
from lzeta.stats import avalue_proportion, windows_by_index
from lzeta.zeta_zeros import compute_first_zeros

chis = [parse_character("3.1"), parse_character("4.1")]
zeros = compute_first_zeros(4000)
wins = windows_by_index(zeros, [(1, 2000), (2001, 4000)])
rep = avalue_proportion(zeros, [1, 1], chis, 0, (0.3, 0.1, 0.03), wins)
for (lo, hi), row in zip(rep.windows, rep.proportions):
    print(f"({lo:8.2f}, {hi:8.2f}]  " + "  ".join(f"delta={d}: {p:.4f}" for d, p in zip(rep.delta_grid, row)))
print("dominance:", rep.dominance)
