"""How well the prime sum approximates log|L| at a few zeros of zeta."""
from lzeta.characters import parse_character
from lzeta.lfunc import eta_chi, scan_L_zeros
from lzeta.selberg import TruncationParams, log_L_approx
from lzeta.zeta_zeros import compute_first_zeros

chi3 = parse_character("3.1")
zeros = compute_first_zeros(20).ordinates
lz = scan_L_zeros(chi3, 0.0, zeros[-1] + 10)
params = TruncationParams.make(30.0)
for g in zeros[::4]:
    approx, b = log_L_approx(g, chi3, params, eta_chi(g, lz))
    print(f"gamma={g:10.4f}  Re P={approx:+.4f}  log|L|={approx + b.residual:+.4f}  bound={b.total_error_bound:.3g}")
