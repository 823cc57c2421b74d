"""L-values, the functional equation and the first zeros of L(s, chi_4)."""
from lzeta.characters import parse_character
from lzeta.lfunc import L_value, fe_residual, root_number, scan_L_zeros

chi4 = parse_character("4.1")
print("L(2, chi_4) (Catalan)     =", L_value(2.0, chi4).real)
print("L(1/2, chi_4)             =", L_value(0.5, chi4).real)
print("root number               =", root_number(chi4).epsilon)
print("FE residual at 0.3 + 17i  =", fe_residual(0.3 + 17j, chi4))
zl = scan_L_zeros(chi4, 0.0, 30.0)
print("zeros of L(s, chi_4) below 30:", [round(g, 6) for g in zl.ordinates.tolist()])
