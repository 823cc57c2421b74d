"""Enumerate characters mod 12, their conductors, parities and Gauss sums."""
import math

from lzeta.characters import conductor, enumerate_characters, gauss_sum, is_primitive, parity

for chi in enumerate_characters(12):
    line = f"{chi.name:6s} conductor={conductor(chi):2d} parity={parity(chi).a} real={chi.is_real}"
    if is_primitive(chi):
        tau = gauss_sum(chi)
        line += f" |tau|={abs(tau):.12f} (sqrt 12 = {math.sqrt(12):.12f})"
    print(line)
