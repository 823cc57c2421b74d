"""The random Euler-product model: exact moments against Monte Carlo."""
import math

from lzeta.characters import parse_character
from lzeta.model import ModelConfig, char_fn_model, exact_moment, mc_char_fn, mc_moment, psi_L

cfg = ModelConfig.from_X2([1.0, 1.0], [parse_character("3.1"), parse_character("4.1")], 1000, seed=1)
print(cfg.describe())
print("Psi_L / 2 =", psi_L(cfg) / 2)
for k in (2, 4, 6):
    mc, se = mc_moment(k, cfg, 200_000)
    print(f"k={k}: exact {exact_moment(k, cfg):.5f}  MC {mc:.5f} +- {se:.5f}")
s = math.sqrt(psi_L(cfg) / 2)
for w in (0.5, 1.0, 2.0):
    mc, se = mc_char_fn(w / s, cfg, 200_000)
    print(f"w={w}: model {char_fn_model(w / s, cfg):.4f}  MC {mc:.4f} +- {se:.4f}  gaussian {math.exp(-w * w / 2):.4f}")
