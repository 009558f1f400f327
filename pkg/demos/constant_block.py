# %% [markdown]
# Five relu neurons that add a constant
#
# The block is zero left of c1, ramps linearly up to c on [c1, c2] and stays
# at c from there on. It is a handy exact fixture for relu networks.

# %%
import numpy as np

from swimnet.network import ConstantBlock, constant_block_eval

blk = ConstantBlock(c=1.5, c1=-1.0, c2=0.0, c3=1.0)
print("a1, a2, a3, d =", blk.a1, blk.a2, blk.a3, blk.d)
for coef, sign, brk in blk.neurons():
    print(f"  {coef:+.3f} * relu({sign:+.0f} * (x - {brk:+.1f}))")

# %%
x = np.linspace(-3, 3, 13)
for xi, v in zip(x, constant_block_eval(blk, x)):
    print(f"x={xi:+.1f}  block={v:+.4f}")
x = np.linspace(-3, 3, 1000)
print("max deviation from the piecewise form:", np.abs(constant_block_eval(blk, x) - blk.closed_form(x)).max())
