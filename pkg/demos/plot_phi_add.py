"""
The additive correction block
=============================

For z1 - z2 = 2a tau + 2b the correction is a finite theta block.
Two special parameter choices reduce to a single signed sum; this script
builds both forms and compares them.
"""

from fractions import Fraction as F

from indefq import phi_add, phi_add_special

half = F(1, 2)
for m in range(1, 5):
    a = phi_add(m, half, -half, 12)
    b = phi_add_special(m, "shifted", 12)
    print(f"m={m} shifted agrees:", a == b)

# the level one block, coefficient of theta_{k,1} itself
blk = phi_add(1, half, 0, 12)
print(blk.render())
print("theta_0 coefficient", blk.theta_coefficient(0).terms())
