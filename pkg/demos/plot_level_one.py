"""
Level one: indefinite sums that are eta times a theta constant
===============================================================

At level m = 1 the four functions g^{[1,p]}_k collapse to ordinary
modular forms. This script expands them, compares against eta * theta_{j,3},
and divides by eta^2 to land on the weight zero family h_j.
"""

from fractions import Fraction as F

from indefq import eta_q, g_star, render, theta_q
from indefq.mockforms import f_series, h_series

N = 4

# the first few terms of each g^{[1,p]}_k
for p, k in [(0, 0), (0, 1), (1, 0), (1, 1)]:
    g = g_star(1, 1, p, k, N)
    print(f"g^[1,{p}]_{k}:", g.leading())

# g^{[1,0]}_0 is -eta * theta_{1,3}
lhs = g_star(1, 1, 0, 0, 10)
rhs = -(eta_q(10) * theta_q(1, 3, False, 10))
print("g^[1,0]_0 == -eta theta_{1,3} to q^10:", lhs == rhs)

# %%
# f_i is a g divided by eta^2; h_j is theta_{j,3} / eta.  They agree.
for i in range(4):
    f, h = f_series(i, 6), h_series(i, 6)
    print(f"f_{i} == h_{i}:", f == h, " leading", f.leading())

print(render(h_series(3, F(3))))
