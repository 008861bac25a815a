"""
T and S transformations of the g family
=======================================

The T move tau -> tau + 1 is checked exactly: every coefficient picks up
a root of unity, and the cyclotomic ring compares them with no rounding.
The S move tau -> -1/tau is checked numerically at a few seeded points.
"""

import numpy as np

from indefq.mockforms import g_S_matrix, g_T_phase
from indefq.transform import check_S_g, check_S_theta, check_T_g, sample_taus

for m in (1, 2):
    for p in range(2 * m + 1):
        for j in range(m + 1):
            rep = check_T_g(m, p, j, 6)
            print(f"m={m} p={p} j={j}  phase e^(2 pi i {g_T_phase(m, p, j)})  {rep.status}")

# %%
# The S matrix squares to the permutation p -> -p, which is consistent
# with the reflection symmetry g^{[m,p]} = g^{[m,2m+1-p]}.
S = g_S_matrix(2)
M2 = S.numeric() @ S.numeric()
for a, (p, j) in enumerate(S.index):
    b = int(np.argmax(np.abs(M2[a])))
    print(f"(p={p}, j={j}) -> {S.index[b]}  weight {M2[a, b].real:+.12f}")

taus = sample_taus(seed=0)
print(check_S_g(1, taus).line())
print(check_S_g(2, taus).line())
print(check_S_theta("h_family", 3, taus).line())
