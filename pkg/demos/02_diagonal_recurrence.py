# ---
# jupyter:
#   jupytext:
#     text_representation:
#       format_name: percent
# ---

# %% [markdown]
# # Walking back along a characteristic
#
# Every lattice point ``(k, m)`` sits on a diagonal that reaches the initial
# data after ``p = min(k, m)`` steps.  The discrete solution of one mode is a
# weighted sum of the source along that walk plus the attenuated foot value.

# %%
import math

import numpy as np

from ultraparabolic import characteristic_trace, roll_back_diagonal
from ultraparabolic.linear import attenuation, characteristic_solve

# %%
trace = characteristic_trace(5, 2)
print(trace.p, trace.foot)        # 2 steps back, landing on t-index 3 of the s = 0 edge
print(trace.visited)

# %% [markdown]
# Without decay the sum is a plain running total; ``roll_back_diagonal`` works in
# any number of time axes.

# %%
rng = np.random.default_rng(0)
F = rng.normal(size=(6, 6, 6))
print(roll_back_diagonal(F, (5, 4, 3), 3, 0.1, 1.0))
print(1.0 + 0.1 * (F[3, 2, 1] + F[4, 3, 2] + F[5, 4, 3]))

# %% [markdown]
# With decay, every weight is a ratio of integrating factors:
# ``exp(-lambda Delta / 2) <= 1``.  Nothing overflows even when ``lambda T``
# is in the thousands.

# %%
print(attenuation(40000.0, np.array([0.0, 1e-3, 1.0])))

# %%
lam, omega, M = 9.0, 0.02, 4
sources = rng.normal(size=(M, M))
alpha = rng.normal(size=M + 1)
beta = rng.normal(size=M + 1)
beta[0] = alpha[0]
plane = characteristic_solve(lam, omega, sources, alpha, beta)

# Recompute (3, 3) by hand: three source terms and the corner value.
by_hand = sum(omega * math.exp(-lam * omega * (3 - l)) * sources[l - 1, l - 1]
              for l in (1, 2, 3)) + math.exp(-3 * lam * omega) * alpha[0]
print(plane[3, 3], by_hand)
