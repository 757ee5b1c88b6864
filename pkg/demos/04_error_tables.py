# ---
# jupyter:
#   jupytext:
#     text_representation:
#       format_name: percent
# ---

# %% [markdown]
# # Error tables for the four benchmark problems
#
# Each row doubles ``M``; the nonlinear tables also add one Picard sweep per
# row.  The last column is the observed order ``log2(e_M / e_2M)``.

# %%
from ultraparabolic.diagnostics import convergence_study
from ultraparabolic.problems import REFERENCE_TABLES, get_example, run_example

# %%
for ex_id in (1, 2, 3, 4):
    ex = get_example(ex_id)
    table = REFERENCE_TABLES[ex_id]
    rows = convergence_study(lambda M, q: run_example(ex_id, M, q=q).error,
                             [r[1] for r in table], [r[0] for r in table])
    print(f"example {ex_id}")
    for row, (_, _, l2_ref, _) in zip(rows, table):
        order = "" if row.order_l2 is None else f"{row.order_l2:.3f}"
        print(f"  q={row.q!s:4} M={row.M:4d}  l2={row.l2:.6E}  "
              f"published={l2_ref:.6E}  order={order}")

# %% [markdown]
# The same numbers as CSV (``ultraparabolic --tables 1,2,3,4 --out DIR`` from
# the shell):

# %%
import io
import tempfile

from ultraparabolic.cli import reproduce_tables

with tempfile.TemporaryDirectory() as tmp:
    path, = reproduce_tables([1], tmp, stdout=io.StringIO())
    print(path.read_text())
