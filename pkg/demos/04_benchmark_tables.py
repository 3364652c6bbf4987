"""
Desk-scale benchmark
====================

A reduced replication grid: Model I at n=400 with normal and t(3)
predictors, all six methods, 100 replications each. Every method sees the
same data sets. Roughly ten seconds with a few cores.
"""

# %%
import math
import os

from cpdr import ModelSpec, run_benchmark

specs = [ModelSpec("I", n=400, df=math.inf), ModelSpec("I", n=400, df=3)]
methods = ["cp_dr", "dr", "cp_sir", "sir", "cp_save", "save"]
table = run_benchmark(specs, methods, reps=100, base_seed=1, n_jobs=os.cpu_count())
print(table.summary())

# %%
# Same output as CSV, the format written by ``cpdr simulate``.
print(table.delta_csv())
