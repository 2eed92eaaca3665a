"""Quadrics through many lines of SX versus the Plücker quadrics (N = 5 and 8).

    python demos/envelope.py
"""

import time

from severi.experiments import run_experiment

for model in ("veronese", "segre"):
    t0 = time.perf_counter()
    r = run_experiment("torelli-envelope", model, seed=5)
    t = r.tallies
    print(r.summary_line())
    print(f"  envelope dim {list(t['envelope_dim'])[0]}, Plücker dim {list(t['plucker_dim'])[0]}, "
          f"strata {t['strata']}, {time.perf_counter() - t0:.1f}s")
