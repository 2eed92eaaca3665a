"""Build a line of every type on each secant cubic and report what we know about it.

    python demos/line_types.py
"""

import numpy as np

from severi import JordanSpace
from severi.fano import fano_tangent
from severi.lines import construct_line, feasible_types, tangency_locus
from severi.projgeo import line_X_intersection

for model in ("veronese", "segre", "grass", "e6"):
    J = JordanSpace(model, 65537)
    print(f"{model} (expected dim F(SX) = {2 * J.N - 6})")
    for kind in feasible_types(J):
        L = construct_line(J, kind, seed=3)
        meet = line_X_intersection(L).length
        tl = tangency_locus(L)
        t = fano_tangent(L, np.random.default_rng(0))
        print(f"  {kind.value:<9} |L ∩ X| = {meet}, tangency locus {tl.status:<8} tangent dim of F(SX) {t.dim}")
