"""Walk through the secant geometry of one rank-two point in each model.

    python demos/contact_loci.py
"""

import numpy as np

from severi import JordanSpace
from severi.projgeo import join
from severi.sampler import random_rank2_vector, type2_configuration
from severi.secant import contact_locus, fibre_type, second_fibre_criterion, secant_intersection

rng = np.random.default_rng(1)

for model in ("veronese", "segre", "grass", "e6"):
    J = JordanSpace(model, 31991)
    fp = contact_locus(J, random_rank2_vector(J, rng))
    print(f"{model}: n = {J.n}, P^{J.N}")
    print(f"  contact locus Σ_p is a P^{fp.Sigma.dim}, Q_p a smooth quadric of dimension {fp.Sigma.dim - 1}")
    x = fp.random_Q_point(rng)
    print(f"  a point of Q_p has rank {J.rank_of(x)}; T̂_x Q_p has dimension {fp.tangent_space_Q(x).dim}")
    if J.n < 4:
        continue
    p, z = type2_configuration(J, rng)
    fp = contact_locus(J, p)
    u = join(z, fp.Sigma).random_point(rng)
    res = fibre_type(fp, u, rng)
    print(f"  a type-{res.kind} fibre: Π = P^{res.Pi.dim}, Λ = P^{res.Lambda.dim}")
    print(f"  join(u, Σ_p) in SX / meets X off Q_p: {second_fibre_criterion(fp, u)}")
    print(f"  Σ_p ∩ Σ_u = P^{secant_intersection(fp, contact_locus(J, u)).dim}")
