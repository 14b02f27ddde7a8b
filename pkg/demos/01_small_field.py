"""A self-dual MDS code of length 10 over GF(49), step by step.

Run: python demos/01_small_field.py
"""

import numpy as np

from grssd.chartool import character_report
from grssd.evalsets import ConstructionParams, build, length_info
from grssd.grscodes import generator_matrix, solve_scaling, verify_mds

# The norm-fiber family over GF(7^2): one fiber of odd index plus zero.
params = ConstructionParams.create("thm2", r=7, l=6, s=0, l1=1, l2=0)
F = params.field()
print(F, "modulus (low first):", F.modulus)

S = build(params)
info = length_info(params)
print(f"evaluation set: {len(S)} points, code length {info.code_length}, extended={info.extended}")
print("points:", S.elements.tolist())

# Quadratic character of delta_S(e) = prod (e - e') over the set.
rep = character_report(S)
print("eta(delta_S) counts:", rep.counts(), "via", rep.method)

# An extended code needs eta(-delta) = +1 everywhere; then v^2 = -1/delta works.
choice = solve_scaling(S, rep, extended=True)
spec = choice.spec
print("scaling constant:", choice.constant)
print("v:", spec.scaling.tolist())

G = generator_matrix(spec)
print("generator matrix (5 x 10):")
print(G.rows)

# Self-orthogonality, rank and every 5 x 5 minor.
print("self-dual:", choice.report.self_dual, "rank via", choice.report.rank_method)
ok, detail = verify_mds(spec, G)
print("MDS:", ok, f"({detail}); minimum distance {spec.n - spec.k + 1}")
gram = np.array([[F.sum(F.mul(a, b)) for b in G.rows] for a in G.rows])
print("G G^T all zero:", not gram.any())
