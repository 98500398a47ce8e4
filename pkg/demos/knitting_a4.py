"""Knit the Auslander-Reiten quiver of the linearly oriented A4 path algebra.

Run with ``python3 demos/knitting_a4.py``.
"""
from meshcover.rep_engine import HereditaryAlgebra, almost_split, knit, positive_roots

# %% The algebra: 1 -> 2 -> 3 -> 4 over the rationals
alg = HereditaryAlgebra.linear_A(4)
comp = knit(alg)
print(f"{len(comp.names)} indecomposables, {len(positive_roots(alg))} positive roots")

# %% Every module with its dimension vector; tau is the translation
for name in comp.names:
    dv = comp.module_of[name].dimension_vector
    tau = comp.quiver.tau.get(name, "-")
    print(f"{name:8s} dimvec {dv}  tau -> {tau}")

# %% Almost split sequences come with a certificate
for x in comp.ass:
    (f, g), cert = almost_split(comp, x)
    mid = comp.quiver.pred[x]
    print(f"0 -> {comp.quiver.tau[x]} -> {' + '.join(mid)} -> {x} -> 0   ok={cert.ok}")

# %% The radical of the component is nilpotent; its index bounds path lengths
rad = comp.radical
print("nilpotency index:", rad.nilpotency_index)
for n in range(rad.nilpotency_index + 1):
    print(f"dim rad^{n}(P3, I3) =", rad.power("P3", "I3", n).dim)
