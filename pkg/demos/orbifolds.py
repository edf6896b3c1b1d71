"""
Orbifolds of quadratic portraits
================================

A post-critical portrait records where the critical point of z^2 + c goes.
From it we get the orbifold Euler characteristic, the recursion of the
iterated monodromy group and a prediction for local retractions.
"""

import selfsim
from selfsim.portrait import critical_orbit_type, quadratic_corpus

for name in selfsim.BUNDLED_PORTRAITS:
    p = selfsim.load_portrait(selfsim.data_path(f"{name}.json"))
    sig = selfsim.orbifold(p)
    print(f"{name:10s} chi={str(sig.chi):5s} {sig.cls:10s} {critical_orbit_type(p)}")
    print(selfsim.print_spec(selfsim.build_img(p)))

# only two combinatorial classes are euclidean
for p in quadratic_corpus(6):
    verdict = selfsim.predict_lr(p)
    if verdict.prediction == "HasLR":
        print(verdict.orbit_type, verdict.notes)

# critically exceptional sets: z^2 keeps its fixed point, -1 and 1 survive
# for the Chebyshev map, nothing finite survives for the Basilica map
for name in ("power", "chebyshev", "basilica"):
    p = selfsim.load_portrait(selfsim.data_path(f"{name}.json"))
    print(name, sorted(selfsim.maximal_exceptional_set(p).maximal))
