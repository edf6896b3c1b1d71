"""
Rigid stabilizers and two finite constructions
==============================================

Inside a level quotient we can form rigid vertex stabilizers, normal
closures and the diagonal subgroup used to rule out retracts in groups
with torsion.  Everything is an exact finite computation.
"""

import selfsim
from selfsim.analysis import branch_evidence, lemma_rist_closure_check, torsion_retract_witness
from selfsim.quotient import level_quotient

grigorchuk = selfsim.load_spec(selfsim.data_path("grigorchuk.grp"))
basilica = selfsim.load_spec(selfsim.data_path("basilica.grp"))

# index of the first rigid level stabilizer: constant for Grigorchuk,
# doubling every other level for Basilica
for n in range(2, 8):
    g = branch_evidence(grigorchuk, 1, n).levels[0]
    b = branch_evidence(basilica, 1, n).levels[0]
    print(n, g.index, b.index)

# derived subgroups of rigid stabilizers below vertices moved by a normal
# subgroup always lie in that subgroup
q = level_quotient(basilica, 5)
print(lemma_rist_closure_check(q, q.image("[a,b]")))

# the diagonal subgroup H for the involution a at the vertex 0
q = level_quotient(grigorchuk, 6)
w = torsion_retract_witness(q, q.named_gens["a"], 2)
print("|rist(0)| =", w.rist_order, " |H| =", w.H_order, " |<H, a>| =", w.A_order)
for a in w.assertions:
    print(f"  {a.name:28s} {a.passed}")
