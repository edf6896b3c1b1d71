"""
Level quotients of the Basilica group
=====================================

The Basilica group is generated by a = (0 1)(b, 1) and b = (a, 1).  Its
image on the first n levels of the binary tree is a finite permutation
group.  We watch the orders grow and compare with the Grigorchuk group.
"""

import selfsim
from selfsim.quotient import abelianization_data, hdim_sequence, level_quotient

basilica = selfsim.load_spec(selfsim.data_path("basilica.grp"))
grigorchuk = selfsim.load_spec(selfsim.data_path("grigorchuk.grp"))
print(basilica)

# the generators act on level 2 as permutations of 00, 01, 10, 11
q = level_quotient(basilica, 2)
for name, g in q.named_gens.items():
    print(name, selfsim.permutations.format_cycles(g, q.point_word))

# orders, written as powers of two
for n in range(1, 8):
    b = level_quotient(basilica, n).order()
    g = level_quotient(grigorchuk, n).order()
    print(f"n={n}  log2|B_n|={b.bit_length() - 1:4d}  log2|G_n|={g.bit_length() - 1:4d}")

# abelianizations: Basilica keeps growing, Grigorchuk settles at 8
for n in range(2, 8):
    print(n, abelianization_data(level_quotient(basilica, n))[0],
          abelianization_data(level_quotient(grigorchuk, n))[0])

# normalized log-orders approach the Hausdorff dimension of the closure
for est in hdim_sequence(grigorchuk, 8):
    print(est.n, est.decimal)
