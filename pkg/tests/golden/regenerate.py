"""Rebuild orders.json from brute-force enumeration only.

Orders are recorded for every level whose quotient has at most 10^4
elements, with the generators computed straight from the recursion.  Two
closed forms extend the table: |adding_n| = 2^n and, for the Grigorchuk
group, |G_n| = 2^(5*2^(n-3) + 2) for n >= 3.
"""

import json
import sys
from pathlib import Path

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE.parent))

from oracles import commutator_subgroup, enumerate_group, level_perm  # noqa: E402
from selfsim import BUNDLED_SPECS, data_path, load_spec  # noqa: E402

LIMIT = 10**4


def main():
    out = {}
    for name in BUNDLED_SPECS:
        spec = load_spec(data_path(f"{name}.grp"))
        table = {}
        for n in range(1, 11):
            gens = [level_perm(spec, ((g, 1),), n) for g in spec.names]
            try:
                table[str(n)] = len(enumerate_group(gens, spec.d ** n, limit=LIMIT))
            except RuntimeError:
                break
        out[name] = table
    out["adding"].update({str(n): 2**n for n in range(1, 11)})
    out["grigorchuk"].update({str(n): 2 ** (5 * 2 ** (n - 3) + 2) for n in range(3, 11)})
    spec = load_spec(data_path("grigorchuk.grp"))
    gens = [level_perm(spec, ((g, 1),), 3) for g in spec.names]
    elems = enumerate_group(gens, 8)
    out["grigorchuk_abelianization"] = len(elems) // len(commutator_subgroup(elems, 8))
    (HERE / "orders.json").write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
