"""The derivation ledger: from catalogued graphs to headline bounds.

Facts (graph exists / Ramsey lower bound / growth rate) live in an
append-only ledger.  Derivation rules close the fact set, and every derived
fact keeps pointers to its parents, so any bound can be replayed.
"""

from ramseykit import Ledger, load_seed_pack
from ramseykit.ledger import GAMMA, GRAPH, RAMSEY

ledger = Ledger()
load_seed_pack(ledger)
print(f"seeded {len(ledger.facts)} catalogued facts")

# Close under: graph -> bound (r7), double quadrupling (r8), the degree
# neighbourhood step (r9), and the growth-rate rules (r10, r11).
new = ledger.derive_closure(rules=["r7", "r8", "r9", "r10", "r11"], depth=3)
print(f"derived {len(new)} new facts")

for params in ((9, 9, 9), (8, 8, 8), (3, 8, 8)):
    fact = ledger.best_bound(RAMSEY, params)
    print(f"R{params} >= {fact.value}")
    for f in ledger.provenance_chain(fact):
        kind = f.certificate["type"]
        rule = f.certificate.get("rule", "")
        print(f"  fact {f.fact_id}: {f.kind} {f.parameters} = {f.value} "
              f"({kind} {rule})".rstrip())

for k in (5, 6):
    fact = ledger.best_bound(GAMMA, (k,))
    print(f"growth rate for k={k}: >= {fact.value.render()}")

# Every derived fact can be recomputed from its parents.
ledger.recompute_check()
print("recompute check passed")

print()
print(ledger.emit_table(range(5, 10), range(3, 5)))
