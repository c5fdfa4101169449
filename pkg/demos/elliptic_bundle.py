"""P(O + O(p)) over an elliptic curve: O(p) has the larger slope, so P(O(p)) destabilises."""

from slopestab import catalog
from slopestab.bundles import bundle_verdict

res = bundle_verdict(catalog.elliptic_bundle())
for r in res.per_subsheaf:
    print(r.sheaf.label, "gap", r.gap, "->", r.verdict.describe(), f"({r.note})")
print("aggregate:", res.aggregate.describe())
print("assumes:", res.hypothesis)
