"""Running verification campaigns from Python and reading their records."""

from pgt.campaigns import CAMPAIGNS, run_campaign, violations

print("campaigns:", ", ".join(sorted(CAMPAIGNS)))

records = run_campaign("seress_dolfi")
for r in records:
    print(f"{r.label:22s} d={r.value} {r.status}")
print("violations:", len(violations(records)))

# Every record is a JSON line; the same stream comes from `pgt campaign <name>`.
print(records[0].to_json())
