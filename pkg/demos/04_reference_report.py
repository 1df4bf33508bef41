"""Check computed distribution statistics against the shipped reference tables.

Users who hold a dataset comparable to the published study can line their
own similarity statistics up against the reference rows, field by field,
with explicit tolerances.
"""

from augscope import DistributionStats, Tolerances, compare_to_reference, load_reference_table

table = load_reference_table("table2")
print("reference rows in table2:")
for row in table.values():
    print(f"  {row.name:14s} n={row.sample_size} mean={row.mean} sd={row.sd} skew={row.skewness}")

# Pretend these came out of `augscope compare` on your own corpus.
computed = DistributionStats(sample_size=12800, mean=0.4740, sd=0.0912, skewness=0.4409)

report = compare_to_reference(computed, table["real_vs_syn"],
                              Tolerances(mean=0.01, sd=0.01, skewness=0.05))
print(f"\ncomparison against {report.name!r}:")
for check in report.checks:
    status = "pass" if check.passed else "FAIL"
    print(f"  {check.field:12s} computed={check.computed:<10.4f} reference={check.reference:<10.4f} "
          f"delta={check.delta:+.4f} tol={check.tolerance:g} {status}")
print("row passes overall:", report.passed)

# The same comparison with a much tighter skewness tolerance fails loudly.
strict = compare_to_reference(computed, table["real_vs_syn"], Tolerances(skewness=0.005))
failing = [c.field for c in strict.checks if not c.passed]
print("fields failing at skew tolerance 0.005:", failing)
