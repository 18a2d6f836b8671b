# coding: utf-8

# # The iteration behind the Liouville theorem
#
# Lower bounds u >= r^-a_j, v >= r^-b_j improve along an affine recursion
# a_{j+1} = r0 a_j + const whose fixed point is the slow rate q0. Whether
# the sequence runs off to -infinity decides non-existence.

from wolffkit import SystemParams, exponents, iterate_liouville
from wolffkit.asymptotics import closed_form_a, lambda_limit_check, lambda_limit_value

cases = {
    "p = q = 1 (ratio 1)": SystemParams(5, 1.0, 2.0, 1.0, 1.0, 0.0, 0.0),
    "p = q = 0.5 (subproduct)": SystemParams(5, 1.0, 2.0, 0.5, 0.5, 0.0, 0.0),
    "p = q = 1.5 (q0 > a0)": SystemParams(5, 1.0, 2.0, 1.5, 1.5, 0.0, 0.0),
    "p = q = 3 (admissible)": SystemParams(5, 1.0, 2.0, 3.0, 3.0, 0.0, 0.0),
}

for name, params in cases.items():
    trace = iterate_liouville(params, max_iter=8)
    ex = exponents(params)
    print(f"{name}: ratio {ex.iter_ratio}, q0 {ex.q0}")
    print("   a_j:", ", ".join(f"{a:.4g}" for a in trace.a))
    print("   verdict:", trace.verdict.value, " closed form error:", trace.closed_form_check)

# In the admissible case the sequence grows like 2 * 9^j + 1.
print([closed_form_a(cases["p = q = 3 (admissible)"], 3.0, j) for j in range(4)])

# The rescaling step uses a limit in r that is reached slowly, like 1/log r.
for r, lhs in lambda_limit_check(5, 1.0, 2.0, 1.0, [1e3, 1e6, 1e9, 1e12]):
    print(f"r={r:.0e}  lhs={lhs:.6f}  limit={lambda_limit_value(5, 1.0, 2.0, 1.0):.6f}")
