# coding: utf-8

# # Decay of v when u decays fast
#
# If u ~ r^-a0 then W(|y|^s2 u^p) decays like r^-a0 when p a0 - s2 > n,
# picks up a log factor at equality, and decays more slowly below it.
# The fits run over r in [1e3, 1e9], so this takes a little while.

from wolffkit import SystemParams, fast_trichotomy_fit, fast_v_rate

for p in (3.0, 5 / 3, 1.2):
    params = SystemParams(5, 1.0, 2.0, p, 3.0, 0.0, 0.0)
    case, fit = fast_trichotomy_fit(params)
    print(f"p={p:.4f}  d={case.discriminant:.4f}  branch={case.kind.value}")
    print(f"   predicted r^-{case.rate:.4f} (log power {case.log_exponent})")
    print(f"   fitted    r^-{fit.theta:.4f} (log power {fit.kappa:.4f}), residual {fit.residual:.1e}")

# The log corrected case is the hardest to fit: log r only changes by a
# factor of three over six decades, so kappa is good to a few percent.
print(fast_v_rate(SystemParams(5, 1.0, 2.0, 5 / 3, 3.0, 0.0, 0.0)))
