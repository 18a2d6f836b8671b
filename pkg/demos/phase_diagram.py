# coding: utf-8

# # The (p, q) phase diagram
#
# For fixed n, beta, gamma and weights the classifier splits the exponent
# plane into non-existence regions and the admissible region. Here we sweep
# a grid for the Lane-Emden case (gamma = 2, beta = 1, sigma = 0) in R^5.

import numpy as np

from wolffkit import SystemParams, classify

n, beta, gamma, s1, s2 = 5, 1.0, 2.0, 0.0, 0.0
ps = np.linspace(0.5, 6.0, 23)
qs = np.linspace(0.5, 6.0, 23)

symbols = {
    "NonexistenceSubproduct": ".",
    "NonexistenceRate": "-",
    "NonexistenceEndpoint": "=",
    "Admissible": "#",
    "EndpointUndecided": "?",
}

# Rows run from large q down to small q so the picture reads like a plot.
for q in qs[::-1]:
    row = "".join(symbols[classify(SystemParams(n, beta, gamma, p, q, s1, s2)).regime.value] for p in ps)
    print(f"q={q:4.2f} {row}")
print("       p from", ps[0], "to", ps[-1])
print("legend:", ", ".join(f"{v} {k}" for k, v in symbols.items()))

# On the diagonal p = q the boundary sits at p = (n + sigma)/(n - 2).
report = classify(SystemParams(n, beta, gamma, 5 / 3, 5 / 3, s1, s2))
print("p = q = 5/3:", report.regime.value, "-", report.reason)
report = classify(SystemParams(n, beta, gamma, 3.0, 3.0, s1, s2))
print("p = q = 3:  ", report.regime.value, " q0 =", report.q0, " a0 =", report.a0)
