"""Edge correction to a trace.

For the constant tridiagonal matrix (b = 1, a = 0) the normalised trace
tr(H^4)/(2j+1) is T0 + T1/j + O(1/j^2) with T0 = 6 and an edge term
T1 = -5 that comes from walks touching the matrix boundary. The finite-j traces confirm it
by Richardson extrapolation.
"""
from math import comb

from starspec import models, oracle, spectra
from starspec.expr import parse

md = models.toeplitz(0, 1)
f = parse("x^4")
T0 = spectra.trace_T0(md.profiles, f)
T1 = spectra.trace_T1(md.profiles, f)
print(f"T0 = {T0:.12f}   T1 = {T1:.12f}")

traces = [(j, oracle.finite_trace(md.exact(j), f)) for j in (100, 200, 400)]
for j, t in traces:
    print(f"j={j:4d}  j (tr f(H)/(2j+1) - T0) = {j * (t - T0):.8f}")
print("Richardson estimate of T1:", oracle.richardson_T1(traces, T0))

# the walk counts behind the edge term
print("\n m  n  walks  C(m, n+m/2)")
for m in (2, 4, 6):
    for n in range(m // 2 + 1):
        print(f"{m:2d} {n:2d} {oracle.count_boundary_walks(m, n):6d} {comb(m, n + m // 2):6d}")
