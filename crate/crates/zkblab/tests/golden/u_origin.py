"""Regenerates u_origin.csv: U(0, 0, t) at mu = 1 by mpmath.

After the closed-form eta integral,
U(0,0,t) = (1/4pi^2) * 2 sqrt(pi/t) * Re int_0^inf xi^(-1/2) e^(-t xi^2) e^(i(t xi^3 + pi/4)) dxi,
evaluated with xi = s^2 to remove the endpoint singularity.
"""
from mpmath import mp, quad, sqrt, pi, exp, expj, re, inf

mp.dps = 30
print("t,mu,value")
for t in [1]:
    f = lambda s: 2 * exp(-t * s**4) * expj(t * s**6 + pi / 4)
    value = re(quad(f, [0, 0.5, 1, 1.5, 2, 3, inf])) * 2 * sqrt(pi / t) / (4 * pi**2)
    print(f"{t},1,{mp.nstr(value, 20)}")
