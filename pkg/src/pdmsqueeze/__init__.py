"""Position-dependent mass removal by a squeeze-like unitary transformation.

Modules
-------
fields      scalar fields with exact derivatives, uniform grids
transform   series for G, f, F and the transformed potential W
flow        characteristic-flow oracle for f and F
operators   tridiagonal Hamiltonians, discrete T, conjugation residual
eigensolve  Sturm bisection + inverse iteration for the lowest levels
catalog     exponential mass, five-term potential, Morse target, constant-mass case
verify      acceptance checks A1..A8 and the JSON report
cli         command-line front end
"""

__version__ = "0.1.0"
