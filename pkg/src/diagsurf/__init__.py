"""Local solubility of diagonal cubic and quartic surfaces over Q.

Exact local densities, a complete p-adic point search, height-ordered
empirical counts, Monte Carlo density estimates, and a large-sieve style
transversality experiment, with a command line front end.
"""

__version__ = "0.1.0"
