"""
stein-lab: a finite-n verification laboratory for generalised Stein lemmas.

Type combinatorics, hypergeometric kernels, one-shot divergences, free-set
families, classical and quantum blurring maps and their second-quantised
pure-loss limit, each checked against brute-force oracles and analytic bounds.
"""

__version__ = "0.1.0"
