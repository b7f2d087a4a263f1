"""Exact point counts of homogeneous varieties G/H over finite fields.

The counts are periodic polynomials computed from lattice data (root datum,
torus restriction, component group, Frobenius twist). Brute-force oracles over
small fields live in :mod:`homcount.oracle`.
"""
