"""Numerical calculus of rearrangement-invariant function spaces.

Rearrangements, Lorentz, Lorentz-Zygmund and Orlicz norms, Young-function
calculus, and the optimal target/domain constructions for Sobolev-type
embeddings on the one-dimensional reduced side.
"""

__version__ = "0.1.0"
