"""fllab: closed-form Fourier-Legendre coefficients and the hypergeometric identities they imply.

The numerical kernel (Gamma family, Legendre functions, elliptic K), pFq
summation, series acceleration and quadrature oracles live in their own
modules; ``fllab.catalog`` ties them into a checkable registry of
identities and ``fllab.cli`` exposes it on the command line.
"""

__version__ = "0.1.0"
