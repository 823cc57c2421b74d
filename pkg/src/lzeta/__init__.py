"""Dirichlet L-functions evaluated at zeros of the Riemann zeta function.

Modules:
    arith: primes, von Mangoldt, Selberg weights, prime-reciprocal sums.
    characters: Dirichlet characters with exact phases, Gauss sums.
    zeta_zeros: zero files, Hardy Z, scanners, first-n zeros.
    lfunc: L-values, completed L-function, L-zeros, eta.
    selberg: truncated prime sums and approximation error terms.
    model: random Euler-product model, exact moments, Bessel products.
    stats: samples at zeros, normality, covariance, a-values.
    paircorr: cross pair correlation of zeta and L zeros.
"""

__version__ = "0.1.0"
