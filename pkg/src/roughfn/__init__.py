"""Series solutions of f(x) - a f(bx) = g(x), fractal interpolation and
Weierstrass-type Fourier bases."""

__version__ = "0.1.0"
