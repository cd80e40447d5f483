"""Verification toolkit for the geometry of the Cayley hyperbolic plane.

Submodules:

* ``octonion``  -- Cayley-number arithmetic from the seven cyclic triples
* ``exterior``  -- sparse exterior algebra, Hodge star, Hessian surrogate
* ``curvature`` -- sectional formula on O^2, polarized operator, pinching
* ``geodesy``   -- radial comparison geometry and the bottom of the spectrum
* ``forms``     -- parallel-form candidates and linear constraint extraction
* ``kernels``   -- sharp Bochner ratio problems and the Kato-type transform
* ``cli``       -- command line front end producing reports and artifacts
"""

__version__ = "0.1.0"

__all__ = [
    "octonion",
    "exterior",
    "curvature",
    "geodesy",
    "forms",
    "kernels",
    "suites",
    "cli",
]
