"""N-Laplacian a-priori bound laboratory - Main Package

A desk-scale numerical laboratory for the radial problem -Δ_N u = f(u):
nonlinearity classification, shooting solutions, blow-up rescaling toward
the Liouville profile, mass quantization and the unbounded entropy-solution
counterexample for growths beyond e^t.
"""

__version__ = "0.1.0"

# Package metadata
__title__ = "nlab"
__description__ = "Radial N-Laplacian shooting, blow-up and quantization lab"
__license__ = "MIT"
