"""
Numerical packages of cgolab: geometry, transforms, holo, pde, cgo, analysis
and the experiment runner.
"""

__version__ = "0.1.0"
