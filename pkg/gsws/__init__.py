"""
Exact analytical solver for the generalized symmetric Woods-Saxon potential
"""
__version__ = "1.0.0"
