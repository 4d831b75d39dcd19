"""
numrange-composition - Core Application Package.

Numerical ranges of composition operators on the Hardy space of the disk
whose symbols are finite-order elliptic automorphisms: truncated-matrix
sweeps, closed-form order-2 and order-3 boundaries, and check suites that
tie the two together.
"""

__version__ = "0.1.0"
__author__ = "numrange-composition maintainers"
__email__ = "maintainers@numrange-composition.dev"
