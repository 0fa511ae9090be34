"""Numerical laboratory for T^2-invariant 4-metrics over the half plane.

Builds and differentiates the flat screw quotients, the special Kasner
end, and the glued collapsing families; evaluates the collapse
obstruction indicators along rays; and classifies self-dual Weyl
curvature type.
"""

__version__ = "0.1.0"
