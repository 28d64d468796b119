"""linkflex: paradoxically mobile linkages.

Submodules
----------
dquat
    Quaternions, dual quaternions, isometries and Plücker lines.
ncpoly
    Motion polynomials and their factorizations.
synth
    Bennett synthesis and curve-drawing linkages.
rigidity
    Planar frameworks: Laman graphs, NAC colorings, Dixon motions.
loops
    Closed revolute chains: closure, tracing, bonds, Bricard families.
pods
    Multipods, the group/leg pairing, Duporcq and icosapod constructions.
cli
    Command-line front end.
"""
from .errors import LinkflexError

__version__ = "0.1.0"

__all__ = ["LinkflexError", "__version__"]
