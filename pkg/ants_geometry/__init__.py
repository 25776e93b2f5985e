from ants_geometry.exact_algebra import *
from ants_geometry.distribution_analysis import *
from ants_geometry.ants_models import *
from ants_geometry.extremals import *
from ants_geometry.quartic_metric import *

__doc__ = '''Ants Geometry
=============

Exact symbolic and numerical tools for the sub-Riemannian geometry of three
ants that move one at a time, each parallel to the line through the other two
(rule A) or along the opposite side (rule B).

Distributions, brackets and forms are computed over the rationals; extremals
and the reduced systems are integrated numerically with their invariants
monitored. Run ``ants-geometry verify`` to check every identity the package
relies on.
'''
