from .upset import UPSet
from .maps import IndexSet, UPFamily, TableMap, StepMap, ResidueMap
from .ultrafilter import star, principal, factorial, uf_sum, uf_pushforward, uf_equal, uf_iso, tensor
from .ultraproduct import BoundedFamily, UPElement, uprod_enumerate
from .space import FiniteSpace, SpaceMap, etale_check, ucvg
from .category import FiniteCategory
from .vult import UltraArrow, PointVUlt, FinSetVUlt, PtSpace, Alex, VUltFunctor, functor_validate
from .sheaf import UltraSheaf, EtaleSheaf, Presheaf, ev_space, ev_equivalence_check
from .descent import TopGroupoid, kernel_groupoid, effective_descent_criterion, universality_check
from .suites import SUITES, Bounds, Outcome
from .exceptions import *


__version__ = "0.1.0"
