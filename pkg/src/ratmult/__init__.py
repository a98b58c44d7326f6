"""Independent multipliers of periodic orbits of rational maps, certified at z^n."""

from ._numeric import precision
from .certificate import (
    Certificate,
    ConditionReport,
    Verification,
    check_period_conditions,
    construct_certificate,
    explore_beyond_conditions,
    order_periods,
    verify_certificate,
)
from .derivatives import (
    SparsePolynomial,
    deg_P,
    dlambda_closed,
    dlambda_infinity,
    dlambda_numeric,
    eval_P_at_root,
    poly_P,
    support_disjoint,
)
from .jacobian import (
    MultiplierJacobian,
    PeriodicVector,
    build_jacobian,
    det,
    hadamard_threshold,
    leading_minor,
    numeric_jacobian,
)
from .periodic import (
    PeriodVector,
    RootPoint,
    count_nonzero,
    count_periodic,
    enumerate_periodic,
    mobius_mu,
    newton_continue,
    orbit_of,
)
from .ratmap import (
    INFINITY,
    ParamVector,
    RationalMap,
    evaluate,
    family_map,
    index_sum,
    iterate,
    mobius_conjugate,
    monomial_family,
    multiplier,
    resultant,
)

__version__ = "0.1.0"
