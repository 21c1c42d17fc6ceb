"""Exact orthogonal-group computations for even integral lattices."""

__version__ = "0.1.0"

from .errors import LatrefError  # noqa: E402
from .lattice import (  # noqa: E402
    DiscriminantGroup,
    Lattice,
    Splitting,
    bilinear,
    direct_sum,
    disc_action,
    discriminant_group,
    e8,
    hyperbolic_plane,
    is_pm_on_disc,
    is_stable,
    lattice_L,
    make_lattice,
    q,
    rank_one,
    signature,
    split_lattice,
    twist,
)
from .squares import SquareClass, hilbert, square_class_p  # noqa: E402
from .transforms import (  # noqa: E402
    Isometry,
    apply,
    cartan_dieudonne,
    compose,
    eichler,
    huybrechts,
    identity,
    inverse,
    is_O_plus,
    is_reflexive_involution,
    make_isometry,
    negation,
    order,
    reflection,
    spinor_norm,
    spinor_norm_twisted,
)
from .words import Eichler, GeneratorWord, Huy, Neg, Refl, random_word  # noqa: E402
from .vectors import short_vectors  # noqa: E402
from .decompose import DecomposeResult, SearchOptions, classify, decompose, peel, reduce_on_U  # noqa: E402
from .padic import F2FormClass, LocalVerdict, local_membership, mod2_class, mod2_fix_witness  # noqa: E402
from .k3 import (  # noqa: E402
    AutType,
    PellSolution,
    aut_trichotomy,
    mukai_extend,
    pell,
    pell_isometry,
    verify_fixture,
)
from .kernels import BACKEND  # noqa: E402
