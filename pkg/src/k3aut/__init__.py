"""Exact arithmetic for rank-2 even hyperbolic lattices.

Given the Gram matrix ((2a, b), (b, 2c)) with d = b^2 - 4ac > 0, this
package decides whether the isometry-theoretic automorphism group is
finite, infinite cyclic, or infinite dihedral, and produces explicit
generator matrices, their action sign on the discriminant group, and
topological entropy.  All solvers run on arbitrary-precision integers.
"""

from .aut import (
    AutClassification,
    DegenerateQuartic,
    Finite,
    GeneratorReport,
    InfiniteCyclic,
    InfiniteDihedral,
    InvolutionPair,
    classify,
    entropy,
    infinite_generator,
    involutions,
    lattice_from_quartic,
    minimal_hyperbolic,
    relation_isometries,
)
from .divisors import (
    DivisorClass,
    OrbitStep,
    has_minus_two_class,
    has_zero_class,
    orbit_ratio_sequence,
    represent,
)
from .lattice import (
    DiscAction,
    DiscMap,
    Isometry2,
    Rank2Lattice,
    disc_action,
    disc_action_oracle,
    disc_group_snf,
    is_isometry,
    make_lattice,
    preserves_positive_cone,
)
from .pell import (
    OrbitSet,
    PellSolution,
    cf_sqrt_period,
    general_pell_orbits,
    pell1_fundamental,
    pell4_fundamental,
    pell_multiply,
    pell_power,
)

__version__ = "0.1.0"

__all__ = [
    "AutClassification",
    "DegenerateQuartic",
    "DiscAction",
    "DiscMap",
    "DivisorClass",
    "Finite",
    "GeneratorReport",
    "InfiniteCyclic",
    "InfiniteDihedral",
    "InvolutionPair",
    "Isometry2",
    "OrbitSet",
    "OrbitStep",
    "PellSolution",
    "Rank2Lattice",
    "cf_sqrt_period",
    "classify",
    "disc_action",
    "disc_action_oracle",
    "disc_group_snf",
    "entropy",
    "general_pell_orbits",
    "has_minus_two_class",
    "has_zero_class",
    "infinite_generator",
    "involutions",
    "is_isometry",
    "lattice_from_quartic",
    "make_lattice",
    "minimal_hyperbolic",
    "orbit_ratio_sequence",
    "pell1_fundamental",
    "pell4_fundamental",
    "pell_multiply",
    "pell_power",
    "preserves_positive_cone",
    "relation_isometries",
    "represent",
]
