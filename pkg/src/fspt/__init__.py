"""Exact twisted cochain calculus, pentad invariants of fermionic SPT data, and finite self-dual CAR algebras."""

from .classify import Classification, classify_by_witness, classify_pd0
from .cochain import Z2, PairValue, Ring, TwistedCochain, coboundary, d1, d2, d3, mu, sign_lift, twisted_cup
from .group import FiniteGroup, TwistHom, enumerate_twist_homs, parse_group_file, validate_group
from .pentad import (
    EquivalenceWitness,
    Pentad,
    Triple,
    apply_equivalence,
    check_pentad,
    compose_witnesses,
    equivalent,
    invert_witness,
    reduce_to_pd0,
)

__version__ = "0.1.0"

__all__ = [
    "Classification", "classify_by_witness", "classify_pd0",
    "Z2", "PairValue", "Ring", "TwistedCochain", "coboundary", "d1", "d2", "d3", "mu", "sign_lift", "twisted_cup",
    "FiniteGroup", "TwistHom", "enumerate_twist_homs", "parse_group_file", "validate_group",
    "EquivalenceWitness", "Pentad", "Triple", "apply_equivalence", "check_pentad", "compose_witnesses",
    "equivalent", "invert_witness", "reduce_to_pd0",
]
