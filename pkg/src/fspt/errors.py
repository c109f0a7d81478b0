"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FsptError(Exception):
    """Base class for all errors raised by :mod:`fspt`."""


class ParseError(FsptError):
    pass


class GroupError(FsptError):
    """A multiplication table does not define a group."""


class NotLatinSquare(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class GroupTooLarge(FsptError):
    pass


class OddModulus(FsptError):
    pass


class DimensionMismatch(FsptError):
    pass


class ComponentMismatch(FsptError):
    pass


class NotACocycle(FsptError):
    pass


class NotAMember(FsptError):
    pass


class WitnessInvalid(FsptError):
    pass


# finite self-dual CAR algebras
class NotABasisProjection(FsptError):
    pass


class NotUnitary(FsptError):
    pass


class NotConjugationEquivariant(FsptError):
    pass


class NoImplementer(FsptError):
    pass


class NonUniqueImplementer(FsptError):
    pass


class InhomogeneousInput(FsptError):
    pass


class NotAHomomorphism(FsptError):
    pass
