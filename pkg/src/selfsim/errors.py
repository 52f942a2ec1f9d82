"""Exception types shared across the package."""


class SelfsimError(Exception):
    """Base class for all library errors."""


class PresentationError(SelfsimError):
    """Invalid or inconsistent polycyclic presentation, or mixed presentations."""


class TorsionError(SelfsimError):
    """A construction would introduce torsion into a torsion-free quotient."""


class InfiniteIndexError(SelfsimError):
    """An operation requiring finite index was given an infinite-index subgroup."""


class HomomorphismError(SelfsimError):
    """A generator assignment does not extend to a homomorphism."""


class OutsideDomainError(SelfsimError):
    """An element lies outside the domain subgroup of a virtual endomorphism."""
