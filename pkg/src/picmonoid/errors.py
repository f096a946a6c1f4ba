"""Exception hierarchy shared across the package.

Every domain error derives from :class:`PicmonoidError` and carries a small
integer ``exit_code`` so the command line tool can map failures to stable
process exit codes.  Plain ``ValueError``/``TypeError`` are reserved for
programming mistakes; anything a caller can trigger with legal-looking but
invalid mathematical input gets a class of its own here.
"""

from __future__ import annotations


class PicmonoidError(Exception):
    """Base class for all domain errors raised by this package."""

    exit_code = 3


class UsageError(PicmonoidError):
    """Malformed command line input or unparseable serialized data."""

    exit_code = 2


class ZeroInputError(PicmonoidError):
    """A nonzero rational was required (e.g. when taking a divisor)."""

    exit_code = 4


class NonPrimeError(PicmonoidError):
    """An integer that must be prime failed the primality check."""

    exit_code = 5


class InfiniteCoefficientError(PicmonoidError):
    """An infinite coefficient appeared where only finite ones are legal."""

    exit_code = 6


class AllZeroError(PicmonoidError):
    """A generating set contained only zeros."""

    exit_code = 7


class InsufficientPrecisionError(PicmonoidError):
    """A truncated local component does not carry enough digits.

    Carries ``prime`` and ``needed`` (digits required) when known.
    """

    exit_code = 8

    def __init__(self, message: str, prime: int | None = None, needed: int | None = None):
        super().__init__(message)
        self.prime = prime
        self.needed = needed


class NegativeScaleError(PicmonoidError):
    """Archimedean scales must be nonnegative."""

    exit_code = 9


class ZeroScaleError(PicmonoidError):
    """A strictly positive archimedean scale was required."""

    exit_code = 10


class MissingCapError(PicmonoidError):
    """Spectrum sampling needs a denominator cap for every singular prime."""

    exit_code = 11


class InfiniteTypeError(PicmonoidError):
    """Unit-ball counting is only defined for divisors of finite type."""

    exit_code = 12


class MissingPrimeError(PicmonoidError):
    """A prime expected in some support set was absent."""

    exit_code = 13


class NotInGroupError(PicmonoidError):
    """An element lies outside the section group it was claimed to inhabit."""

    exit_code = 14


class RamifiedError(PicmonoidError):
    """Frobenius data was requested at a ramified prime."""

    exit_code = 15


class NonUnitGeneratorError(PicmonoidError):
    """A cover kernel generator is not a unit modulo the modulus."""

    exit_code = 16


class PrimeMismatchError(PicmonoidError):
    """Two fiber points over different primes cannot be combined."""

    exit_code = 17


class QuadratureFailureError(PicmonoidError):
    """Adaptive quadrature could not reach the requested accuracy."""

    exit_code = 18


class InsufficientZerosError(PicmonoidError):
    """The zero table does not contain as many ordinates as requested."""

    exit_code = 19


class FixedPointSingularError(PicmonoidError):
    """The distributional trace kernel 1/|1-u| is singular at u = 1."""

    exit_code = 20
