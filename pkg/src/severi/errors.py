"""Exception types shared by the geometry modules."""


class GeometryError(Exception):
    """Base class for every error raised by the geometry layer."""


class PreconditionError(GeometryError, ValueError):
    """An input violates an operation's stated precondition."""


class DegenerateSample(GeometryError):
    """A sampled configuration failed a guaranteed dimension check.

    Campaigns catch this, count the sample as degenerate and resample.
    """


class InvariantViolation(GeometryError):
    """A structural claim failed on a non-degenerate sample.

    Never resampled: this is a genuine counterexample (or a bug).
    """


class SameContact(GeometryError):
    """Two rank-2 points share their contact locus."""


class NotInCubic(PreconditionError):
    """A line handed to the classifier does not lie on the secant cubic."""
