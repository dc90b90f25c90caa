"""Exception hierarchy shared across the package.

The CLI maps these onto its documented exit codes: schema problems exit
with 2, cap overruns with 3 and solver breakdowns with 4.
"""

from __future__ import annotations


class GameNormsError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(GameNormsError):
    """A document or in-memory object violates its declared schema."""


class DimensionMismatch(GameNormsError):
    """Two objects that must share alphabet sizes do not."""


class SpaceTagError(GameNormsError):
    """A marginal tagged for one Banach space was fed to the other norm."""


class CapExceeded(GameNormsError):
    """An enumeration or tensor-size cap would be exceeded."""


class SolverFailure(GameNormsError):
    """The SDP solver did not deliver a certified answer."""
