"""Exception types shared across the package.

All errors derive from ``ValueError`` so callers that do not care about the
fine-grained category can catch a single builtin type.  Plain ``ValueError``
is raised for numeric domain violations (e.g. nonpositive arguments to the
analytic functions).
"""


class ConfigurationError(ValueError):
    """A network/experiment configuration is invalid (e.g. K = 0, power <= 0)."""


class StructureError(ValueError):
    """A runtime object has the wrong shape for the requested operation."""


class UnsupportedConfigurationError(ValueError):
    """The configuration is valid but outside this operation's supported domain
    (e.g. asymmetric powers passed to a symmetric-only estimator)."""
