"""Exception hierarchy shared by all tubebeta modules."""


class TubeBetaError(Exception):
    """Base class for every error raised by the package."""


class DomainError(TubeBetaError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class BranchError(DomainError):
    """A power base left the half-plane where the principal branch is verified."""


class PoleError(DomainError):
    """A gamma argument sits on a pole."""

    def __init__(self, location, label=None):
        self.location = location
        self.label = label
        where = f"{label} " if label else "Gamma "
        super().__init__(f"{where}has a pole at argument {location!r}")


class ParameterError(TubeBetaError, ValueError):
    """Parameters violate a convergence inequality."""

    def __init__(self, message, violated=()):
        self.violated = tuple(violated)
        super().__init__(message)


class MembershipError(DomainError):
    """A point does not belong to the tube domain."""


class ConvergenceError(TubeBetaError, RuntimeError):
    """A quadrature did not reach its tolerance within the allotted budget."""


class ProposalError(TubeBetaError, ValueError):
    """An importance-sampling proposal does not dominate the integrand."""


class ConfigError(TubeBetaError, ValueError):
    """A run configuration could not be parsed or is inconsistent."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        prefix = f"[{', '.join(loc)}] " if loc else ""
        super().__init__(prefix + message)
