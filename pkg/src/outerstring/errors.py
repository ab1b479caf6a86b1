"""Exception types shared across the package."""


class OuterstringError(Exception):
    """Base class for all package errors."""


class ParseError(OuterstringError):
    """Malformed JSON input (instance, graph, model, decomposition)."""


class InvalidString(OuterstringError, ValueError):
    """A polyline that violates the grounded-string invariants."""


class DegenerateContact(OuterstringError):
    """Two strings touch without crossing transversally."""


class DegenerateInput(OuterstringError):
    """An instance fails the general-position validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:3])
        more = f" (+{len(self.violations) - 3} more)" if len(self.violations) > 3 else ""
        super().__init__(f"instance is not in general position: {head}{more}")


class EpsilonTooLarge(OuterstringError):
    """A perturbation changed an intersection relation."""


class SizeLimitExceeded(OuterstringError):
    """An exponential routine was called on an input above its cap."""


class WidthLimitExceeded(OuterstringError):
    """A tree decomposition is wider than the configured DP cap."""


class NotAModel(OuterstringError):
    """A branch-set map is not a valid clique-minor model."""


class DisconnectedPair(OuterstringError):
    """Two paired branch sets do not form a connected union."""


class NotCircular(OuterstringError):
    """Double-grounded curves are not circularly ordered."""


class TraversalStuck(OuterstringError):
    """The level-curve traversal left the expected arc set."""
