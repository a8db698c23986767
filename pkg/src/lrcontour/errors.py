"""Shared exception types."""


class EmptyContourError(ValueError):
    """An operation that needs a non-empty flip set received the empty one."""


class CertificationError(ArithmeticError):
    """A requested error budget cannot be met by the truncation scheme."""


class ResourceLimitError(RuntimeError):
    """An enumeration or chain exceeds the configured resource cap."""


class FixpointError(RuntimeError):
    """The split-and-repair partition loop failed to reach a fixpoint."""
