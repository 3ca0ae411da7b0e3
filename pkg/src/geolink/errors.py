"""Exception types shared across all geolink modules."""


class GeolinkError(Exception):
    """Base class for all errors raised by this package."""

    code = "internal"


class ValidationError(GeolinkError):
    """Input violates a documented precondition."""

    code = "validation"


class NotFoundError(GeolinkError):
    """A referenced entity does not exist."""

    code = "not_found"


class ConflictError(GeolinkError):
    """The operation collides with existing state (e.g. duplicate id)."""

    code = "conflict"


class ResourceError(GeolinkError):
    """A guard limit would be exceeded (e.g. heatmap cell count)."""

    code = "resource"


class StaleReferenceError(GeolinkError):
    """A previously issued result refers to entities that no longer exist."""

    code = "stale"


class StorageError(GeolinkError):
    """Persistent storage could not be read or written."""

    code = "storage"


class AuthenticationError(GeolinkError):
    """Login failed; deliberately carries no detail about the cause."""

    code = "auth"


class RateLimitError(GeolinkError):
    """Too many login attempts inside the configured window."""

    code = "rate_limited"
