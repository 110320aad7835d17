"""Exception hierarchy shared by the library and the CLI."""


class PackedMMError(Exception):
    """Base class for all library errors."""


class RadixMismatch(PackedMMError, ValueError):
    pass


class DimensionMismatch(PackedMMError, ValueError):
    pass


class SlotOverflow(PackedMMError, ValueError):
    """Packing at the requested slot width could carry between slots."""


class MemoryCapExceeded(PackedMMError):
    pass


class OracleMismatch(PackedMMError, AssertionError):
    pass
