from typing import Optional


class RelayDelayError(Exception):
    """Base exception for relaydelay errors."""
    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class ChannelDomainError(RelayDelayError, ValueError):
    """Raised when a channel or reliability parameter is outside its domain."""
    pass


class SegmentIndexError(RelayDelayError, IndexError):
    """Raised when a segment does not lie within the network."""
    pass


class PartitionError(RelayDelayError, ValueError):
    """Raised when segments do not partition the transmitting nodes 0..H."""
    pass


class DegenerateChannelError(RelayDelayError, ArithmeticError):
    """Raised when the cascade gain product vanishes or overflows."""
    pass


class OracleRefusedError(RelayDelayError):
    """Raised when exhaustive enumeration would exceed the relay limit."""
    def __init__(self, message: str, relays: int = 0, limit: int = 0):
        super().__init__(message, field="hops")
        self.relays = relays
        self.limit = limit


class ConfigError(RelayDelayError):
    """Raised when a network description file fails to parse or validate."""
    def __init__(self, message: str, field: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message, field=field)
        self.line = line
        self.column = column


class MissingFeedbackError(ConfigError):
    """Raised when feedback analysis is requested without a feedback section."""
    pass


class SweepParameterError(RelayDelayError, ValueError):
    """Raised for an unknown sweep parameter or an unusable grid."""
    pass
