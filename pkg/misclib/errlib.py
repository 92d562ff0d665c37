class MpcError(Exception):
    """
    Base of every error raised by the runtime, dealer and profiler.
    """


class DomainError(MpcError, ValueError):
    """
    Value outside its domain: ring range, arity, empty input.
    """


class StructuralError(MpcError):
    """
    Malformed circuit: cycle, dangling reference, mixed worlds.
    """


class ConfigError(MpcError, ValueError):
    pass


class UsageError(MpcError):
    """
    Bad command line; `flag` names the offending option.
    """

    def __init__(self, msg: str, flag: str = None):
        super().__init__(msg)
        self.flag = flag


class ProtocolError(MpcError):
    """
    Unexpected frame type, wrong layer id or payload size.
    """


class HandshakeError(ProtocolError):
    def __init__(self, field: str, ours, theirs):
        super().__init__(f'handshake mismatch on {field}: ours={ours} peer={theirs}')
        self.field = field
        self.ours = ours
        self.theirs = theirs


class PeerConnectionError(MpcError, ConnectionError):
    pass


class TripleExhaustedError(MpcError):
    def __init__(self, world: str, wanted: int, left: int):
        super().__init__(f'{world} triple pool exhausted: wanted {wanted}, {left} left')
        self.wanted = wanted
        self.left = left
