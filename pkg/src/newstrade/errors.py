"""Exception types for protocol-level failures."""


class ProtocolError(Exception):
    """Base class for every protocol failure raised by this package."""


# ledger
class DuplicateContent(ProtocolError):
    pass


class BadSignature(ProtocolError):
    pass


class EmptyBatch(ProtocolError):
    pass


class BadFormat(ProtocolError):
    pass


# identity
class EmptyText(ProtocolError):
    pass


class MalformedKey(ProtocolError):
    pass


# market
class NoMinersAvailable(ProtocolError):
    pass


class UnknownListing(ProtocolError):
    pass


class InsufficientFunds(ProtocolError):
    pass


# storage
class ZeroFileSize(ProtocolError):
    pass


class NoCandidates(ProtocolError):
    pass


class InsufficientCapacity(ProtocolError):
    pass


# delivery
class SizeMismatch(ProtocolError):
    pass


class MinerFull(ProtocolError):
    pass


class ChunkMissing(ProtocolError):
    pass


class ChunkExpired(ProtocolError):
    pass


class DecryptionFailure(ProtocolError):
    pass


# blockcop
class NoSuchPayment(ProtocolError):
    pass


class NoSuchService(ProtocolError):
    pass


# simnet
class PastEvent(ProtocolError):
    pass


class UnknownActor(ProtocolError):
    pass


class BadScenario(ProtocolError):
    pass
