from enum import Enum, IntEnum


class IndexKind(IntEnum):
    FIN = 0
    NAT = 1


class Classification(Enum):
    EMPTY = "empty"
    FINITE = "nonempty-finite"
    COFINITE = "cofinite"
    FULL = "full"
    NEITHER = "neither"


class SumKind(IntEnum):
    FIN_FIN = 0
    NAT_FIN = 1
    FIN_NAT = 2
    GRAPH = 3


class IsoVerdict(IntEnum):
    ISOMORPHIC = 0
    NOT_ISOMORPHIC = 1
    UNKNOWN = 2


class Status(Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


class OutputFormat(Enum):
    TEXT = "text"
    JSON = "json"
