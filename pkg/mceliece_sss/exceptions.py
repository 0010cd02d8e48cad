class McElieceSSError(Exception):
    """Base class of all errors raised by the `mceliece_sss` package."""


class ZeroInverse(McElieceSSError, ZeroDivisionError):
    """Inverse of the zero field element (or a non-unit polynomial)."""


class DivisionByZeroPoly(McElieceSSError, ZeroDivisionError):
    """Polynomial division by the zero polynomial."""


class DimensionMismatch(McElieceSSError, ValueError):
    """Operand lengths or matrix shapes do not agree."""


class Singular(McElieceSSError, ValueError):
    """Matrix is not invertible over GF(2)."""


class InvalidInput(McElieceSSError, ValueError):
    """Arguments violate the preconditions of a scheme operation."""


class MalformedInput(McElieceSSError, ValueError):
    """Encoded bytes cannot be decoded into a valid object."""


class InternalConsistencyError(McElieceSSError, RuntimeError):
    """A self-check failed; indicates a bug rather than bad input."""


class NotDecodable(McElieceSSError):
    """
    Syndrome lies outside the decoding radius of the Goppa code.

    :param message: str, description of the failure.
    :param block: int (default: None), zero-based index of the message
        block whose collision could not be found, if any.
    """

    def __init__(self, message='syndrome is not decodable', block=None):
        super().__init__(message)
        self.block = block


class WeightMismatch(McElieceSSError, ValueError):
    """
    Randomizer or error vector does not have the required Hamming weight.

    :param message: str, description of the failure.
    :param weight: int (default: None), observed weight.
    :param expected: int (default: None), required weight.
    :param block: int (default: None), zero-based index of the message
        block concerned, if any.
    """

    def __init__(self, message, weight=None, expected=None, block=None):
        super().__init__(message)
        self.weight = weight
        self.expected = expected
        self.block = block
