"""
Bit-packed vectors and matrices over GF(2).

Bit i of a vector lives at bit (i mod 8) of byte (i div 8), LSB first.
Matrices are row-major with every row padded to whole bytes; padding bits
are always zero. Elimination works on 64-bit words, products go through a
float32 BLAS product of the unpacked operands (exact while the inner
dimension is below 2^24).
"""
import logging
from dataclasses import dataclass
import numpy as np
from mceliece_sss.exceptions import DimensionMismatch, Singular

logger = logging.getLogger(__name__)

_PARITY = np.array([bin(i).count('1') & 1 for i in range(256)],
                   dtype=np.uint8)


def _padding_mask(length):
    """Mask of the valid bits in the last byte, 0 if no padding."""
    return (1 << (length % 8)) - 1 if length % 8 else 0


@dataclass(frozen=True)
class BitVec:
    """
    Vector over GF(2).

    :param length: int, number of bits.
    :param bits: bytes, packed storage of `ceil(length / 8)` bytes.
    """

    length: int
    bits: bytes

    def __post_init__(self):
        if len(self.bits) != (self.length + 7) // 8:
            raise DimensionMismatch(
                f'BitVec of length {self.length} needs '
                f'{(self.length + 7) // 8} bytes, got {len(self.bits)}.'
            )
        mask = _padding_mask(self.length)
        if mask and self.bits[-1] & ~mask & 0xff:
            raise ValueError('BitVec padding bits must be zero.')

    @classmethod
    def zeros(cls, length):
        return cls(length, bytes((length + 7) // 8))

    @classmethod
    def from_bits(cls, bits):
        """
        :param bits: array-like, sequence of zeros and ones.
        :return: BitVec, packed vector.
        """
        bits = np.asarray(bits, dtype=np.uint8)
        packed = np.packbits(bits, bitorder='little')
        return cls(int(bits.size), packed.tobytes())

    @classmethod
    def from_bytes(cls, data, length, strict=True):
        """
        :param data: bytes, packed bits.
        :param length: int, number of bits.
        :param strict: bool (default: True), whether nonzero padding bits
            are rejected. If `False` they are cleared.
        :return: BitVec, vector.
        """
        data = bytes(data)
        mask = _padding_mask(length)
        if not strict and mask and data:
            data = data[:-1] + bytes([data[-1] & mask])
        return cls(length, data)

    @classmethod
    def from_positions(cls, length, positions):
        bits = np.zeros(length, dtype=np.uint8)
        bits[np.asarray(list(positions), dtype=np.int64)] = 1
        return cls.from_bits(bits)

    @classmethod
    def unit(cls, length, j):
        return cls.from_positions(length, [j])

    def to_array(self):
        """Packed storage as a read-only `uint8` array."""
        return np.frombuffer(self.bits, dtype=np.uint8)

    def to_bits(self):
        """Unpacked bits as a `uint8` array of length `self.length`."""
        return np.unpackbits(self.to_array(),
                             bitorder='little')[:self.length]

    def as_int(self):
        """Integer whose bit i is bit i of the vector."""
        return int.from_bytes(self.bits, 'little')

    @property
    def weight(self):
        return self.as_int().bit_count()

    def support(self):
        """Indices of the set bits."""
        return np.flatnonzero(self.to_bits())

    def __getitem__(self, i):
        if not 0 <= i < self.length:
            raise IndexError(f'Bit index {i} out of range.')
        return (self.bits[i // 8] >> (i % 8)) & 1

    def __len__(self):
        return self.length

    def __xor__(self, other):
        if not isinstance(other, BitVec):
            return NotImplemented
        if self.length != other.length:
            raise DimensionMismatch(f'Cannot XOR vectors of lengths '
                                    f'{self.length} and {other.length}.')
        value = self.as_int() ^ other.as_int()
        return BitVec(self.length, value.to_bytes(len(self.bits), 'little'))

    def flip(self, i):
        """Copy of the vector with bit `i` inverted."""
        return self ^ BitVec.unit(self.length, i)

    def concat(self, other):
        """Concatenation `self || other`."""
        return BitVec.from_bits(
            np.concatenate([self.to_bits(), other.to_bits()])
        )

    def slice(self, start, stop):
        return BitVec.from_bits(self.to_bits()[start:stop])


class BitMatrix:
    """
    Matrix over GF(2).

    :param rows: int, number of rows.
    :param cols: int, number of columns.
    :param data: numpy.ndarray, read-only `uint8` array of shape
        `(rows, ceil(cols / 8))`.
    """

    def __init__(self, rows, cols, data):
        """
        Create a new object of class `BitMatrix`.

        :param rows: int, number of rows.
        :param cols: int, number of columns.
        :param data: numpy.ndarray, packed rows of shape
            `(rows, ceil(cols / 8))`; copied.
        """
        data = np.array(data, dtype=np.uint8).reshape(rows, (cols + 7) // 8)
        mask = _padding_mask(cols)
        if mask and rows and np.any(data[:, -1] & np.uint8(~mask & 0xff)):
            raise ValueError('BitMatrix row padding bits must be zero.')
        data.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_bits(cls, bits):
        """
        :param bits: array-like, 2D array of zeros and ones.
        :return: BitMatrix, packed matrix.
        """
        bits = np.asarray(bits, dtype=np.uint8)
        rows, cols = bits.shape
        return cls(rows, cols, np.packbits(bits, axis=1, bitorder='little'))

    @classmethod
    def from_bytes(cls, data, rows, cols):
        row_bytes = (cols + 7) // 8
        if len(data) != rows * row_bytes:
            raise DimensionMismatch(
                f'{rows}x{cols} matrix needs {rows * row_bytes} bytes, got '
                f'{len(data)}.'
            )
        return cls(rows, cols, np.frombuffer(bytes(data), dtype=np.uint8))

    @classmethod
    def identity(cls, n):
        return cls.from_bits(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, np.zeros((rows, (cols + 7) // 8), np.uint8))

    def to_bits(self):
        """Unpacked `uint8` array of shape `(rows, cols)`."""
        return np.unpackbits(self.data, axis=1,
                             bitorder='little')[:, :self.cols]

    def to_bytes(self):
        return self.data.tobytes()

    def row(self, i):
        return BitVec(self.cols, self.data[i].tobytes())

    def column(self, j):
        return BitVec.from_bits((self.data[:, j // 8] >> (j % 8)) & 1)

    def transpose(self):
        return BitMatrix.from_bits(self.to_bits().T)

    @property
    def shape(self):
        return self.rows, self.cols

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and \
            np.array_equal(self.data, other.data)

    __hash__ = None

    def __repr__(self):
        return f'BitMatrix({self.rows}x{self.cols})'


@dataclass(frozen=True)
class Permutation:
    """
    Permutation stored as an index map: position `j` of the output takes
    input position `map[j]`.

    :param map: tuple, `n` distinct indices from `<0, n)`.
    """

    map: tuple

    def __post_init__(self):
        object.__setattr__(self, 'map', tuple(int(i) for i in self.map))
        if sorted(self.map) != list(range(len(self.map))):
            raise ValueError('Permutation map must be a bijection on '
                             '<0, n).')

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @property
    def n(self):
        return len(self.map)

    def as_array(self):
        return np.asarray(self.map, dtype=np.int64)

    def inverse(self):
        inverse = np.empty(self.n, dtype=np.int64)
        inverse[self.as_array()] = np.arange(self.n)
        return Permutation(tuple(inverse))


def vec_mat_transpose_mul(v, M):
    """
    Product `v * M^T`: bit i of the result is the parity of `v AND row i`.

    :param v: BitVec, vector of length `M.cols`.
    :param M: BitMatrix, matrix.
    :return: BitVec, vector of length `M.rows`.
    """
    if v.length != M.cols:
        raise DimensionMismatch(f'Vector of length {v.length} cannot be '
                                f'multiplied with the transpose of {M}.')
    if M.rows == 0:
        return BitVec.zeros(0)
    product = np.bitwise_and(M.data, v.to_array())
    return BitVec.from_bits(
        _PARITY[np.bitwise_xor.reduce(product, axis=1)]
    )


def mat_mul(A, B):
    """
    Matrix product over GF(2).

    :param A: BitMatrix, left factor.
    :param B: BitMatrix, right factor with `B.rows == A.cols`.
    :return: BitMatrix, `A * B`.
    """
    if A.cols != B.rows:
        raise DimensionMismatch(f'Cannot multiply {A} by {B}.')
    dtype = np.float32 if A.cols < 1 << 24 else np.float64
    product = A.to_bits().astype(dtype) @ B.to_bits().astype(dtype)
    return BitMatrix.from_bits((product.astype(np.int64) & 1)
                               .astype(np.uint8))


def _to_words(bits):
    """Pack a 0/1 matrix into little-endian 64-bit words per row."""
    rows, cols = bits.shape
    width = -(-cols // 64) * 64
    padded = np.zeros((rows, width), dtype=np.uint8)
    padded[:, :cols] = bits
    return np.packbits(padded, axis=1, bitorder='little').view('<u8')


def _from_words(words, cols):
    return np.unpackbits(words.view(np.uint8), axis=1,
                         bitorder='little')[:, :cols]


def _gauss_jordan(words, n_pivot_cols):
    """
    Reduce `words` in place to reduced row echelon form on its first
    `n_pivot_cols` columns.

    :return: list, pivot columns; pivot `i` sits in row `i`.
    """
    rows = words.shape[0]
    pivots = []
    for col in range(n_pivot_cols):
        rank = len(pivots)
        if rank == rows:
            break
        word, shift = divmod(col, 64)
        shift = np.uint64(shift)
        below = (words[rank:, word] >> shift) & np.uint64(1)
        candidates = np.flatnonzero(below)
        if candidates.size == 0:
            continue
        pivot = rank + candidates[0]
        if pivot != rank:
            words[[rank, pivot]] = words[[pivot, rank]]
        column = (words[:, word] >> shift) & np.uint64(1)
        column[rank] = 0
        targets = np.flatnonzero(column)
        if targets.size:
            words[targets] ^= words[rank]
        pivots.append(col)
    return pivots


def mat_rank(A):
    """Rank over GF(2), by elimination on a copy."""
    if A.rows == 0 or A.cols == 0:
        return 0
    return len(_gauss_jordan(_to_words(A.to_bits()), A.cols))


def mat_invert(A):
    """
    Inverse by Gauss-Jordan elimination of `[A | I]`.

    :param A: BitMatrix, square matrix.
    :return: BitMatrix, `A^-1`.
    """
    if A.rows != A.cols:
        raise DimensionMismatch(f'Only square matrices are invertible, got '
                                f'{A}.')
    n = A.rows
    augmented = np.hstack([A.to_bits(), np.eye(n, dtype=np.uint8)])
    words = _to_words(augmented)
    rank = len(_gauss_jordan(words, n))
    if rank < n:
        raise Singular(f'Matrix has rank {rank} < {n}.')
    return BitMatrix.from_bits(_from_words(words, 2 * n)[:, n:])


def random_invertible(dim, rng):
    """
    Uniformly random invertible matrix, by rejection sampling.

    :param dim: int, dimension, at least 1.
    :param rng: RandomSource, randomness.
    :return: BitMatrix, invertible `dim x dim` matrix.
    """
    if dim < 1:
        raise ValueError(f'Dimension must be positive, got `{dim}`.')
    attempts = 0
    while True:
        attempts += 1
        candidate = BitMatrix.from_bits(
            rng.random_bits(dim * dim).reshape(dim, dim)
        )
        if mat_rank(candidate) == dim:
            logger.debug(f'Invertible {dim}x{dim} matrix found after '
                         f'{attempts} attempts')
            return candidate


def random_permutation(n, rng):
    """
    Uniform permutation by Fisher-Yates shuffling.

    :param n: int, size, at least 1.
    :param rng: RandomSource, randomness.
    :return: Permutation, random permutation.
    """
    if n < 1:
        raise ValueError(f'Permutation size must be positive, got `{n}`.')
    indices = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.randbelow(i + 1)
        indices[i], indices[j] = indices[j], indices[i]
    return Permutation(tuple(indices))


def apply_permutation(v, P):
    """
    Row vector times permutation matrix: output bit `j` is `v[P.map[j]]`.

    :param v: BitVec, vector of length `P.n`.
    :param P: Permutation, permutation.
    :return: BitVec, permuted vector.
    """
    if v.length != P.n:
        raise DimensionMismatch(f'Vector of length {v.length} cannot be '
                                f'permuted by a permutation of size {P.n}.')
    return BitVec.from_bits(v.to_bits()[P.as_array()])


def apply_inverse_permutation(v, P):
    """Inverse of `apply_permutation`: output bit `P.map[j]` is `v[j]`."""
    if v.length != P.n:
        raise DimensionMismatch(f'Vector of length {v.length} cannot be '
                                f'permuted by a permutation of size {P.n}.')
    bits = np.empty(v.length, dtype=np.uint8)
    bits[P.as_array()] = v.to_bits()
    return BitVec.from_bits(bits)


def permute_columns(M, P):
    """
    Product `M * P` with `P` read as a permutation matrix: column `j` of
    the result is column `P.map[j]` of `M`.
    """
    if M.cols != P.n:
        raise DimensionMismatch(f'Cannot permute the columns of {M} by a '
                                f'permutation of size {P.n}.')
    return BitMatrix.from_bits(M.to_bits()[:, P.as_array()])


def permutation_matrix(P):
    """
    Dense permutation matrix with entry `(P.map[j], j)` set, so that
    `v * permutation_matrix(P) == apply_permutation(v, P)`.
    """
    bits = np.zeros((P.n, P.n), dtype=np.uint8)
    bits[P.as_array(), np.arange(P.n)] = 1
    return BitMatrix.from_bits(bits)
