import hashlib
import secrets
from abc import ABC, abstractmethod
import numpy as np
from mceliece_sss.binary_matrix import BitVec


class RandomSource(ABC):
    """
    RandomSource abstract class.

    Every randomized operation of the package draws from an explicit
    `RandomSource`; no module-level random state is used.
    """

    @abstractmethod
    def random_bytes(self, k):
        """
        Draw uniformly random bytes.

        :param k: int, number of bytes.
        :return: bytes, `k` random bytes.
        """
        pass

    @abstractmethod
    def spawn(self, label):
        """
        Derive an independent source, e.g. for a worker process.

        :param label: str, label distinguishing the derived source.
        :return: RandomSource, new source.
        """
        pass

    def randbelow(self, n):
        """
        Draw a uniform integer from `<0, n)` by rejection sampling.

        :param n: int, exclusive upper bound, positive.
        :return: int, random integer.
        """
        if n <= 0:
            raise ValueError(f'Upper bound must be positive, got `{n}`.')
        if n == 1:
            return 0
        n_bits = (n - 1).bit_length()
        n_bytes = (n_bits + 7) // 8
        mask = (1 << n_bits) - 1
        while True:
            value = int.from_bytes(self.random_bytes(n_bytes), 'little') & mask
            if value < n:
                return value

    def random_bits(self, count):
        """
        Draw independent uniform bits.

        :param count: int, number of bits.
        :return: numpy.ndarray, `uint8` array of zeros and ones.
        """
        data = np.frombuffer(self.random_bytes((count + 7) // 8),
                             dtype=np.uint8)
        return np.unpackbits(data, bitorder='little')[:count]

    def random_bitvec(self, length):
        """
        :param length: int, number of bits.
        :return: BitVec, uniformly random vector.
        """
        return BitVec.from_bits(self.random_bits(length))


class SystemRandomSource(RandomSource):
    """Random source backed by the operating system CSPRNG."""

    def random_bytes(self, k):
        return secrets.token_bytes(k)

    def spawn(self, label):
        return SystemRandomSource()


class SeededRandomSource(RandomSource):
    """
    Deterministic random source expanding a seed with SHAKE-256 in
    counter mode.

    :param seed: bytes, seed to be expanded.
    """

    _block_size = 4096

    def __init__(self, seed):
        """
        Create a new object of class `SeededRandomSource`.

        :param seed: bytes|str|int, seed to be expanded. Strings are
            UTF-8 encoded, integers are encoded as 8 little-endian bytes.
        """
        if isinstance(seed, str):
            seed = seed.encode()
        elif isinstance(seed, int):
            seed = seed.to_bytes(8, 'little')
        self.seed = bytes(seed)
        self._counter = 0
        self._buffer = bytearray()

    def random_bytes(self, k):
        while len(self._buffer) < k:
            block = hashlib.shake_256(
                b'mceliece-sss/rng' + self._counter.to_bytes(8, 'little') +
                self.seed
            ).digest(self._block_size)
            self._buffer.extend(block)
            self._counter += 1
        out = bytes(self._buffer[:k])
        del self._buffer[:k]
        return out

    def spawn(self, label):
        return SeededRandomSource(
            hashlib.sha3_256(self.seed + b'/' + label.encode()).digest()
        )


def random_source_from_seed(seed_hex=None):
    """
    Select the random source configured on the command line.

    :param seed_hex: str (default: None), hexadecimal seed. If `None`
        the operating system CSPRNG is used.
    :return: RandomSource, selected source.
    """
    if seed_hex is None:
        return SystemRandomSource()
    try:
        return SeededRandomSource(bytes.fromhex(seed_hex))
    except ValueError as e:
        raise ValueError(f'Seed `{seed_hex}` is not hexadecimal.') from e
