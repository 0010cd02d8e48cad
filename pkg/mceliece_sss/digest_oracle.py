import hashlib
import logging
from abc import ABC, abstractmethod
from mceliece_sss.binary_matrix import BitVec
from mceliece_sss.exceptions import DimensionMismatch

# Domain separation tag of the message preprocessing function G.
G_TAG = 0x01


class DigestOracle(ABC):
    """DigestOracle abstract class, the random oracle `G`."""

    @abstractmethod
    def digest(self, context_tag, data, out_bits):
        """
        Hash `data` to a vector of `out_bits` bits.

        :param context_tag: int, one byte domain separation tag.
        :param data: BitVec, input bits.
        :param out_bits: int, output length.
        :return: BitVec, digest of exactly `out_bits` bits.
        """
        pass


class Shake256Oracle(DigestOracle):
    """
    Production oracle. The digest is SHAKE-256 of
    `tag || params_id || packed data` squeezed to `ceil(out_bits / 8)`
    bytes, with the padding bits of the last byte cleared.

    :param params_id: int, identifier of the parameter set.
    """

    def __init__(self, params_id):
        self.params_id = params_id

    def digest(self, context_tag, data, out_bits):
        xof = hashlib.shake_256(bytes([context_tag, self.params_id]))
        xof.update(data.bits)
        return BitVec.from_bytes(xof.digest((out_bits + 7) // 8), out_bits,
                                 strict=False)


class IdentityOracle(DigestOracle):
    """
    Test-only oracle returning its input unchanged. With it the chameleon
    hash is linear in the message and collisions can be constructed
    without the trapdoor.
    """

    def __init__(self):
        self._logger = logging.getLogger(__name__).getChild(
            self.__class__.__name__)
        self._logger.warning('Identity digest oracle in use, digests are '
                             'NOT a random oracle')

    def digest(self, context_tag, data, out_bits):
        if data.length != out_bits:
            raise DimensionMismatch(f'Identity oracle needs an input of '
                                    f'{out_bits} bits, got {data.length}.')
        return data


class RecordingOracle(DigestOracle):
    """
    Wrapper remembering every query made to an inner oracle. Not thread
    safe.

    :param inner: DigestOracle, oracle answering the queries.
    :param queries: list, tuples `(context_tag, data, out_bits)` in query
        order.
    """

    def __init__(self, inner):
        self.inner = inner
        self.queries = []

    def digest(self, context_tag, data, out_bits):
        self.queries.append((context_tag, data, out_bits))
        return self.inner.digest(context_tag, data, out_bits)


oracle_mapping = {
    'shake256': lambda params: Shake256Oracle(params.params_id),
    'identity': lambda params: IdentityOracle(),
}


def make_oracle(name, params):
    """
    Instantiate an oracle by its command-line name.

    :param name: str, key of `oracle_mapping`.
    :param params: CodeParams, parameter set the oracle serves.
    :return: DigestOracle, new oracle.
    """
    if name not in oracle_mapping:
        raise ValueError(f'Allowed values for `name` are '
                         f'{list(oracle_mapping)}.')
    return oracle_mapping[name](params)
