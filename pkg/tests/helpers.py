from functools import lru_cache
from mceliece_sss.chameleon_hash import ch_gen
from mceliece_sss.outer_signer import SimulatedDilithium2
from mceliece_sss.params import PARAMS
from mceliece_sss.random_source import SeededRandomSource
from mceliece_sss.sanitizable_signature import keygen


def get_rng(label):
    """
    Get a deterministic random source.

    :param label: str, label selecting the seed.
    :return: SeededRandomSource, random source.
    """
    return SeededRandomSource(f'tests/{label}')


@lru_cache(maxsize=None)
def get_chameleon_keys(params_name):
    """
    Get a chameleon hash key pair, generated once per parameter set.

    :param params_name: str, registry name.
    :return: tuple, `(ChameleonPublic, ChameleonSecret)`.
    """
    return ch_gen(PARAMS[params_name], get_rng(f'ch_gen/{params_name}'))


@lru_cache(maxsize=None)
def get_scheme_keys(params_name):
    """
    Get scheme keys, generated once per parameter set.

    :param params_name: str, registry name.
    :return: KeyPairs, keys generated with the simulated Dilithium2 signer.
    """
    return keygen(PARAMS[params_name], SimulatedDilithium2(),
                  get_rng(f'keygen/{params_name}'))


def flip_bit(data, bit):
    """
    Flip one bit of a byte string.

    :param data: bytes, input.
    :param bit: int, bit index, LSB-first within each byte.
    :return: bytes, copy with the bit flipped.
    """
    out = bytearray(data)
    out[bit // 8] ^= 1 << (bit % 8)
    return bytes(out)
