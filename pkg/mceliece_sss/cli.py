import argparse
import logging
import numpy as np
from mceliece_sss.analysis import delta_exact, weight_ratio, \
    decodable_density_exact
from mceliece_sss.binary_matrix import BitVec
from mceliece_sss.exceptions import InvalidInput
from mceliece_sss.params import PARAMS
from mceliece_sss.sanitizable_signature import AdmMask, BlockMessage

logging_level_mapping = {
    'critical': logging.CRITICAL,
    'error': logging.ERROR,
    'warning': logging.WARNING,
    'info': logging.INFO,
    'debug': logging.DEBUG
}
params_mapping = PARAMS
analysis_mapping = {
    'delta': lambda n, t, redundancy: delta_exact(n, t),
    'ratio': lambda n, t, redundancy: weight_ratio(n, t),
    'density': decodable_density_exact,
}

USAGE_ERROR = 4


class MyArgumentParser(argparse.ArgumentParser):
    """
    Class representing custom argument parser.

    Arguments read from `@file` may be given several per line, and usage
    errors exit with status 4.
    """

    def convert_arg_line_to_args(self, arg_line):
        return arg_line.split()

    def error(self, message):
        self.print_usage()
        self.exit(USAGE_ERROR, f'{self.prog}: error: {message}\n')


class MappingAction(argparse.Action):
    """Action for storing mapped value in dictionary."""

    def __init__(
        self,
        option_strings,
        mapping,
        choices=None,
        default=None,
        type=str,
        required=True,
        *args,
        **kwargs
    ):
        self._mapping = mapping
        super().__init__(
            option_strings=option_strings,
            choices=list(mapping),
            default=self._mapping.get(default),
            type=type,
            required=required,
            *args,
            **kwargs
        )

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, self._mapping.get(values))


def comma_list(mapping=None, item_type=str):
    """
    Argument type for comma separated lists, e.g. `nano,toy` or `1,5,10`.

    :param mapping: dict (default: None), mapping applied to every item.
    :param item_type: callable (default: str), conversion of every item.
    :return: callable, argparse type function.
    """

    def parse(text):
        try:
            items = [item_type(item.strip()) for item in text.split(',')]
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from e
        if mapping is None:
            return items
        unknown = [item for item in items if item not in mapping]
        if unknown:
            raise argparse.ArgumentTypeError(
                f'Allowed values are {list(mapping)}, got {unknown}.'
            )
        return [mapping[item] for item in items]

    return parse


def message_to_blocks(data, k):
    """
    Split raw bytes into `k`-bit blocks after 10* padding: the bits of
    `data` (LSB-first per byte) are followed by a single 1 and then zeros
    up to a multiple of `k`.

    :param data: bytes, message.
    :param k: int, block length in bits.
    :return: BlockMessage, padded message.
    """
    bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8),
                         bitorder='little')
    L = bits.size // k + 1
    padded = np.zeros(L * k, dtype=np.uint8)
    padded[:bits.size] = bits
    padded[bits.size] = 1
    return BlockMessage(tuple(BitVec.from_bits(block)
                              for block in padded.reshape(L, k)))


def read_message(path, k):
    with open(path, 'rb') as f:
        return message_to_blocks(f.read(), k)


def parse_adm(text, blocks):
    """
    :param text: str, comma separated zeros and ones.
    :param blocks: int, number of message blocks.
    :return: AdmMask, mask with one entry per block.
    """
    try:
        adm = AdmMask.from_string(text)
    except ValueError as e:
        raise InvalidInput(str(e)) from e
    if len(adm) != blocks:
        raise InvalidInput(f'Admissibility mask has {len(adm)} entries but '
                           f'the message has {blocks} blocks.')
    return adm
