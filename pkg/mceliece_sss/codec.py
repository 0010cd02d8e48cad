"""
Byte formats of keys and signatures.

Every encoding starts with the 7-byte header `'MCSS' | version | kind |
params_id`. Bit vectors and matrix rows are packed LSB-first, integers
are little-endian. FORMAT.md lists every field with its offset.
"""
import logging
import struct
from functools import wraps
from dataclasses import dataclass
import numpy as np
from mceliece_sss.binary_matrix import BitVec, BitMatrix, Permutation, \
    mat_invert
from mceliece_sss.chameleon_hash import ChameleonPublic, ChameleonSecret, \
    Randomizer, check_weight
from mceliece_sss.exceptions import MalformedInput, WeightMismatch
from mceliece_sss.galois_field import FieldPoly, get_field, is_irreducible
from mceliece_sss.goppa_code import GoppaCode
from mceliece_sss.outer_signer import SimulatedDilithium2
from mceliece_sss.params import PARAMS_BY_ID
from mceliece_sss.sanitizable_signature import AdmMask, \
    SanitizableSignature, SanitizerKey, SchemePublicKey

logger = logging.getLogger(__name__)

MAGIC = b'MCSS'
VERSION = 1

KIND_PUBLIC_KEY = 0x01
KIND_SIGNER_KEY = 0x02
KIND_SANITIZER_KEY = 0x03
KIND_SIGNATURE = 0x04
KIND_ESCROW = 0x05

KIND_NAMES = {
    KIND_PUBLIC_KEY: 'public key',
    KIND_SIGNER_KEY: 'signer secret key',
    KIND_SANITIZER_KEY: 'sanitizer secret key',
    KIND_SIGNATURE: 'signature',
    KIND_ESCROW: 'escrowed non-sanitizable secret key',
}

_HEADER = struct.Struct('<4sBBB')
HEADER_BYTES = _HEADER.size
_COUNT = struct.Struct('<I')


@dataclass(frozen=True)
class WireHeader:
    magic: bytes
    version: int
    kind: int
    params_id: int

    @property
    def params(self):
        return PARAMS_BY_ID[self.params_id]

    def pack(self):
        return _HEADER.pack(self.magic, self.version, self.kind,
                            self.params_id)


@dataclass(frozen=True)
class SizeReport:
    """
    Payload sizes in bytes, header excluded.

    :param pk_bytes: int, public key payload.
    :param sig_bytes: int, signature payload for `blocks` blocks.
    :param per_block_bytes: int, signature growth per block.
    :param header_bytes: int, header length added to every encoding.
    :param blocks: int, number of blocks `sig_bytes` refers to.
    """

    pk_bytes: int
    sig_bytes: int
    per_block_bytes: int
    header_bytes: int
    blocks: int


def size_report(params, L, outer):
    """
    Closed-form encoding sizes.

    :param params: CodeParams, code parameters.
    :param L: int, number of blocks.
    :param outer: OuterSigner, outer signature provider.
    :return: SizeReport, sizes.
    """
    row_bytes = (params.n + 7) // 8
    pk = 2 * params.redundancy * row_bytes + outer.pk_bytes
    sig = _COUNT.size + (L + 7) // 8 + (params.redundancy + 7) // 8 + \
        L * row_bytes + outer.sig_bytes
    return SizeReport(pk, sig, row_bytes, HEADER_BYTES, L)


class _Reader:
    """Sequential reader failing with MalformedInput on truncation."""

    def __init__(self, data, offset=0):
        self.data = data
        self.offset = offset

    def take(self, size, what):
        if size < 0 or self.offset + size > len(self.data):
            raise MalformedInput(f'Truncated input while reading {what} at '
                                 f'offset {self.offset}.')
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def finish(self):
        if self.offset != len(self.data):
            raise MalformedInput(f'{len(self.data) - self.offset} trailing '
                                 f'bytes after offset {self.offset}.')


def read_header(data, expected_kind=None):
    """
    Parse and validate the header.

    :param data: bytes, encoding.
    :param expected_kind: int (default: None), required kind, if any.
    :return: WireHeader, parsed header.
    """
    if len(data) < HEADER_BYTES:
        raise MalformedInput(f'Input of {len(data)} bytes is shorter than '
                             f'the header.')
    header = WireHeader(*_HEADER.unpack_from(data))
    if header.magic != MAGIC:
        raise MalformedInput(f'Bad magic {header.magic!r}.')
    if header.version != VERSION:
        raise MalformedInput(f'Unsupported version {header.version}.')
    if header.kind not in KIND_NAMES:
        raise MalformedInput(f'Unknown kind {header.kind:#04x}.')
    if header.params_id not in PARAMS_BY_ID:
        raise MalformedInput(f'Unknown parameter set id {header.params_id}.')
    if expected_kind is not None and header.kind != expected_kind:
        raise MalformedInput(f'Expected a {KIND_NAMES[expected_kind]}, got a '
                             f'{KIND_NAMES[header.kind]}.')
    return header


def _header(kind, params):
    return WireHeader(MAGIC, VERSION, kind, params.params_id).pack()


def _decoding(decode):
    """Map invariant violations found while decoding to MalformedInput."""

    @wraps(decode)
    def wrapper(data, *args, **kwargs):
        try:
            return decode(bytes(data), *args, **kwargs)
        except (MalformedInput, WeightMismatch):
            raise
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedInput(str(e)) from e

    return wrapper


def encode_public_key(pk):
    """
    :param pk: SchemePublicKey, public key.
    :return: bytes, header, outer public key, `Hpub_non`, `Hpub_san`.
    """
    return _header(KIND_PUBLIC_KEY, pk.params) + pk.outer_pk + \
        pk.Hpub_non.Hpub.to_bytes() + pk.Hpub_san.Hpub.to_bytes()


@_decoding
def decode_public_key(data, outer=None):
    """
    :param data: bytes, encoding produced by `encode_public_key`.
    :param outer: OuterSigner (default: None), provider fixing the outer
        public key length; simulated Dilithium2 if `None`.
    :return: SchemePublicKey, public key.
    """
    outer = SimulatedDilithium2() if outer is None else outer
    params = read_header(data, KIND_PUBLIC_KEY).params
    reader = _Reader(data, HEADER_BYTES)
    rows, cols = params.redundancy, params.n
    matrix_bytes = rows * ((cols + 7) // 8)
    outer_pk = reader.take(outer.pk_bytes, 'outer public key')
    H_non = BitMatrix.from_bytes(reader.take(matrix_bytes, 'Hpub_non'),
                                 rows, cols)
    H_san = BitMatrix.from_bytes(reader.take(matrix_bytes, 'Hpub_san'),
                                 rows, cols)
    reader.finish()
    return SchemePublicKey(params, outer_pk, ChameleonPublic(params, H_non),
                           ChameleonPublic(params, H_san))


def encode_signature(sigma, params):
    """
    :param sigma: SanitizableSignature, signature.
    :param params: CodeParams, parameters of the signing key.
    :return: bytes, header, `L`, adm, `h_L`, randomizers, outer signature.
    """
    for i, r in enumerate(sigma.randomizers):
        check_weight(params, r, block=i)
    return b''.join([
        _header(KIND_SIGNATURE, params),
        _COUNT.pack(sigma.blocks),
        sigma.adm.pack(),
        sigma.h_L.bits,
        *(r.r.bits for r in sigma.randomizers),
        sigma.outer_sig,
    ])


@_decoding
def decode_signature(data, outer=None):
    """
    :param data: bytes, encoding produced by `encode_signature`.
    :param outer: OuterSigner (default: None), provider fixing the outer
        signature length; simulated Dilithium2 if `None`.
    :return: SanitizableSignature, signature whose randomizers all have
        weight `t`.
    """
    outer = SimulatedDilithium2() if outer is None else outer
    params = read_header(data, KIND_SIGNATURE).params
    reader = _Reader(data, HEADER_BYTES)
    (L,) = _COUNT.unpack(reader.take(_COUNT.size, 'block count'))
    if L < 1:
        raise MalformedInput('Signature must cover at least one block.')
    expected = size_report(params, L, outer).sig_bytes
    if len(data) - HEADER_BYTES != expected:
        raise MalformedInput(f'Signature over {L} blocks needs {expected} '
                             f'payload bytes, got {len(data) - HEADER_BYTES}.')
    adm = AdmMask(tuple(BitVec(L, reader.take((L + 7) // 8, 'adm'))
                        .to_bits().astype(bool)))
    h_L = BitVec(params.redundancy,
                 reader.take((params.redundancy + 7) // 8, 'h_L'))
    row_bytes = (params.n + 7) // 8
    randomizers = []
    for i in range(L):
        r = Randomizer(BitVec(params.n, reader.take(row_bytes,
                                                    f'randomizer {i}')))
        check_weight(params, r, block=i)
        randomizers.append(r)
    outer_sig = reader.take(outer.sig_bytes, 'outer signature')
    reader.finish()
    return SanitizableSignature(h_L, outer_sig, tuple(randomizers), adm)


def encode_signer_key(signer_sk, params):
    """
    :param signer_sk: bytes, outer secret key.
    :param params: CodeParams, parameters of the key pair.
    :return: bytes, header followed by the outer secret key.
    """
    return _header(KIND_SIGNER_KEY, params) + bytes(signer_sk)


@_decoding
def decode_signer_key(data, outer=None):
    outer = SimulatedDilithium2() if outer is None else outer
    read_header(data, KIND_SIGNER_KEY)
    reader = _Reader(data, HEADER_BYTES)
    signer_sk = reader.take(outer.sk_bytes, 'outer secret key')
    reader.finish()
    return signer_sk


def _encode_secret(kind, secret):
    code = secret.code
    params = code.params
    g = np.array([code.g[i] for i in range(params.t + 1)], dtype='<u2')
    return b''.join([
        _header(kind, params),
        secret.P.as_array().astype('<u4').tobytes(),
        secret.S_inv.to_bytes(),
        g.tobytes(),
        np.asarray(code.support, dtype='<u2').tobytes(),
        bytes([params.m]),
    ])


def _decode_secret(data, kind):
    params = read_header(data, kind).params
    reader = _Reader(data, HEADER_BYTES)
    n, t, rows = params.n, params.t, params.redundancy
    P = Permutation(np.frombuffer(reader.take(4 * n, 'P'), dtype='<u4'))
    S_inv = BitMatrix.from_bytes(
        reader.take(rows * ((rows + 7) // 8), 'S_inv'), rows, rows
    )
    g = np.frombuffer(reader.take(2 * (t + 1), 'g'), dtype='<u2')
    support = np.frombuffer(reader.take(2 * n, 'support'), dtype='<u2')
    (field_id,) = reader.take(1, 'field id')
    reader.finish()

    if field_id != params.m:
        raise MalformedInput(f'Field id {field_id} does not match m='
                             f'{params.m}.')
    mat_invert(S_inv)
    field = get_field(params.m)
    if g[-1] != 1 or np.any(g >= field.order):
        raise MalformedInput('Goppa polynomial must be monic with '
                             'coefficients in the field.')
    g = FieldPoly(tuple(int(c) for c in g))
    if not is_irreducible(g, field):
        raise MalformedInput('Goppa polynomial is reducible.')
    code = GoppaCode(params, g, support)
    return ChameleonSecret(P, S_inv, code)


def encode_sanitizer_key(san_key):
    """
    :param san_key: SanitizerKey, sanitizer trapdoor.
    :return: bytes, header, `P`, `S_inv`, `g`, support, field id.
    """
    return _encode_secret(KIND_SANITIZER_KEY, san_key.secret)


@_decoding
def decode_sanitizer_key(data):
    return SanitizerKey(_decode_secret(data, KIND_SANITIZER_KEY))


def encode_escrow(secret):
    """
    :param secret: ChameleonSecret, trapdoor of the non-sanitizable
        instance.
    :return: bytes, same layout as a sanitizer key with kind 0x05.
    """
    return _encode_secret(KIND_ESCROW, secret)


@_decoding
def decode_escrow(data):
    return _decode_secret(data, KIND_ESCROW)


_decoders = {
    KIND_PUBLIC_KEY: lambda data, outer: decode_public_key(data, outer),
    KIND_SIGNER_KEY: lambda data, outer: decode_signer_key(data, outer),
    KIND_SANITIZER_KEY: lambda data, outer: decode_sanitizer_key(data),
    KIND_SIGNATURE: lambda data, outer: decode_signature(data, outer),
    KIND_ESCROW: lambda data, outer: decode_escrow(data),
}


def decode_any(data, outer=None):
    """
    Decode an encoding of any kind.

    :param data: bytes, encoding.
    :param outer: OuterSigner (default: None), outer signature provider.
    :return: tuple, `(WireHeader, decoded object)`.
    """
    header = read_header(bytes(data))
    return header, _decoders[header.kind](data, outer)
