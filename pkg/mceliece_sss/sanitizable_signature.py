"""
Block-chained sanitizable signatures over two chameleon hash instances.

Block `i` is hashed as `x_i = h_{i-1} || M[i]` under the sanitizer's
instance if it is admissible and under the non-sanitizable instance
otherwise; the outer signature binds only the final link `h_L` and the
admissibility mask. A sanitizer rewriting an admissible block finds a
collision for its link, so `h_L` and the outer signature stay unchanged.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple
from mceliece_sss.binary_matrix import BitVec
from mceliece_sss.chameleon_hash import ChameleonPublic, ChameleonSecret, \
    ch_gen, ch_hash, ch_collide, check_weight, sample_randomizer, \
    verify_public_masking
from mceliece_sss.exceptions import DimensionMismatch, InvalidInput, \
    InternalConsistencyError, NotDecodable, WeightMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchemePublicKey:
    """
    :param params: CodeParams, parameters shared by both instances.
    :param outer_pk: bytes, public key of the outer signer.
    :param Hpub_non: ChameleonPublic, instance hashing immutable blocks.
    :param Hpub_san: ChameleonPublic, instance hashing admissible blocks.
    """

    params: object
    outer_pk: bytes
    Hpub_non: ChameleonPublic
    Hpub_san: ChameleonPublic

    def __post_init__(self):
        if self.Hpub_non.params != self.params or \
                self.Hpub_san.params != self.params:
            raise ValueError('Both chameleon instances must use the scheme '
                             'parameters.')


@dataclass(frozen=True)
class SanitizerKey:
    """
    Trapdoor of the sanitizable instance only.

    :param secret: ChameleonSecret, trapdoor of `Hpub_san`.
    """

    secret: ChameleonSecret


@dataclass(frozen=True)
class BlockMessage:
    """
    :param blocks: tuple, `L >= 1` blocks as BitVec objects of equal
        length.
    """

    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, 'blocks', tuple(self.blocks))
        if not self.blocks:
            raise ValueError('Message must consist of at least one block.')
        if len({block.length for block in self.blocks}) != 1:
            raise DimensionMismatch('All message blocks must have the same '
                                    'length.')

    @classmethod
    def random(cls, k, L, rng):
        return cls(tuple(rng.random_bitvec(k) for _ in range(L)))

    def __len__(self):
        return len(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    @property
    def block_bits(self):
        return self.blocks[0].length

    def with_block(self, i, block):
        """Copy of the message with block `i` replaced by `block`."""
        blocks = list(self.blocks)
        blocks[i] = block
        return BlockMessage(tuple(blocks))


@dataclass(frozen=True)
class AdmMask:
    """
    :param bits: tuple, `L` booleans, `True` marks an admissible block.
    """

    bits: tuple

    def __post_init__(self):
        object.__setattr__(self, 'bits', tuple(bool(b) for b in self.bits))

    @classmethod
    def from_string(cls, text):
        """
        Parse a comma separated list of zeros and ones, e.g. `'0,1,0'`.
        """
        values = [value.strip() for value in text.split(',')]
        if any(value not in ('0', '1') for value in values):
            raise ValueError(f'Admissibility mask `{text}` must be a comma '
                             f'separated list of 0 and 1.')
        return cls(tuple(value == '1' for value in values))

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def pack(self):
        """Bits packed LSB-first into `ceil(L / 8)` bytes."""
        return BitVec.from_bits([int(b) for b in self.bits]).bits

    def admissible_blocks(self):
        return [i for i, b in enumerate(self.bits) if b]


@dataclass(frozen=True)
class SanitizableSignature:
    """
    :param h_L: BitVec, last chain link of `n - k` bits.
    :param outer_sig: bytes, outer signature over `(h_L, adm)`.
    :param randomizers: tuple, one Randomizer per block.
    :param adm: AdmMask, admissibility mask.
    """

    h_L: BitVec
    outer_sig: bytes
    randomizers: tuple
    adm: AdmMask

    def __post_init__(self):
        object.__setattr__(self, 'randomizers', tuple(self.randomizers))

    @property
    def blocks(self):
        return len(self.randomizers)


class VerifyReason(Enum):
    OK = 'OK'
    SHAPE = 'Shape'
    WEIGHT_CHECK = 'WeightCheck'
    CHAIN_MISMATCH = 'ChainMismatch'
    OUTER_SIG = 'OuterSig'


@dataclass(frozen=True)
class VerifyResult:
    """
    Outcome of `verify`; truthy iff the signature was accepted.

    :param reason: VerifyReason, diagnostic code.
    :param block: int (default: None), offending block, if any.
    """

    reason: VerifyReason
    block: int = None

    @property
    def accepted(self):
        return self.reason is VerifyReason.OK

    def __bool__(self):
        return self.accepted


class KeyPairs(NamedTuple):
    public_key: SchemePublicKey
    signer_key: bytes
    sanitizer_key: SanitizerKey
    escrow: ChameleonSecret


def keygen(params, outer, rng):
    """
    Generate the scheme keys.

    :param params: CodeParams, code parameters.
    :param outer: OuterSigner, outer signature provider.
    :param rng: RandomSource, randomness.
    :return: KeyPairs, public key, outer secret key, sanitizer key and the
        escrowed trapdoor of the non-sanitizable instance, which no
        operation needs.
    """
    logger.info(f'Generating {params.name} keys (n={params.n}, '
                f'k={params.k}, t={params.t})')
    outer_pk, outer_sk = outer.keygen(rng)
    non_pk, non_sk = ch_gen(params, rng)
    logger.info('Non-sanitizable instance generated')
    san_pk, san_sk = ch_gen(params, rng)
    logger.info('Sanitizable instance generated')
    if not (verify_public_masking(non_pk, non_sk) and
            verify_public_masking(san_pk, san_sk)):
        raise InternalConsistencyError('Public matrix does not match its '
                                       'trapdoor.')
    return KeyPairs(SchemePublicKey(params, outer_pk, non_pk, san_pk),
                    outer_sk, SanitizerKey(san_sk), non_sk)


def outer_payload(h_L, adm):
    """
    Bytes signed by the outer signer: packed `h_L`, packed `adm`, then the
    block count as a 4-byte little-endian integer.
    """
    return h_L.bits + adm.pack() + len(adm).to_bytes(4, 'little')


def _check_shape(pk, M, adm, randomizers):
    params = pk.params
    if not len(M) == len(adm) == len(randomizers):
        raise DimensionMismatch(f'Message has {len(M)} blocks, mask '
                                f'{len(adm)} and randomizer list '
                                f'{len(randomizers)}.')
    if M.block_bits != params.k:
        raise DimensionMismatch(f'Message blocks must have {params.k} bits, '
                                f'got {M.block_bits}.')


def _instance(pk, adm, i):
    return pk.Hpub_san if adm[i] else pk.Hpub_non


def chain_digest(pk, G, M, adm, randomizers):
    """
    Compute the hash chain `h_0 = 0`, `h_i = CH(h_{i-1} || M[i], r_i)`.

    :param pk: SchemePublicKey, public key.
    :param G: DigestOracle, message preprocessing oracle.
    :param M: BlockMessage, message.
    :param adm: AdmMask, admissibility mask.
    :param randomizers: sequence, one Randomizer per block.
    :return: tuple, `(h_list, h_L)` where `h_list[i]` is `h_i` for
        `i = 0 ... L`.
    """
    _check_shape(pk, M, adm, randomizers)
    params = pk.params
    h_list = [BitVec.zeros(params.redundancy)]
    for i, (block, r) in enumerate(zip(M.blocks, randomizers)):
        check_weight(params, r, block=i)
        x = h_list[-1].concat(block)
        h_list.append(ch_hash(_instance(pk, adm, i), G, x, r))
    return h_list, h_list[-1]


def sign(signer_sk, pk, outer, G, M, adm, rng):
    """
    Sign a block message.

    :param signer_sk: bytes, outer secret key.
    :param pk: SchemePublicKey, public key.
    :param outer: OuterSigner, outer signature provider.
    :param G: DigestOracle, message preprocessing oracle.
    :param M: BlockMessage, message.
    :param adm: AdmMask, admissibility mask.
    :param rng: RandomSource, randomness.
    :return: SanitizableSignature, signature.
    """
    if len(M) != len(adm):
        raise InvalidInput(f'Message has {len(M)} blocks but the mask has '
                           f'{len(adm)} entries.')
    randomizers = tuple(sample_randomizer(pk.params, rng) for _ in M.blocks)
    _, h_L = chain_digest(pk, G, M, adm, randomizers)
    outer_sig = outer.sign(signer_sk, outer_payload(h_L, adm))
    logger.info(f'Signed {len(M)} blocks, {len(adm.admissible_blocks())} '
                f'admissible')
    return SanitizableSignature(h_L, outer_sig, randomizers, adm)


def verify(pk, outer, G, M, sigma):
    """
    Verify a signature; never raises for a bad signature.

    :param pk: SchemePublicKey, public key.
    :param outer: OuterSigner, outer signature provider.
    :param G: DigestOracle, message preprocessing oracle.
    :param M: BlockMessage, message.
    :param sigma: SanitizableSignature, signature.
    :return: VerifyResult, truthy iff accepted.
    """
    params = pk.params
    try:
        _check_shape(pk, M, sigma.adm, sigma.randomizers)
    except DimensionMismatch:
        return VerifyResult(VerifyReason.SHAPE)
    if sigma.h_L.length != params.redundancy or \
            any(r.r.length != params.n for r in sigma.randomizers):
        return VerifyResult(VerifyReason.SHAPE)
    for i, r in enumerate(sigma.randomizers):
        if r.weight != params.t:
            return VerifyResult(VerifyReason.WEIGHT_CHECK, block=i)
    _, h_L = chain_digest(pk, G, M, sigma.adm, sigma.randomizers)
    if h_L != sigma.h_L:
        return VerifyResult(VerifyReason.CHAIN_MISMATCH)
    if not outer.verify(pk.outer_pk, outer_payload(h_L, sigma.adm),
                        sigma.outer_sig):
        return VerifyResult(VerifyReason.OUTER_SIG)
    return VerifyResult(VerifyReason.OK)


def sanitize(san_key, pk, outer, G, M, sigma, M_new):
    """
    Rewrite admissible blocks while keeping `h_L` and the outer signature.

    Modified blocks are processed in ascending order; all other
    randomizers are kept.

    :param san_key: SanitizerKey, trapdoor of the sanitizable instance.
    :param pk: SchemePublicKey, public key.
    :param outer: OuterSigner, outer signature provider.
    :param G: DigestOracle, message preprocessing oracle.
    :param M: BlockMessage, signed message.
    :param sigma: SanitizableSignature, valid signature on `M`.
    :param M_new: BlockMessage, new message.
    :return: SanitizableSignature, signature on `M_new`.
    """
    result = verify(pk, outer, G, M, sigma)
    if not result:
        raise InvalidInput(f'Signature does not verify on the original '
                           f'message: {result.reason.value}.')
    if len(M_new) != len(M) or M_new.block_bits != M.block_bits:
        raise InvalidInput('New message must have the shape of the original '
                           'message.')
    modified = [i for i in range(len(M)) if M[i] != M_new[i]]
    immutable = [i for i in modified if not sigma.adm[i]]
    if immutable:
        raise InvalidInput(f'Blocks {immutable} are not admissible.')
    if not modified:
        return sigma

    h_list, _ = chain_digest(pk, G, M, sigma.adm, sigma.randomizers)
    randomizers = list(sigma.randomizers)
    for i in modified:
        x_old = h_list[i].concat(M[i])
        x_new = h_list[i].concat(M_new[i])
        try:
            randomizers[i] = ch_collide(san_key.secret, pk.Hpub_san, G,
                                        x_old, randomizers[i], x_new)
        except NotDecodable as e:
            logger.warning(f'Block {i} has no decodable collision')
            raise NotDecodable(str(e), block=i) from e
        except WeightMismatch as e:
            logger.warning(f'Block {i} collision has weight {e.weight}')
            raise WeightMismatch(str(e), weight=e.weight,
                                 expected=e.expected, block=i) from e
        logger.debug(f'Collision found for block {i}')

    h_new, _ = chain_digest(pk, G, M_new, sigma.adm, randomizers)
    for j in range(modified[0] + 1, len(h_new)):
        if h_new[j] != h_list[j]:
            raise InternalConsistencyError(
                f'Sanitized chain diverges from the signed chain at link '
                f'{j}.'
            )
    logger.info(f'Sanitized blocks {modified}')
    return SanitizableSignature(sigma.h_L, sigma.outer_sig, randomizers,
                                sigma.adm)
