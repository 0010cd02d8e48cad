"""
McEliece chameleon hash `CH(m, r) = (G(m) xor r) * Hpub^T` with the
masked public matrix `Hpub = S' * Hsec * P`.

Whoever knows `(P, S'^-1, code)` can unmask a target syndrome, decode it
with Patterson and map the error back through `P`, obtaining a second
randomizer for any new message whose masked syndrome is decodable.
"""
import logging
from dataclasses import dataclass
from mceliece_sss.binary_matrix import BitVec, BitMatrix, mat_mul, \
    mat_invert, random_invertible, random_permutation, permute_columns, \
    apply_permutation, vec_mat_transpose_mul
from mceliece_sss.digest_oracle import G_TAG
from mceliece_sss.exceptions import DimensionMismatch, \
    InternalConsistencyError, WeightMismatch
from mceliece_sss.goppa_code import generate_code, patterson_decode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChameleonPublic:
    """
    :param params: CodeParams, code parameters.
    :param Hpub: BitMatrix, masked `(n - k) x n` parity-check matrix.
    """

    params: object
    Hpub: BitMatrix


@dataclass(frozen=True)
class ChameleonSecret:
    """
    Trapdoor of one chameleon hash instance.

    :param P: Permutation, column permutation of size `n`.
    :param S_inv: BitMatrix, inverse of the scrambling matrix `S'`.
    :param code: GoppaCode, secret Goppa code.
    """

    P: object
    S_inv: BitMatrix
    code: object

    @property
    def params(self):
        return self.code.params


@dataclass(frozen=True)
class Randomizer:
    """
    :param r: BitVec, vector of length `n`, weight `t` in the scheme.
    """

    r: BitVec

    @property
    def weight(self):
        return self.r.weight


def ch_gen(params, rng):
    """
    Generate a chameleon hash key pair.

    :param params: CodeParams, code parameters.
    :param rng: RandomSource, randomness.
    :return: tuple, `(ChameleonPublic, ChameleonSecret)`.
    """
    code = generate_code(params, rng)
    S = random_invertible(params.redundancy, rng)
    P = random_permutation(params.n, rng)
    S_inv = mat_invert(S)
    if mat_mul(S_inv, S) != BitMatrix.identity(params.redundancy):
        raise InternalConsistencyError('Inverted scrambling matrix does not '
                                       'invert `S`.')
    Hpub = mat_mul(S, permute_columns(code.Hsec, P))
    logger.debug(f'Chameleon key pair generated for {params.name}')
    return ChameleonPublic(params, Hpub), ChameleonSecret(P, S_inv, code)


def verify_public_masking(pk, sk):
    """
    Check `Hpub = S' * Hsec * P` by recomputing the right side from the
    secret key.

    :param pk: ChameleonPublic, public key.
    :param sk: ChameleonSecret, candidate trapdoor.
    :return: bool, `True` if `sk` is the trapdoor of `pk`.
    """
    if pk.params != sk.params:
        return False
    S = mat_invert(sk.S_inv)
    return mat_mul(S, permute_columns(sk.code.Hsec, sk.P)) == pk.Hpub


def sample_fixed_weight(n, w, rng):
    """
    Draw a uniform vector of length `n` and weight exactly `w` by a
    partial Fisher-Yates shuffle of the positions.

    :param n: int, length.
    :param w: int, weight, at most `n`.
    :param rng: RandomSource, randomness.
    :return: BitVec, random vector.
    """
    if not 0 <= w <= n:
        raise ValueError(f'Weight `w={w}` must be in <0, n={n}>.')
    indices = list(range(n))
    for i in range(w):
        j = i + rng.randbelow(n - i)
        indices[i], indices[j] = indices[j], indices[i]
    return BitVec.from_positions(n, indices[:w])


def sample_randomizer(params, rng):
    """
    Draw a uniform randomizer of weight exactly `t`.

    :param params: CodeParams, code parameters.
    :param rng: RandomSource, randomness.
    :return: Randomizer, randomizer of weight `t`.
    """
    return Randomizer(sample_fixed_weight(params.n, params.t, rng))


def check_weight(params, r, exact_weight=True, block=None):
    """
    Enforce the randomizer weight rule.

    :param params: CodeParams, code parameters.
    :param r: Randomizer, randomizer.
    :param exact_weight: bool (default: True), require weight exactly `t`;
        otherwise at most `t`.
    :param block: int (default: None), block index reported on failure.
    """
    if r.r.length != params.n:
        raise DimensionMismatch(f'Randomizer must have {params.n} bits, got '
                                f'{r.r.length}.')
    weight = r.weight
    if weight > params.t or (exact_weight and weight != params.t):
        rule = 'exactly' if exact_weight else 'at most'
        raise WeightMismatch(f'Randomizer has weight {weight}, required '
                             f'{rule} {params.t}.',
                             weight=weight, expected=params.t, block=block)


def _preprocess(G, params, m):
    return G.digest(G_TAG, m, params.n)


def ch_hash(pk, G, m, r, exact_weight=True):
    """
    Chameleon hash `(G(m) xor r) * Hpub^T`.

    :param pk: ChameleonPublic, public key.
    :param G: DigestOracle, message preprocessing oracle.
    :param m: BitVec, message.
    :param r: Randomizer, randomizer.
    :param exact_weight: bool (default: True), whether `r` must have weight
        exactly `t` (otherwise at most `t`).
    :return: BitVec, digest of `n - k` bits.
    """
    check_weight(pk.params, r, exact_weight)
    return vec_mat_transpose_mul(_preprocess(G, pk.params, m) ^ r.r, pk.Hpub)


def ch_collide(sk, pk, G, m, r, m_new, exact_weight=True):
    """
    Find `r'` with `CH(m_new, r') = CH(m, r)` using the trapdoor.

    :param sk: ChameleonSecret, trapdoor of `pk`.
    :param pk: ChameleonPublic, public key.
    :param G: DigestOracle, message preprocessing oracle.
    :param m: BitVec, original message.
    :param r: Randomizer, original randomizer.
    :param m_new: BitVec, new message.
    :param exact_weight: bool (default: True), whether the decoded
        randomizer must have weight exactly `t`.
    :return: Randomizer, colliding randomizer.
    """
    params = pk.params
    check_weight(params, r, exact_weight)
    s_target = vec_mat_transpose_mul(
        _preprocess(G, params, m) ^ r.r ^ _preprocess(G, params, m_new),
        pk.Hpub
    )
    s_pp = vec_mat_transpose_mul(s_target, sk.S_inv)
    f = patterson_decode(sk.code, s_pp)
    if exact_weight and f.weight != params.t:
        raise WeightMismatch(f'Decoded error has weight {f.weight}, '
                             f'required exactly {params.t}.',
                             weight=f.weight, expected=params.t)
    r_new = apply_permutation(f, sk.P)
    if vec_mat_transpose_mul(r_new, pk.Hpub) != s_target:
        raise InternalConsistencyError('Collision does not reproduce the '
                                       'target syndrome.')
    return Randomizer(r_new)


def constructive_collision_input(m, r, f):
    """
    Message for which, under the identity oracle, `ch_collide(m, r, .)`
    decodes exactly to `f`.

    :param m: BitVec, original message of `n` bits.
    :param r: Randomizer, original randomizer.
    :param f: Randomizer, desired new randomizer of weight `t`.
    :return: BitVec, new message `m xor r xor f`.
    """
    return m ^ r.r ^ f.r


def forge_linear_collision(pk, x, r, rng):
    """
    Trapdoor-free collision attempt `x' = x xor r xor r'` for a fresh
    weight-`t` `r'`. It collides whenever `G` is linear and fails against
    a random oracle.

    :param pk: ChameleonPublic, public key.
    :param x: BitVec, original message of `n` bits.
    :param r: Randomizer, original randomizer.
    :param rng: RandomSource, randomness.
    :return: tuple, `(x', r')` candidate collision.
    """
    r_new = sample_randomizer(pk.params, rng)
    return x ^ r.r ^ r_new.r, r_new
