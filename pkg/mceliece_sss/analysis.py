"""
Exact transparency figures and Monte-Carlo trials of the randomizer
distributions.
"""
import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
import numpy as np
import pandas as pd
from mceliece_sss.chameleon_hash import Randomizer, ch_gen, ch_collide, \
    sample_fixed_weight, sample_randomizer
from mceliece_sss.digest_oracle import make_oracle
from mceliece_sss.exceptions import InvalidInput, NotDecodable, \
    WeightMismatch
from mceliece_sss.outer_signer import SimulatedDilithium2
from mceliece_sss.sanitizable_signature import AdmMask, BlockMessage, \
    keygen, sign, sanitize

logger = logging.getLogger(__name__)

# Exact rationals; Fraction keeps lowest terms and a positive denominator.
ExactRatio = Fraction


def _check_n_t(n, t):
    if not 0 <= t <= n:
        raise ValueError(f'Weight `t={t}` must be in <0, n={n}>.')


def ball_size(n, t):
    """Number of vectors of length `n` and weight at most `t`."""
    return sum(math.comb(n, j) for j in range(t + 1))


def weight_ratio(n, t):
    """
    Probability that a decodable syndrome decodes to weight exactly `t`,
    `C(n, t) / sum_{j <= t} C(n, j)`.

    :param n: int, code length.
    :param t: int, error weight.
    :return: Fraction, exact ratio.
    """
    _check_n_t(n, t)
    return Fraction(math.comb(n, t), ball_size(n, t))


def delta_exact(n, t):
    """
    Statistical distance between the weight-`t` sphere and the weight-`<= t`
    ball, `1 - weight_ratio(n, t)`.

    :param n: int, code length.
    :param t: int, error weight.
    :return: Fraction, exact distance.
    """
    return 1 - weight_ratio(n, t)


def decodable_density(params):
    """
    Fraction of syndromes within the decoding radius,
    `sum_{j <= t} C(n, j) / 2^(n - k)`.

    :param params: CodeParams, code parameters.
    :return: Fraction, exact density.
    """
    return decodable_density_exact(params.n, params.t, params.redundancy)


def decodable_density_exact(n, t, redundancy):
    """`decodable_density` for explicit `n`, `t` and `n - k`."""
    _check_n_t(n, t)
    return Fraction(ball_size(n, t), 2 ** redundancy)


def format_ratio(value, digits=12):
    """
    Decimal expansion of an exact ratio.

    :param value: Fraction, ratio.
    :param digits: int (default: 12), significant digits.
    :return: str, rounded decimal.
    """
    with localcontext() as context:
        context.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def weight_distribution_relaxed(n, t):
    """
    Distribution of the decoded weight for a uniformly random decodable
    syndrome: weight `j` has probability `C(n, j) / sum_{i <= t} C(n, i)`.

    :param n: int, code length.
    :param t: int, error weight.
    :return: pandas.Series, probabilities indexed by weight.
    """
    _check_n_t(n, t)
    total = ball_size(n, t)
    return pd.Series(
        [float(Fraction(math.comb(n, j), total)) for j in range(t + 1)],
        index=pd.RangeIndex(t + 1, name='weight'),
        name='probability'
    )


def weight_histogram(vectors):
    """
    :param vectors: iterable, BitVec or Randomizer objects.
    :return: pandas.Series, counts indexed by Hamming weight.
    """
    weights = [v.weight for v in vectors]
    return pd.Series(weights, dtype='int64', name='weight') \
        .value_counts().sort_index().rename('count')


def position_frequencies(vectors, t, n):
    """
    Per-position one-bit frequencies with z-scores against the uniform
    rate `t / n`.

    :param vectors: iterable, Randomizer objects of length `n`.
    :param t: int, weight of every vector.
    :param n: int, vector length.
    :return: pandas.DataFrame, columns `count`, `frequency` and `z_score`
        indexed by position.
    """
    bits = np.array([r.r.to_bits() for r in vectors], dtype=np.int64) \
        .reshape(-1, n)
    trials = bits.shape[0]
    counts = bits.sum(axis=0)
    p = t / n
    sigma = math.sqrt(trials * p * (1 - p)) if trials else math.nan
    return pd.DataFrame({
        'count': counts,
        'frequency': counts / trials if trials else np.nan,
        'z_score': (counts - trials * p) / sigma,
    }, index=pd.RangeIndex(n, name='position'))


def constructive_block_rewrite(params, M, sigma, block, rng):
    """
    New version of block `block` whose sanitization collision is known in
    advance under the identity oracle.

    The chain prefix `h_{i-1}` is kept, so the expected randomizer `f`
    agrees with `r` on the first `n - k` positions; its tail is a fresh
    vector of the remaining weight, different from the tail of `r`.

    :param params: CodeParams, code parameters.
    :param M: BlockMessage, signed message.
    :param sigma: SanitizableSignature, signature on `M`.
    :param block: int, admissible block to rewrite.
    :param rng: RandomSource, randomness.
    :return: tuple, `(M_new, f)` with `f` the Randomizer sanitize will
        produce for `block`.
    """
    head = params.redundancy
    r = sigma.randomizers[block].r
    r_head, r_tail = r.slice(0, head), r.slice(head, params.n)
    tail_weight = params.t - r_head.weight
    if not 0 < tail_weight < params.k:
        raise InvalidInput(f'Randomizer of block {block} leaves no other '
                           f'tail of weight {tail_weight}.')
    while True:
        f_tail = sample_fixed_weight(params.k, tail_weight, rng)
        if f_tail != r_tail:
            break
    M_new = M.with_block(block, M[block] ^ r_tail ^ f_tail)
    return M_new, Randomizer(r_head.concat(f_tail))


@dataclass
class TransparencyReport:
    """
    Pooled randomizers of fresh signatures and of sanitized blocks.

    :param params: CodeParams, code parameters.
    :param blocks: int, blocks per message.
    :param oracle: str, digest oracle name.
    :param attempts: int, sanitizations attempted.
    :param successes: int, sanitizations that succeeded.
    :param failures: dict, failure counts by exception name.
    :param fresh: list, Randomizer objects from fresh signatures.
    :param sanitized: list, Randomizer objects of rewritten blocks.
    """

    params: object
    blocks: int
    oracle: str
    attempts: int = 0
    successes: int = 0
    failures: dict = field(default_factory=dict)
    fresh: list = field(default_factory=list)
    sanitized: list = field(default_factory=list)

    @property
    def fresh_weights(self):
        """Weight histogram of the fresh randomizers."""
        return weight_histogram(self.fresh)

    @property
    def sanitized_weights(self):
        """Weight histogram of the sanitized randomizers."""
        return weight_histogram(self.sanitized)

    @property
    def fresh_positions(self):
        """
        :return: pandas.DataFrame, per-position counts, frequencies and
            z-scores of the fresh randomizers.
        """
        return position_frequencies(self.fresh, self.params.t, self.params.n)

    @property
    def sanitized_positions(self):
        """Like `fresh_positions`, for the sanitized randomizers."""
        return position_frequencies(self.sanitized, self.params.t,
                                    self.params.n)

    @property
    def success_rate(self):
        """
        :return: float, share of successful sanitizations, NaN if none was
            attempted.
        """
        return self.successes / self.attempts if self.attempts else math.nan

    def is_point_mass(self):
        """Whether both pools consist of weight-`t` vectors only."""
        t = self.params.t
        return all(list(h.index) == [t] for h in
                   (self.fresh_weights, self.sanitized_weights))

    def summary(self):
        """
        :return: str, human-readable report printed by `transparency`.
        """
        lines = [
            f'params={self.params.name} blocks={self.blocks} '
            f'oracle={self.oracle}',
            f'sanitize success {self.successes}/{self.attempts}',
            f'failures {self.failures}',
            'fresh weights:', self.fresh_weights.to_string(),
            'sanitized weights:', self.sanitized_weights.to_string(),
        ]
        if self.sanitized:
            z = self.sanitized_positions['z_score'].abs().max()
            lines.append(f'max |z| of sanitized positions {z:.3f}')
        return '\n'.join(lines)


def transparency_trial(params, L, trials, rng, oracle='shake256', keys=None,
                       outer=None):
    """
    Sign random messages with every block admissible, rewrite one random
    block per signature and pool the randomizers.

    With the SHA-3 oracle the rewritten block is random and sanitization
    succeeds with the decodable density; with the identity oracle the
    rewrite is constructive and always succeeds.

    :param params: CodeParams, code parameters.
    :param L: int, blocks per message.
    :param trials: int, number of signatures.
    :param rng: RandomSource, randomness.
    :param oracle: str (default: shake256), `'shake256'` or `'identity'`.
    :param keys: KeyPairs (default: None), keys to use; generated if
        `None`.
    :param outer: OuterSigner (default: None), outer signature provider.
    :return: TransparencyReport, pooled randomizers.
    """
    outer = SimulatedDilithium2() if outer is None else outer
    keys = keygen(params, outer, rng) if keys is None else keys
    G = make_oracle(oracle, params)
    adm = AdmMask((True,) * L)
    report = TransparencyReport(params, L, oracle)
    for trial in range(trials):
        M = BlockMessage.random(params.k, L, rng)
        sigma = sign(keys.signer_key, keys.public_key, outer, G, M, adm, rng)
        report.fresh.extend(sigma.randomizers)
        block = rng.randbelow(L)
        if oracle == 'identity':
            try:
                M_new, _ = constructive_block_rewrite(params, M, sigma, block,
                                                      rng)
            except InvalidInput:
                continue
        else:
            M_new = M.with_block(block, rng.random_bitvec(params.k))
        report.attempts += 1
        try:
            sigma_new = sanitize(keys.sanitizer_key, keys.public_key, outer,
                                 G, M, sigma, M_new)
        except (NotDecodable, WeightMismatch) as e:
            name = e.__class__.__name__
            report.failures[name] = report.failures.get(name, 0) + 1
            continue
        report.successes += 1
        report.sanitized.append(sigma_new.randomizers[block])
    logger.info(f'Transparency trial {params.name}: '
                f'{report.successes}/{report.attempts} sanitizations')
    return report


def relaxed_weight_trial(params, trials, rng, oracle='shake256'):
    """
    Collide random messages in relaxed weight mode and count the weights
    of the decoded randomizers, to be compared with
    `weight_distribution_relaxed`.

    :param params: CodeParams, code parameters.
    :param trials: int, number of collision attempts.
    :param rng: RandomSource, randomness.
    :param oracle: str (default: shake256), digest oracle name.
    :return: pandas.Series, counts of successful collisions by weight.
    """
    pk, sk = ch_gen(params, rng)
    G = make_oracle(oracle, params)
    weights = []
    for _ in range(trials):
        m = rng.random_bitvec(params.n)
        r = sample_randomizer(params, rng)
        try:
            r_new = ch_collide(sk, pk, G, m, r, rng.random_bitvec(params.n),
                               exact_weight=False)
        except NotDecodable:
            continue
        weights.append(r_new.weight)
    return pd.Series(weights, dtype='int64', name='weight') \
        .value_counts().reindex(range(params.t + 1), fill_value=0) \
        .rename('count')
