"""
Binary irreducible Goppa codes and Patterson decoding.

The secret parity-check matrix has entries `L_j^i / g(L_j)` for
`i < t`; every GF(2^m) entry is expanded to `m` rows, bit `b` of entry
`i` going to row `i * m + b`.
"""
import logging
import numpy as np
from mceliece_sss.binary_matrix import BitVec, BitMatrix, mat_rank, \
    random_permutation, vec_mat_transpose_mul
from mceliece_sss.exceptions import DimensionMismatch, NotDecodable, \
    ZeroInverse
from mceliece_sss.galois_field import FieldPoly, get_field, poly_add, \
    poly_mul, poly_inv_mod, poly_eea_partial, poly_eval_array, \
    random_irreducible, compute_sqrt_x, sqrt_mod_g

logger = logging.getLogger(__name__)


def build_parity_check(field, g, support, t):
    """
    Expand the GF(2^m) parity-check matrix `(L_j^i / g(L_j))` to GF(2).

    :param field: FieldParams, field GF(2^m).
    :param g: FieldPoly, Goppa polynomial of degree `t`.
    :param support: numpy.ndarray, support elements.
    :param t: int, degree of `g`.
    :return: BitMatrix, `(m * t) x n` binary parity-check matrix.
    """
    m = field.m
    support = np.asarray(support, dtype=np.int64)
    entry = field.inv_array(poly_eval_array(g, support, field))
    bits = np.zeros((m * t, support.size), dtype=np.uint8)
    shifts = np.arange(m, dtype=np.int64)[:, None]
    for i in range(t):
        bits[i * m:(i + 1) * m] = (entry[None, :] >> shifts) & 1
        entry = field.mul_array(entry, support)
    return BitMatrix.from_bits(bits)


class GoppaCode:
    """
    Binary irreducible Goppa code, the trapdoor of the chameleon hash.

    :param params: CodeParams, code parameters.
    :param field: FieldParams, field GF(2^m).
    :param g: FieldPoly, monic irreducible Goppa polynomial of degree `t`.
    :param support: tuple, `n` distinct field elements, none a root of
        `g`.
    :param Hsec: BitMatrix, secret `(n - k) x n` parity-check matrix.
    :param sqrt_x: FieldPoly, square root of `x` modulo `g`.
    """

    def __init__(self, params, g, support, sqrt_x=None):
        """
        Create a new object of class `GoppaCode`.

        :param params: CodeParams, code parameters.
        :param g: FieldPoly, monic Goppa polynomial of degree `t`. Its
            irreducibility is the caller's responsibility.
        :param support: sequence, `n` distinct field elements.
        :param sqrt_x: FieldPoly (default: None), square root of `x`
            modulo `g`; computed when `None`.
        """
        field = get_field(params.m)
        support = tuple(int(a) for a in support)
        if g.degree != params.t or g.coeffs[-1] != 1:
            raise ValueError(f'Goppa polynomial must be monic of degree '
                             f'{params.t}.')
        if any(not 0 <= c < field.order for c in g.coeffs):
            raise ValueError('Goppa polynomial coefficients must be field '
                             'elements.')
        if len(support) != params.n or len(set(support)) != params.n:
            raise ValueError(f'Support must consist of {params.n} distinct '
                             f'elements.')
        if any(not 0 <= a < field.order for a in support):
            raise ValueError('Support elements must be field elements.')
        self.params = params
        self.field = field
        self.g = g
        self.support = support
        self._support_array = np.asarray(support, dtype=np.int64)
        if np.any(poly_eval_array(g, self._support_array, field) == 0):
            raise ValueError('Goppa polynomial has a root in the support.')
        self.Hsec = build_parity_check(field, g, self._support_array,
                                       params.t)
        self.sqrt_x = compute_sqrt_x(g, field) if sqrt_x is None else sqrt_x

    def __eq__(self, other):
        if not isinstance(other, GoppaCode):
            return NotImplemented
        return (self.params, self.g, self.support) == \
            (other.params, other.g, other.support)

    __hash__ = None

    def __repr__(self):
        return f'GoppaCode({self.params.name})'


def generate_code(params, rng):
    """
    Generate a random binary irreducible Goppa code.

    A fresh code is drawn whenever the parity-check matrix would have rank
    below `m * t`.

    :param params: CodeParams, registry parameters.
    :param rng: RandomSource, randomness.
    :return: GoppaCode, generated code.
    """
    field = get_field(params.m)
    elements = np.arange(field.order, dtype=np.int64)
    attempts = 0
    while True:
        attempts += 1
        g = random_irreducible(params.t, field, rng)
        order = random_permutation(field.order, rng).as_array()
        shuffled = elements[order]
        admissible = poly_eval_array(g, shuffled, field) != 0
        support = shuffled[admissible][:params.n]
        code = GoppaCode(params, g, support)
        if mat_rank(code.Hsec) == params.redundancy:
            logger.debug(f'Goppa code {params.name} generated after '
                         f'{attempts} attempts')
            return code
        logger.debug(f'Parity-check matrix of {params.name} is rank '
                     f'deficient, retrying')


def syndrome_of(code, e):
    """
    Syndrome `e * Hsec^T`.

    :param code: GoppaCode, code.
    :param e: BitVec, vector of length `n`.
    :return: BitVec, syndrome of length `n - k`.
    """
    return vec_mat_transpose_mul(e, code.Hsec)


def syndrome_to_poly(code, s):
    """
    Regroup the `m * t` syndrome bits into `t` field elements.

    Coefficient `i` of the result is the element packed in bits
    `i * m ... i * m + m - 1` of `s`.

    :param code: GoppaCode, code.
    :param s: BitVec, syndrome of length `n - k`.
    :return: FieldPoly, polynomial with coefficient `i` equal to
        `sum_j e_j L_j^i / g(L_j)`.
    """
    m, t = code.params.m, code.params.t
    if s.length != m * t:
        raise DimensionMismatch(f'Syndrome must have {m * t} bits, got '
                                f'{s.length}.')
    bits = s.to_bits().reshape(t, m).astype(np.int64)
    coeffs = bits @ (1 << np.arange(m, dtype=np.int64))
    return FieldPoly(tuple(int(c) for c in coeffs))


def poly_to_syndrome(code, S):
    """Inverse of `syndrome_to_poly`."""
    m, t = code.params.m, code.params.t
    coeffs = np.array([S[i] for i in range(t)], dtype=np.int64)
    bits = (coeffs[:, None] >> np.arange(m, dtype=np.int64)) & 1
    return BitVec.from_bits(bits.reshape(-1))


def key_equation_syndrome(code, S):
    """
    Convert the parity-check form syndrome to
    `S(x) = sum_j e_j / (x - L_j) mod g`.

    Uses `1 / (x - a) = (g(x) - g(a)) / ((x - a) * g(a)) mod g`, which
    gives `S_u = sum_{i=u+1..t} g_i * s_{i-1-u}`.

    :param code: GoppaCode, code.
    :param S: FieldPoly, output of `syndrome_to_poly`.
    :return: FieldPoly, Patterson syndrome polynomial.
    """
    field, t = code.field, code.params.t
    g = code.g.coeffs
    s = [S[i] for i in range(t)]
    out = [0] * t
    for u in range(t):
        acc = 0
        for i in range(u + 1, t + 1):
            acc ^= field.mul(g[i], s[i - 1 - u])
        out[u] = acc
    return FieldPoly(out)


def error_locator(code, s):
    """
    Patterson's error locator `sigma(x) = a(x)^2 + x * b(x)^2`.

    :param code: GoppaCode, code.
    :param s: BitVec, nonzero syndrome.
    :return: FieldPoly, error locator polynomial.
    """
    field, g = code.field, code.g
    S = key_equation_syndrome(code, syndrome_to_poly(code, s))
    T = poly_inv_mod(S, g, field)
    x = FieldPoly.x()
    if T == x:
        # Single error at the support position holding 0.
        return x
    R = sqrt_mod_g(poly_add(T, x), g, field, code.sqrt_x)
    a, b = poly_eea_partial(g, R, code.params.t // 2, field)
    return poly_add(poly_mul(a, a, field),
                    poly_mul(x, poly_mul(b, b, field), field))


def patterson_decode(code, s):
    """
    Patterson decoding of a syndrome.

    The result is checked before it is returned: the locator must have as
    many roots in the support as its degree, the error weight must not
    exceed `t`, and the error must re-encode to `s`.

    :param code: GoppaCode, code.
    :param s: BitVec, syndrome of length `n - k`.
    :return: BitVec, the unique error of weight at most `t` with
        syndrome `s`.
    """
    params = code.params
    if s.length != params.redundancy:
        raise DimensionMismatch(f'Syndrome must have {params.redundancy} '
                                f'bits, got {s.length}.')
    if s.weight == 0:
        return BitVec.zeros(params.n)
    try:
        sigma = error_locator(code, s)
    except ZeroInverse as e:
        raise NotDecodable('Syndrome polynomial is not invertible.') from e
    if sigma.is_zero() or sigma.degree > params.t:
        raise NotDecodable('Error locator has an invalid degree.')
    values = poly_eval_array(sigma, code._support_array, code.field)
    positions = np.flatnonzero(values == 0)
    if positions.size != sigma.degree:
        raise NotDecodable(f'Error locator of degree {sigma.degree} has '
                           f'{positions.size} roots in the support.')
    e = BitVec.from_positions(params.n, positions)
    if syndrome_of(code, e) != s:
        raise NotDecodable('Decoded error does not re-encode to the '
                           'syndrome.')
    return e
