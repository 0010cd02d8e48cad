"""
Arithmetic in GF(2^m) and in the polynomial ring GF(2^m)[x].

Field elements are plain integers with coefficient i of the binary
polynomial stored at bit i. Multiplication, inversion and square roots go
through log/antilog tables built once per field, so every field operation
is two lookups. Polynomials are immutable `FieldPoly` values with
coefficients stored lowest degree first.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
import numpy as np
from mceliece_sss.exceptions import ZeroInverse, DivisionByZeroPoly

logger = logging.getLogger(__name__)

# Degree-m reduction polynomials, bit i holds the coefficient of z^i.
# m=12 is the Classic McEliece field z^12 + z^3 + 1.
REDUCTION_POLYNOMIALS = {
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000000001001,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


def _binary_poly_mod(a, b):
    """Remainder of binary polynomials encoded as integers."""
    degree_b = b.bit_length() - 1
    while a.bit_length() - 1 >= degree_b:
        a ^= b << (a.bit_length() - 1 - degree_b)
    return a


def is_binary_irreducible(poly):
    """
    Trial division against every binary polynomial of degree at most
    half the degree of `poly`.

    :param poly: int, binary polynomial encoded as an integer.
    :return: bool, `True` if `poly` is irreducible over GF(2).
    """
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if _binary_poly_mod(poly, divisor) == 0:
            return False
    return True


def _verify_registry():
    for m, reduction in REDUCTION_POLYNOMIALS.items():
        if reduction.bit_length() - 1 != m or \
                not is_binary_irreducible(reduction):
            raise RuntimeError(
                f'Reduction polynomial `{reduction:#x}` registered for m={m} '
                f'is not an irreducible polynomial of degree {m}.'
            )


_verify_registry()


class FieldParams:
    """
    The field GF(2^m) together with its lookup tables.

    :param m: int, extension degree.
    :param reduction: int, degree-m irreducible binary polynomial.
    :param order: int, number of field elements, `2^m`.
    :param exp: list, antilog table of length `2 * (order - 1)` so that
        sums of two logarithms never need a modular reduction.
    :param log: list, discrete logarithm table, `log[0]` is unused.
    :param exp_table: numpy.ndarray, `exp` as an `int64` array.
    :param log_table: numpy.ndarray, `log` as an `int64` array.
    """

    def __init__(self, m, reduction=None):
        """
        Create a new object of class `FieldParams`.

        :param m: int, extension degree, from <3, 16>.
        :param reduction: int (default: None), reduction polynomial. If
            `None` the registry entry for `m` is used.
        """
        if m not in REDUCTION_POLYNOMIALS:
            raise ValueError(f'Allowed values for `m` are '
                             f'{list(REDUCTION_POLYNOMIALS)}.')
        reduction = REDUCTION_POLYNOMIALS[m] if reduction is None \
            else reduction
        if reduction.bit_length() - 1 != m or \
                not is_binary_irreducible(reduction):
            raise ValueError(f'Polynomial `{reduction:#x}` is not an '
                             f'irreducible polynomial of degree {m}.')
        self.m = m
        self.reduction = reduction
        self.order = 1 << m
        self._build_tables()

    def __repr__(self):
        return f'FieldParams(m={self.m}, reduction={self.reduction:#x})'

    def __eq__(self, other):
        if not isinstance(other, FieldParams):
            return NotImplemented
        return (self.m, self.reduction) == (other.m, other.reduction)

    def __hash__(self):
        return hash((self.m, self.reduction))

    def shift_reduce_mul(self, a, b):
        """
        Carry-less multiplication followed by reduction, without tables.

        :param a: int, field element.
        :param b: int, field element.
        :return: int, product `a * b`.
        """
        result = 0
        while b:
            if b & 1:
                result ^= a
            b >>= 1
            a <<= 1
            if a >> self.m:
                a ^= self.reduction
        return result

    def _build_tables(self):
        """
        Find a generator of the multiplicative group and tabulate its
        powers. The reduction polynomial need not be primitive.
        """
        n_units = self.order - 1
        for generator in range(2, self.order):
            powers, x = [], 1
            for _ in range(n_units):
                powers.append(x)
                x = self.shift_reduce_mul(x, generator)
                if x == 1:
                    break
            if len(powers) == n_units and x == 1:
                break
        else:
            raise RuntimeError(f'No generator found in GF(2^{self.m}).')
        log = [0] * self.order
        for i, power in enumerate(powers):
            log[power] = i
        self.generator = generator
        self.exp = powers + powers
        self.log = log
        self.exp_table = np.array(self.exp, dtype=np.int64)
        self.log_table = np.array(self.log, dtype=np.int64)
        logger.debug(f'Built tables for GF(2^{self.m}) with generator '
                     f'{generator}')

    def mul(self, a, b):
        """
        Product of two field elements by log/antilog lookup.

        :param a: int, field element.
        :param b: int, field element.
        :return: int, product `a * b`.
        """
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a):
        """
        :param a: int, nonzero field element.
        :return: int, multiplicative inverse of `a`.
        """
        if a == 0:
            raise ZeroInverse('Zero has no multiplicative inverse.')
        return self.exp[self.order - 1 - self.log[a]]

    def sqrt(self, a):
        """
        Square root, i.e. `a^(2^(m-1))`; unique in characteristic 2.

        :param a: int, field element.
        :return: int, element whose square is `a`.
        """
        if a == 0:
            return 0
        return self.exp[(self.log[a] << (self.m - 1)) % (self.order - 1)]

    def mul_array(self, a, b):
        """
        Element-wise product of two arrays of field elements.

        :param a: numpy.ndarray, field elements.
        :param b: numpy.ndarray|int, field elements (broadcast).
        :return: numpy.ndarray, `int64` products.
        """
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        product = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, product)

    def inv_array(self, a):
        """
        Element-wise inverse of an array of nonzero field elements.

        :param a: numpy.ndarray, field elements.
        :return: numpy.ndarray, `int64` inverses.
        """
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroInverse('Zero has no multiplicative inverse.')
        return self.exp_table[self.order - 1 - self.log_table[a]]


@lru_cache(maxsize=None)
def get_field(m):
    """
    Shared registry field of degree `m`.

    :param m: int, extension degree.
    :return: FieldParams, field with the registry reduction polynomial.
    """
    return FieldParams(m)


def field_mul(a, b, fp):
    """
    Multiply two field elements.

    :param a: int, field element.
    :param b: int, field element.
    :param fp: FieldParams, field.
    :return: int, `a * b` reduced modulo `fp.reduction`.
    """
    return fp.mul(a, b)


def field_inv(a, fp):
    """
    Invert a nonzero field element.

    :param a: int, field element.
    :param fp: FieldParams, field.
    :return: int, `a^-1`.
    """
    return fp.inv(a)


def field_sqrt(a, fp):
    """
    Square root, computed as `a^(2^(m-1))`.

    :param a: int, field element.
    :param fp: FieldParams, field.
    :return: int, the unique `y` with `y * y = a`.
    """
    return fp.sqrt(a)


@dataclass(frozen=True)
class FieldPoly:
    """
    Polynomial over GF(2^m), coefficients lowest degree first.

    Trailing zero coefficients are stripped on construction, so the zero
    polynomial has no coefficients and degree `-inf`.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, 'coeffs', tuple(coeffs))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0


def _trim(coeffs):
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return _trim(out)


def _mul(a, b, fp):
    if not a or not b:
        return []
    exp, log = fp.exp, fp.log
    out = [0] * (len(a) + len(b) - 1)
    log_b = [(j, log[c]) for j, c in enumerate(b) if c]
    for i, c in enumerate(a):
        if c:
            log_c = log[c]
            for j, log_d in log_b:
                out[i + j] ^= exp[log_c + log_d]
    return _trim(out)


def _divmod(a, b, fp):
    if not b:
        raise DivisionByZeroPoly('Division by the zero polynomial.')
    remainder = list(a)
    degree_b = len(b) - 1
    if len(remainder) <= degree_b:
        return [], _trim(remainder)
    exp, log = fp.exp, fp.log
    log_b = [(j, log[c]) for j, c in enumerate(b) if c]
    log_lead_inv = fp.order - 1 - log[b[-1]]
    quotient = [0] * (len(remainder) - degree_b)
    for i in range(len(remainder) - 1, degree_b - 1, -1):
        c = remainder[i]
        if c:
            log_f = (log[c] + log_lead_inv) % (fp.order - 1)
            quotient[i - degree_b] = exp[log_f]
            shift = i - degree_b
            for j, log_d in log_b:
                remainder[shift + j] ^= exp[log_f + log_d]
    return _trim(quotient), _trim(remainder[:degree_b])


def _square(a, fp):
    out = [0] * max(2 * len(a) - 1, 0)
    for i, c in enumerate(a):
        out[2 * i] = fp.mul(c, c)
    return out


def _eval(coeffs, point, fp):
    acc = 0
    for c in reversed(coeffs):
        acc = fp.mul(acc, point) ^ c
    return acc


def _monic(a, fp):
    if not a:
        return a
    lead_inv = fp.inv(a[-1])
    return [fp.mul(c, lead_inv) for c in a]


def _gcd(a, b, fp):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b, fp)[1]
    return _monic(a, fp)


def poly_add(a, b):
    """Sum (equivalently difference) of two polynomials."""
    return FieldPoly(_add(a.coeffs, b.coeffs))


def poly_mul(a, b, fp):
    """Product of two polynomials over `fp`."""
    return FieldPoly(_mul(a.coeffs, b.coeffs, fp))


def poly_divmod(a, b, fp):
    """
    Polynomial long division.

    :param a: FieldPoly, dividend.
    :param b: FieldPoly, nonzero divisor.
    :param fp: FieldParams, coefficient field.
    :return: tuple, `(q, r)` with `a = q * b + r` and `deg r < deg b`.
    """
    q, r = _divmod(a.coeffs, b.coeffs, fp)
    return FieldPoly(q), FieldPoly(r)


def poly_mod(a, g, fp):
    """Remainder of `a` modulo `g`."""
    return FieldPoly(_divmod(a.coeffs, g.coeffs, fp)[1])


def poly_square_mod(a, g, fp):
    """Square of `a` modulo `g` (coefficient-wise squaring, then reduce)."""
    return FieldPoly(_divmod(_square(a.coeffs, fp), g.coeffs, fp)[1])


def poly_gcd(a, b, fp):
    """Monic greatest common divisor; the zero polynomial if both are 0."""
    return FieldPoly(_gcd(a.coeffs, b.coeffs, fp))


def poly_eval(p, point, fp):
    """Evaluate `p` at a field element with Horner's rule."""
    return _eval(p.coeffs, point, fp)


def poly_eval_array(p, points, fp):
    """
    Evaluate `p` at many points at once.

    :param p: FieldPoly, polynomial.
    :param points: numpy.ndarray, field elements.
    :param fp: FieldParams, field.
    :return: numpy.ndarray, `int64` values `p(points)`.
    """
    points = np.asarray(points, dtype=np.int64)
    acc = np.zeros_like(points)
    for c in reversed(p.coeffs):
        acc = fp.mul_array(acc, points) ^ c
    return acc


def poly_inv_mod(a, g, fp):
    """
    Inverse of `a` modulo `g` by the extended Euclidean algorithm.

    :param a: FieldPoly, polynomial coprime to `g`.
    :param g: FieldPoly, modulus.
    :param fp: FieldParams, field.
    :return: FieldPoly, `b` with `a * b = 1 (mod g)`.
    """
    r0, r1 = list(g.coeffs), _divmod(a.coeffs, g.coeffs, fp)[1]
    s0, s1 = [], [1]
    while len(r1) > 1:
        q, r = _divmod(r0, r1, fp)
        r0, r1 = r1, r
        s0, s1 = s1, _add(s0, _mul(q, s1, fp))
    if not r1:
        raise ZeroInverse('Polynomial is not invertible modulo `g`.')
    lead_inv = fp.inv(r1[0])
    return FieldPoly([fp.mul(c, lead_inv) for c in s1])


def poly_eea_partial(g, R, stop_deg, fp):
    """
    Run the extended Euclidean remainder sequence on `(g, R)` and stop at
    the first remainder of degree at most `stop_deg`.

    Invariant of the sequence: every remainder `a_i = b_i * R (mod g)`.

    :param g: FieldPoly, modulus.
    :param R: FieldPoly, polynomial of degree below `deg g`.
    :param stop_deg: int, non-negative degree bound.
    :param fp: FieldParams, field.
    :return: tuple, `(a, b)` with `a = b * R (mod g)`, `deg a <= stop_deg`
        and `deg b <= deg g - 1 - stop_deg`.
    """
    r0, r1 = list(g.coeffs), list(R.coeffs)
    b0, b1 = [], [1]
    while len(r1) - 1 > stop_deg:
        q, r = _divmod(r0, r1, fp)
        r0, r1 = r1, r
        b0, b1 = b1, _add(b0, _mul(q, b1, fp))
    return FieldPoly(r1), FieldPoly(b1)


def is_irreducible(g, fp):
    """
    Ben-Or irreducibility test: `gcd(x^(2^(m*i)) - x, g) = 1` for every
    `i <= deg g / 2`, aborting at the first failure.

    :param g: FieldPoly, polynomial to be tested.
    :param fp: FieldParams, coefficient field.
    :return: bool, `True` if `g` is irreducible over `fp`.
    """
    t = len(g.coeffs) - 1
    if t < 1:
        return False
    if t == 1:
        return True
    modulus = list(g.coeffs)
    x = _divmod([0, 1], modulus, fp)[1]
    h = x
    for _ in range(1, t // 2 + 1):
        for _ in range(fp.m):
            h = _divmod(_square(h, fp), modulus, fp)[1]
        if len(_gcd(_add(h, x), modulus, fp)) > 1:
            return False
    return True


def random_irreducible(t, fp, rng):
    """
    Sample a monic irreducible polynomial of degree `t` by rejection.

    :param t: int, degree, at least 1.
    :param fp: FieldParams, coefficient field.
    :param rng: RandomSource, randomness.
    :return: FieldPoly, monic irreducible polynomial of degree `t`.
    """
    if t < 1:
        raise ValueError(f'Degree `t` must be positive, got `{t}`.')
    attempts = 0
    while True:
        attempts += 1
        g = FieldPoly([rng.randbelow(fp.order) for _ in range(t)] + [1])
        if is_irreducible(g, fp):
            logger.debug(f'Irreducible polynomial of degree {t} over '
                         f'GF(2^{fp.m}) found after {attempts} attempts')
            return g


def compute_sqrt_x(g, fp):
    """
    Square root of `x` in GF(2^m)[x]/(g), i.e. `x^(2^(m*t-1)) mod g`.

    :param g: FieldPoly, irreducible modulus of degree `t`.
    :param fp: FieldParams, coefficient field.
    :return: FieldPoly, `s` with `s^2 = x (mod g)`.
    """
    modulus = list(g.coeffs)
    h = _divmod([0, 1], modulus, fp)[1]
    for _ in range(fp.m * (len(modulus) - 1) - 1):
        h = _divmod(_square(h, fp), modulus, fp)[1]
    return FieldPoly(h)


def sqrt_mod_g(T, g, fp, sqrt_x=None):
    """
    Square root modulo an irreducible `g`.

    `T` is split as `T_e(x)^2 + x * T_o(x)^2`, then
    `sqrt(T) = T_e + sqrt(x) * T_o`.

    :param T: FieldPoly, polynomial of degree below `deg g`.
    :param g: FieldPoly, irreducible modulus.
    :param fp: FieldParams, coefficient field.
    :param sqrt_x: FieldPoly (default: None), precomputed square root of
        `x` modulo `g`; computed when `None`.
    :return: FieldPoly, `R` with `R^2 = T (mod g)`.
    """
    if sqrt_x is None:
        sqrt_x = compute_sqrt_x(g, fp)
    even = [fp.sqrt(c) for c in T.coeffs[0::2]]
    odd = [fp.sqrt(c) for c in T.coeffs[1::2]]
    odd_part = _divmod(_mul(sqrt_x.coeffs, _trim(odd), fp), g.coeffs, fp)[1]
    return FieldPoly(_add(_trim(even), odd_part))
