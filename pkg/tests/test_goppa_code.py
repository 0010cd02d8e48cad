import itertools
import statistics
import time
import unittest
from mceliece_sss.binary_matrix import BitVec, mat_rank
from mceliece_sss.chameleon_hash import sample_fixed_weight
from mceliece_sss.exceptions import DimensionMismatch, NotDecodable
from mceliece_sss.galois_field import FieldPoly, poly_eval
from mceliece_sss.goppa_code import GoppaCode, generate_code, syndrome_of, \
    syndrome_to_poly, poly_to_syndrome, patterson_decode
from mceliece_sss.params import NANO, TOY, BENCHMARK, MEDIUM
from tests.helpers import get_rng, get_chameleon_keys


class TestGoppaCode(unittest.TestCase):
    """Class for testing Goppa code generation and syndromes."""

    @classmethod
    def setUpClass(cls):
        cls.nano = generate_code(NANO, get_rng('goppa/nano'))
        cls.toy = generate_code(TOY, get_rng('goppa/toy'))

    def test_full_rank(self):
        """Test whether `Hsec` has rank `n - k`."""
        for code in (self.nano, self.toy):
            rank = mat_rank(code.Hsec)
            self.assertEqual(
                rank,
                code.params.redundancy,
                msg=f'Rank of {code} is `{rank}`, expected '
                    f'`{code.params.redundancy}`.'
            )
            self.assertEqual(code.Hsec.shape,
                             (code.params.redundancy, code.params.n))

    def test_support(self):
        """Test whether the support is distinct and avoids roots of `g`."""
        for code in (self.nano, self.toy):
            self.assertEqual(len(set(code.support)), code.params.n)
            for alpha in code.support:
                self.assertNotEqual(poly_eval(code.g, alpha, code.field), 0)

    def test_single_error_syndrome(self):
        """
        Test whether the syndrome of a single error at `j` is the
        polynomial with coefficients `L_j^i / g(L_j)`.
        """
        code = self.toy
        field = code.field
        for j in (0, 1, 77, code.params.n - 1):
            S = syndrome_to_poly(code, syndrome_of(code, BitVec.unit(
                code.params.n, j)))
            alpha = code.support[j]
            entry = field.inv(poly_eval(code.g, alpha, field))
            for i in range(code.params.t):
                self.assertEqual(
                    S[i],
                    entry,
                    msg=f'Coefficient {i} of the syndrome of position {j} '
                        f'is `{S[i]}`, expected `{entry}`.'
                )
                entry = field.mul(entry, alpha)

    def test_syndrome_poly_round_trip(self):
        """Test whether `poly_to_syndrome` inverts `syndrome_to_poly`."""
        rng = get_rng('goppa/poly')
        for _ in range(20):
            s = rng.random_bitvec(TOY.redundancy)
            self.assertEqual(
                poly_to_syndrome(self.toy, syndrome_to_poly(self.toy, s)),
                s
            )
        with self.assertRaises(DimensionMismatch):
            syndrome_to_poly(self.toy, BitVec.zeros(10))

    def test_syndrome_linearity(self):
        """Test `syndrome(u xor v) = syndrome(u) xor syndrome(v)`."""
        rng = get_rng('goppa/linear')
        for _ in range(20):
            u, v = rng.random_bitvec(TOY.n), rng.random_bitvec(TOY.n)
            self.assertEqual(
                syndrome_of(self.toy, u ^ v),
                syndrome_of(self.toy, u) ^ syndrome_of(self.toy, v)
            )

    def test_invalid_code(self):
        """Test whether invalid Goppa polynomials and supports raise."""
        code = self.nano
        with self.assertRaises(ValueError):
            GoppaCode(NANO, FieldPoly((1, 1)), code.support)
        with self.assertRaises(ValueError):
            GoppaCode(NANO, code.g, code.support[:-1])
        with self.assertRaises(ValueError):
            GoppaCode(NANO, code.g, code.support[:-1] + code.support[:1])
        self.assertEqual(GoppaCode(NANO, code.g, code.support), code)


class TestPattersonDecode(unittest.TestCase):
    """Class for testing Patterson decoding."""

    @classmethod
    def setUpClass(cls):
        cls.nano = generate_code(NANO, get_rng('patterson/nano'))

    def test_nano_exhaustive(self):
        """
        Test whether all 529 errors of weight at most 2 have distinct
        syndromes and decode back to themselves.
        """
        code = self.nano
        syndromes = set()
        n_errors = 0
        for w in range(NANO.t + 1):
            for positions in itertools.combinations(range(NANO.n), w):
                e = BitVec.from_positions(NANO.n, positions)
                s = syndrome_of(code, e)
                syndromes.add(s.bits)
                decoded = patterson_decode(code, s)
                self.assertEqual(
                    decoded,
                    e,
                    msg=f'Error at `{positions}` decoded to '
                        f'`{list(decoded.support())}`.'
                )
                n_errors += 1
        self.assertEqual(n_errors, 529)
        self.assertEqual(len(syndromes), 529)

    def test_nano_random_syndromes(self):
        """
        Test whether the share of decodable random syndromes matches the
        density `529 / 1024` within 0.04.
        """
        rng = get_rng('patterson/random')
        trials, successes = 4000, 0
        for _ in range(trials):
            s = rng.random_bitvec(NANO.redundancy)
            try:
                e = patterson_decode(self.nano, s)
            except NotDecodable:
                continue
            successes += 1
            self.assertLessEqual(e.weight, NANO.t)
            self.assertEqual(syndrome_of(self.nano, e), s)
        rate = successes / trials
        self.assertAlmostEqual(
            rate,
            529 / 1024,
            delta=0.04,
            msg=f'Decoding success rate is `{rate}`, expected '
                f'`{529 / 1024:.4f}`.'
        )

    def test_random_errors(self):
        """
        Test decoding of 1000 random errors of weight at most `t` per
        parameter set, every second one of weight exactly `t`.
        """
        rng = get_rng('patterson/weight_t')
        for params in (TOY, BENCHMARK, MEDIUM):
            code = generate_code(params, rng)
            for trial in range(1000):
                w = params.t if trial % 2 else rng.randbelow(params.t + 1)
                e = sample_fixed_weight(params.n, w, rng)
                self.assertEqual(
                    patterson_decode(code, syndrome_of(code, e)),
                    e,
                    msg=f'Weight-{w} error not recovered at '
                        f'{params.name}.'
                )

    def test_zero_syndrome(self):
        """Test whether the zero syndrome decodes to the zero vector."""
        decoded = patterson_decode(self.nano, BitVec.zeros(NANO.redundancy))
        self.assertEqual(decoded, BitVec.zeros(NANO.n))
        with self.assertRaises(DimensionMismatch):
            patterson_decode(self.nano, BitVec.zeros(NANO.redundancy + 1))

    def test_secure_random_errors(self):
        """
        Test decoding of 1000 random errors of weight at most `t` at the
        secure parameters, every second one of weight exactly `t`.
        """
        _, sk = get_chameleon_keys('secure')
        code, params = sk.code, sk.params
        rng = get_rng('patterson/secure/round_trip')
        for trial in range(1000):
            w = params.t if trial % 2 else rng.randbelow(params.t + 1)
            e = sample_fixed_weight(params.n, w, rng)
            self.assertEqual(
                patterson_decode(code, syndrome_of(code, e)),
                e,
                msg=f'Weight-{w} error of trial {trial} not recovered at '
                    f'secure.'
            )

    def test_secure_decode_time(self):
        """
        Test whether a weight-64 error at the secure parameters decodes
        correctly in under 500 ms.
        """
        _, sk = get_chameleon_keys('secure')
        code, params = sk.code, sk.params
        rng = get_rng('patterson/secure')
        samples = []
        for _ in range(3):
            e = sample_fixed_weight(params.n, params.t, rng)
            s = syndrome_of(code, e)
            start = time.perf_counter()
            decoded = patterson_decode(code, s)
            samples.append(time.perf_counter() - start)
            self.assertEqual(decoded, e)
        median = statistics.median(samples)
        self.assertLess(
            median,
            0.5,
            msg=f'Median decoding time is `{median:.3f}` s, expected below '
                f'`0.5` s.'
        )
