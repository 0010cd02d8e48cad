import hashlib
import unittest
from mceliece_sss.binary_matrix import BitVec
from mceliece_sss.digest_oracle import G_TAG, Shake256Oracle, \
    IdentityOracle, RecordingOracle, make_oracle
from mceliece_sss.exceptions import DimensionMismatch
from mceliece_sss.params import NANO, TOY
from tests.helpers import get_rng


class TestDigestOracle(unittest.TestCase):
    """Class for testing `DigestOracle` implementations."""

    def test_shake256_definition(self):
        """
        Test whether the digest is SHAKE-256 over tag, parameter id and
        packed data.
        """
        data = get_rng('oracle/data').random_bitvec(256)
        digest = Shake256Oracle(TOY.params_id).digest(G_TAG, data, 256)
        expected = hashlib.shake_256(bytes([G_TAG, TOY.params_id]) +
                                     data.bits).digest(32)
        self.assertEqual(digest.bits, expected)
        self.assertEqual(digest.length, 256)

    def test_shake256_domain_separation(self):
        """Test whether tag and parameter id change the digest."""
        data = get_rng('oracle/separation').random_bitvec(32)
        oracle = Shake256Oracle(NANO.params_id)
        base = oracle.digest(G_TAG, data, 32)
        self.assertEqual(base, oracle.digest(G_TAG, data, 32))
        self.assertNotEqual(base, oracle.digest(G_TAG + 1, data, 32))
        self.assertNotEqual(
            base,
            Shake256Oracle(TOY.params_id).digest(G_TAG, data, 32)
        )

    def test_shake256_padding(self):
        """Test whether digests of odd bit lengths have clear padding."""
        oracle = Shake256Oracle(NANO.params_id)
        rng = get_rng('oracle/padding')
        for _ in range(50):
            digest = oracle.digest(G_TAG, rng.random_bitvec(32), 10)
            self.assertEqual(digest.length, 10)
            self.assertEqual(digest.bits[-1] & 0xfc, 0)

    def test_identity(self):
        """Test the identity oracle and its length check."""
        with self.assertLogs('mceliece_sss.digest_oracle', level='WARNING'):
            oracle = IdentityOracle()
        data = get_rng('oracle/identity').random_bitvec(32)
        self.assertEqual(oracle.digest(G_TAG, data, 32), data)
        with self.assertRaises(DimensionMismatch):
            oracle.digest(G_TAG, data, 31)

    def test_recording(self):
        """Test whether queries are recorded in order."""
        oracle = RecordingOracle(Shake256Oracle(NANO.params_id))
        a, b = BitVec.zeros(32), BitVec.unit(32, 3)
        oracle.digest(G_TAG, a, 32)
        oracle.digest(7, b, 16)
        self.assertEqual(oracle.queries, [(G_TAG, a, 32), (7, b, 16)])

    def test_make_oracle(self):
        """Test construction by name."""
        self.assertIsInstance(make_oracle('shake256', NANO), Shake256Oracle)
        with self.assertRaises(ValueError):
            make_oracle('sha1', NANO)
