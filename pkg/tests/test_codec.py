import unittest
import numpy as np
from mceliece_sss.analysis import constructive_block_rewrite
from mceliece_sss.chameleon_hash import sample_randomizer
from mceliece_sss.codec import HEADER_BYTES, KIND_ESCROW, KIND_NAMES, \
    KIND_PUBLIC_KEY, KIND_SANITIZER_KEY, KIND_SIGNATURE, KIND_SIGNER_KEY, \
    MAGIC, decode_any, decode_escrow, \
    decode_public_key, decode_sanitizer_key, decode_signature, \
    decode_signer_key, encode_escrow, encode_public_key, \
    encode_sanitizer_key, encode_signature, encode_signer_key, read_header, \
    size_report
from mceliece_sss.digest_oracle import IdentityOracle, Shake256Oracle
from mceliece_sss.exceptions import InvalidInput, MalformedInput, \
    WeightMismatch
from mceliece_sss.outer_signer import SimulatedDilithium2
from mceliece_sss.params import NANO, TOY, MEDIUM, SECURE, PARAMS
from mceliece_sss.sanitizable_signature import AdmMask, BlockMessage, \
    SanitizableSignature, sign, verify, sanitize
from tests.helpers import get_rng, get_scheme_keys, flip_bit


def random_signature(params, L, rng, outer):
    """
    Get a well-formed signature with random contents, not a valid one.

    :param params: CodeParams, parameters.
    :param L: int, number of blocks.
    :param rng: RandomSource, randomness.
    :param outer: OuterSigner, provider fixing the outer signature length.
    :return: SanitizableSignature, random signature.
    """
    return SanitizableSignature(
        rng.random_bitvec(params.redundancy),
        rng.random_bytes(outer.sig_bytes),
        tuple(sample_randomizer(params, rng) for _ in range(L)),
        AdmMask(tuple(rng.randbelow(2) for _ in range(L)))
    )


class TestSizes(unittest.TestCase):
    """Class for testing the closed-form size accounting."""

    def setUp(self):
        self.outer = SimulatedDilithium2()

    def test_reference_sizes(self):
        """
        Test public key and signature payloads of the secure and toy
        parameter sets.
        """
        secure = size_report(SECURE, 10, self.outer)
        toy = size_report(TOY, 10, self.outer)
        cases = [
            (secure.pk_bytes, 671008, 'secure public key'),
            (secure.sig_bytes, 6882, 'secure signature'),
            (secure.per_block_bytes, 436, 'secure block'),
            (toy.pk_bytes, 9504, 'toy public key'),
            (toy.sig_bytes, 2762, 'toy signature'),
        ]
        for value, expected, what in cases:
            self.assertEqual(
                value,
                expected,
                msg=f'Size of the {what} is `{value}`, expected '
                    f'`{expected}`.'
            )
        self.assertEqual(round(secure.pk_bytes / 1024, 1), 655.3)
        self.assertEqual(round(toy.pk_bytes / 1024, 1), 9.3)
        self.assertLessEqual(abs(secure.sig_bytes - 6.72 * 1024), 16)
        self.assertLessEqual(abs(toy.sig_bytes - 2.69 * 1024), 16)
        self.assertEqual(secure.header_bytes, 7)

    def test_encoder_lengths(self):
        """
        Test whether encoded signatures have the reported length for
        every parameter set and block count.
        """
        rng = get_rng('codec/lengths')
        for params in PARAMS.values():
            for L in (1, 5, 10, 20):
                sigma = random_signature(params, L, rng, self.outer)
                data = encode_signature(sigma, params)
                expected = size_report(params, L, self.outer).sig_bytes
                self.assertEqual(
                    len(data) - HEADER_BYTES,
                    expected,
                    msg=f'Signature at {params.name}, L={L} has '
                        f'`{len(data) - HEADER_BYTES}` payload bytes, '
                        f'expected `{expected}`.'
                )

    def test_random_pairs(self):
        """Test the formula against the encoder on 20 random pairs."""
        rng = get_rng('codec/pairs')
        names = list(PARAMS)
        for _ in range(20):
            params = PARAMS[names[rng.randbelow(len(names))]]
            L = 1 + rng.randbelow(40)
            sigma = random_signature(params, L, rng, self.outer)
            self.assertEqual(
                len(encode_signature(sigma, params)) - HEADER_BYTES,
                size_report(params, L, self.outer).sig_bytes
            )

    def test_public_key_lengths(self):
        """Test encoded public key lengths at nano and toy."""
        for name in ('nano', 'toy'):
            pk = get_scheme_keys(name).public_key
            self.assertEqual(
                len(encode_public_key(pk)) - HEADER_BYTES,
                size_report(pk.params, 1, self.outer).pk_bytes
            )

    def test_medium_h_L_padding(self):
        """
        Test whether `h_L` at the medium parameters takes 63 bytes with
        zero padding bits.
        """
        rng = get_rng('codec/medium')
        sigma = random_signature(MEDIUM, 10, rng, self.outer)
        data = encode_signature(sigma, MEDIUM)
        start = HEADER_BYTES + 4 + 2
        h_L = data[start:start + 63]
        self.assertEqual(h_L, sigma.h_L.bits)
        self.assertEqual(h_L[-1] & 0xf0, 0)
        self.assertEqual(data[start + 63:start + 63 + 128],
                         sigma.randomizers[0].r.bits)


class TestRoundTrips(unittest.TestCase):
    """Class for testing encode and decode round trips."""

    @classmethod
    def setUpClass(cls):
        cls.outer = SimulatedDilithium2()
        cls.keys = get_scheme_keys('nano')

    def test_public_key(self):
        """Test the public key round trip at nano and toy."""
        for name in ('nano', 'toy'):
            pk = get_scheme_keys(name).public_key
            data = encode_public_key(pk)
            self.assertEqual(data[:4], MAGIC)
            self.assertEqual(decode_public_key(data), pk)

    def test_signature(self):
        """Test the signature round trip of a real signature."""
        G = Shake256Oracle(NANO.params_id)
        rng = get_rng('codec/signature')
        M = BlockMessage.random(NANO.k, 9, rng)
        adm = AdmMask(tuple(i % 2 for i in range(9)))
        sigma = sign(self.keys.signer_key, self.keys.public_key, self.outer,
                     G, M, adm, rng)
        decoded = decode_signature(encode_signature(sigma, NANO))
        self.assertEqual(decoded, sigma)
        self.assertTrue(verify(self.keys.public_key, self.outer, G, M,
                               decoded))

    def test_signer_and_escrow(self):
        """Test the signer key and escrow round trips."""
        data = encode_signer_key(self.keys.signer_key, NANO)
        self.assertEqual(decode_signer_key(data), self.keys.signer_key)
        escrow = decode_escrow(encode_escrow(self.keys.escrow))
        self.assertEqual(escrow, self.keys.escrow)

    def test_sanitizer_key_still_sanitizes(self):
        """
        Test whether a reloaded sanitizer key equals the original and
        still sanitizes.
        """
        san_key = decode_sanitizer_key(
            encode_sanitizer_key(self.keys.sanitizer_key)
        )
        self.assertEqual(san_key, self.keys.sanitizer_key)
        identity = IdentityOracle()
        rng = get_rng('codec/sanitize')
        adm = AdmMask((True,))
        while True:
            M = BlockMessage.random(NANO.k, 1, rng)
            sigma = sign(self.keys.signer_key, self.keys.public_key,
                         self.outer, identity, M, adm, rng)
            try:
                M_new, f = constructive_block_rewrite(NANO, M, sigma, 0, rng)
                break
            except InvalidInput:
                continue
        sigma_new = sanitize(san_key, self.keys.public_key, self.outer,
                             identity, M, sigma, M_new)
        self.assertEqual(sigma_new.randomizers[0], f)

    def test_decode_any(self):
        """Test whether `decode_any` dispatches on the kind."""
        header, decoded = decode_any(
            encode_sanitizer_key(self.keys.sanitizer_key)
        )
        self.assertEqual(header.kind, KIND_SANITIZER_KEY)
        self.assertEqual(header.params, NANO)
        self.assertEqual(decoded, self.keys.sanitizer_key)
        header, decoded = decode_any(encode_escrow(self.keys.escrow))
        self.assertEqual(header.kind, KIND_ESCROW)


class TestMalformed(unittest.TestCase):
    """Class for testing rejection of malformed encodings."""

    @classmethod
    def setUpClass(cls):
        cls.outer = SimulatedDilithium2()
        cls.keys = get_scheme_keys('nano')
        cls.san_data = encode_sanitizer_key(cls.keys.sanitizer_key)
        rng = get_rng('codec/malformed')
        cls.sig_data = encode_signature(random_signature(NANO, 3, rng,
                                                         cls.outer), NANO)
        cls.pk_data = encode_public_key(cls.keys.public_key)

    def test_header(self):
        """Test rejection of bad magic, version, kind and parameter id."""
        for offset, value in ((0, ord('X')), (4, 2), (5, 9), (6, 200)):
            data = bytearray(self.sig_data)
            data[offset] = value
            with self.assertRaises(MalformedInput):
                read_header(bytes(data))
        with self.assertRaises(MalformedInput):
            read_header(self.sig_data[:5])
        with self.assertRaises(MalformedInput):
            decode_public_key(self.sig_data)
        self.assertEqual(read_header(self.sig_data, KIND_SIGNATURE).kind,
                         KIND_SIGNATURE)

    def test_truncated_and_trailing(self):
        """Test whether truncated and extended inputs are rejected."""
        for data, decode in ((self.san_data, decode_sanitizer_key),
                             (self.sig_data, decode_signature),
                             (self.pk_data, decode_public_key)):
            with self.assertRaises(MalformedInput):
                decode(data[:-1])
            with self.assertRaises(MalformedInput):
                decode(data + b'\x00')
            with self.assertRaises(MalformedInput):
                decode(data[:HEADER_BYTES])

    def test_duplicate_permutation_entry(self):
        """Test whether a non-bijective `P` is rejected."""
        data = bytearray(self.san_data)
        data[HEADER_BYTES + 4:HEADER_BYTES + 8] = \
            data[HEADER_BYTES:HEADER_BYTES + 4]
        with self.assertRaises(MalformedInput):
            decode_sanitizer_key(bytes(data))

    def _secret_offsets(self, params):
        rows = params.redundancy
        p_end = HEADER_BYTES + 4 * params.n
        s_end = p_end + rows * ((rows + 7) // 8)
        g_end = s_end + 2 * (params.t + 1)
        return p_end, s_end, g_end

    def test_invalid_secret_fields(self):
        """
        Test rejection of a singular `S_inv`, a reducible or non-monic
        `g` and a wrong field id.
        """
        p_end, s_end, g_end = self._secret_offsets(NANO)
        singular = bytearray(self.san_data)
        singular[p_end:s_end] = bytes(s_end - p_end)
        reducible = bytearray(self.san_data)
        g = np.zeros(NANO.t + 1, dtype='<u2')
        g[-1] = 1
        reducible[s_end:g_end] = g.tobytes()
        non_monic = bytearray(self.san_data)
        non_monic[g_end - 2] = 3
        field_id = bytearray(self.san_data)
        field_id[-1] = 6
        for data in (singular, reducible, non_monic, field_id):
            with self.assertRaises(MalformedInput):
                decode_sanitizer_key(bytes(data))

    def test_randomizer_weight(self):
        """Test whether a randomizer of the wrong weight is rejected."""
        offset = HEADER_BYTES + 4 + 1 + 2
        data = flip_bit(self.sig_data, offset * 8 + 5)
        with self.assertRaises(WeightMismatch):
            decode_signature(data)


def reencode(header, decoded):
    """
    Encode a decoded object again under the kind named by its header.

    :param header: WireHeader, header of the decoded input.
    :param decoded: object, result of `decode_any`.
    :return: bytes, encoding.
    """
    params = header.params
    encoders = {
        KIND_PUBLIC_KEY: encode_public_key,
        KIND_SIGNER_KEY: lambda sk: encode_signer_key(sk, params),
        KIND_SANITIZER_KEY: encode_sanitizer_key,
        KIND_SIGNATURE: lambda sigma: encode_signature(sigma, params),
        KIND_ESCROW: encode_escrow,
    }
    return encoders[header.kind](decoded)


class TestFuzz(unittest.TestCase):
    """Class for testing decoders on randomly mutated encodings."""

    @classmethod
    def setUpClass(cls):
        keys = get_scheme_keys('nano')
        rng = get_rng('codec/fuzz/setup')
        cls.encodings = {
            KIND_PUBLIC_KEY: encode_public_key(keys.public_key),
            KIND_SIGNER_KEY: encode_signer_key(keys.signer_key, NANO),
            KIND_SANITIZER_KEY: encode_sanitizer_key(keys.sanitizer_key),
            KIND_SIGNATURE: encode_signature(
                random_signature(NANO, 3, rng, SimulatedDilithium2()), NANO
            ),
            KIND_ESCROW: encode_escrow(keys.escrow),
        }

    def test_mutations(self):
        """
        Test whether 10^5 random byte mutations spread over every kind are
        either rejected or decode to an object that re-encodes to the same
        bytes.
        """
        rng = get_rng('codec/fuzz')
        kinds = sorted(self.encodings)
        rejected = {kind: 0 for kind in kinds}
        for trial in range(100000):
            kind = kinds[trial % len(kinds)]
            data = bytearray(self.encodings[kind])
            for _ in range(1 + rng.randbelow(3)):
                position = rng.randbelow(len(data))
                data[position] ^= 1 + rng.randbelow(255)
            if rng.randbelow(10) == 0:
                data = data[:rng.randbelow(len(data))]
            data = bytes(data)
            try:
                header, decoded = decode_any(data)
            except (MalformedInput, WeightMismatch):
                rejected[kind] += 1
                continue
            self.assertEqual(
                reencode(header, decoded),
                data,
                msg=f'Mutated {KIND_NAMES[kind]} of trial {trial} decoded '
                    f'but did not re-encode to the same bytes.'
            )
        for kind in kinds:
            self.assertGreater(
                rejected[kind],
                0,
                msg=f'No mutated {KIND_NAMES[kind]} was rejected.'
            )
