import argparse
import contextlib
import io
import os
import shutil
import tempfile
import unittest
from mceliece_sss.__main__ import build_parser, main
from mceliece_sss.cli import USAGE_ERROR, MyArgumentParser, comma_list, \
    message_to_blocks, parse_adm
from mceliece_sss.codec import decode_signature
from mceliece_sss.exceptions import InvalidInput
from mceliece_sss.params import PARAMS


def run(*argv):
    """
    Run the command line with the given arguments.

    :param argv: str, arguments after the program name.
    :return: tuple, `(exit status, captured stdout)`.
    """
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        status = main(build_parser().parse_args(
            ['--logging-level', 'critical', *argv]
        ))
    return status, out.getvalue()


class TestCliHelpers(unittest.TestCase):
    """Class for testing argument helpers."""

    def test_message_padding(self):
        """Test 10* padding into `k`-bit blocks."""
        M = message_to_blocks(b'', 22)
        self.assertEqual(len(M), 1)
        self.assertEqual(list(M[0].support()), [0])
        M = message_to_blocks(b'\xff\xff\x01', 22)
        self.assertEqual(len(M), 2)
        self.assertEqual(M[0].weight, 17)
        self.assertEqual(list(M[1].support()), [2])

    def test_parse_adm(self):
        """Test mask parsing and the block count check."""
        self.assertEqual(parse_adm('0,1', 2).admissible_blocks(), [1])
        with self.assertRaises(InvalidInput):
            parse_adm('0,1', 3)
        with self.assertRaises(InvalidInput):
            parse_adm('yes', 1)

    def test_comma_list(self):
        """Test comma separated arguments."""
        self.assertEqual(comma_list(item_type=int)('1, 5,10'), [1, 5, 10])
        self.assertEqual(comma_list(PARAMS)('nano,toy'),
                         [PARAMS['nano'], PARAMS['toy']])
        with self.assertRaises(argparse.ArgumentTypeError):
            comma_list(PARAMS)('nano,huge')

    def test_usage_error_status(self):
        """Test whether usage errors exit with status 4."""
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as context:
                build_parser().parse_args(['keygen', '--out', 'x'])
        self.assertEqual(context.exception.code, USAGE_ERROR)
        self.assertIsInstance(build_parser(), MyArgumentParser)


class TestCommands(unittest.TestCase):
    """Class for testing the subcommands end to end at nano parameters."""

    @classmethod
    def setUpClass(cls):
        cls.directory = tempfile.mkdtemp()
        cls.keys = os.path.join(cls.directory, 'keys')
        status, _ = run('keygen', '--params', 'nano', '--out', cls.keys,
                        '--seed', '00ff')
        assert status == 0
        cls.message = cls.path('message.bin')
        with open(cls.message, 'wb') as f:
            f.write(b'sanitizable')
        cls.signature = cls.path('message.sig')
        status, _ = run('sign', '--pk', cls.key('pk.mcss'), '--sk',
                        cls.key('signer.sk'), '--in', cls.message, '--adm',
                        '0,1,0,1,1', '--out', cls.signature, '--seed', '01')
        assert status == 0

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.directory)

    @classmethod
    def path(cls, name):
        return os.path.join(cls.directory, name)

    @classmethod
    def key(cls, name):
        return os.path.join(cls.keys, name)

    def test_keygen_files(self):
        """Test whether all four key files were written."""
        for name in ('pk.mcss', 'signer.sk', 'sanitizer.sk', 'escrow.sk'):
            self.assertTrue(os.path.isfile(self.key(name)),
                            msg=f'Key file `{name}` is missing.')

    def test_verify(self):
        """Test verification of the signed and a tampered message."""
        status, out = run('verify', '--pk', self.key('pk.mcss'), '--in',
                          self.message, '--sig', self.signature)
        self.assertEqual(status, 0)
        self.assertEqual(out.strip(), 'OK')
        tampered = self.path('tampered.bin')
        with open(tampered, 'wb') as f:
            f.write(b'Sanitizable')
        status, out = run('verify', '--pk', self.key('pk.mcss'), '--in',
                          tampered, '--sig', self.signature)
        self.assertEqual(status, 1)
        self.assertEqual(out.strip(), 'ChainMismatch')

    def test_sanitize(self):
        """
        Test sanitizing the fourth block: the command succeeds with a
        verifying signature or reports an undecodable syndrome.
        """
        with open(self.message, 'rb') as f:
            data = bytearray(f.read())
        # Bits 66..87 form block 3 at k = 22.
        data[9] ^= 0x10
        new_message = self.path('new.bin')
        with open(new_message, 'wb') as f:
            f.write(bytes(data))
        new_signature = self.path('new.sig')
        status, _ = run('sanitize', '--pk', self.key('pk.mcss'), '--sankey',
                        self.key('sanitizer.sk'), '--orig', self.message,
                        '--new', new_message, '--sig', self.signature,
                        '--out', new_signature)
        self.assertIn(status, (0, 2))
        if status == 0:
            status, _ = run('verify', '--pk', self.key('pk.mcss'), '--in',
                            new_message, '--sig', new_signature)
            self.assertEqual(status, 0)
            with open(self.signature, 'rb') as f:
                old = decode_signature(f.read())
            with open(new_signature, 'rb') as f:
                new = decode_signature(f.read())
            self.assertEqual(new.outer_sig, old.outer_sig)
            self.assertEqual(new.h_L, old.h_L)

    def test_sanitize_immutable_block(self):
        """Test whether touching a non-admissible block is a usage
        error."""
        tampered = self.path('immutable.bin')
        with open(tampered, 'wb') as f:
            f.write(b'Sanitizable')
        status, _ = run('sanitize', '--pk', self.key('pk.mcss'), '--sankey',
                        self.key('sanitizer.sk'), '--orig', self.message,
                        '--new', tampered, '--sig', self.signature, '--out',
                        self.path('never.sig'))
        self.assertEqual(status, USAGE_ERROR)
        self.assertFalse(os.path.exists(self.path('never.sig')))

    def test_malformed_and_missing(self):
        """Test the statuses of malformed and missing files."""
        garbage = self.path('garbage.sig')
        with open(garbage, 'wb') as f:
            f.write(b'MCSS\x01\x04\x01' + bytes(10))
        status, _ = run('verify', '--pk', self.key('pk.mcss'), '--in',
                        self.message, '--sig', garbage)
        self.assertEqual(status, 3)
        status, _ = run('verify', '--pk', self.key('pk.mcss'), '--in',
                        self.path('missing.bin'), '--sig', self.signature)
        self.assertEqual(status, USAGE_ERROR)

    def test_sign_bad_mask(self):
        """Test whether a mask of the wrong length is a usage error."""
        status, _ = run('sign', '--pk', self.key('pk.mcss'), '--sk',
                        self.key('signer.sk'), '--in', self.message,
                        '--adm', '0,1', '--out', self.path('bad.sig'))
        self.assertEqual(status, USAGE_ERROR)

    def test_inspect(self):
        """Test whether inspect names kind and parameter set."""
        status, out = run('inspect', '--file', self.key('sanitizer.sk'))
        self.assertEqual(status, 0)
        self.assertIn('sanitizer secret key', out)
        self.assertIn('params: nano', out)
        status, out = run('inspect', '--file', self.signature)
        self.assertEqual(status, 0)
        self.assertIn('randomizers: 5 of weights [2]', out)

    def test_analyze(self):
        """Test the exact fraction and the decimal output."""
        status, out = run('analyze', '--what', 'delta', '--n', '32', '--t',
                          '2')
        self.assertEqual(status, 0)
        self.assertEqual(out.splitlines()[0], '33/529')
        status, out = run('analyze', '--what', 'density', '--params',
                          'nano')
        self.assertEqual(out.splitlines()[0], '529/1024')
        status, _ = run('analyze', '--what', 'density', '--n', '32', '--t',
                        '2')
        self.assertEqual(status, USAGE_ERROR)

    def test_transparency_and_bench(self):
        """Test the Monte-Carlo and benchmark commands at small scale."""
        status, out = run('transparency', '--params', 'nano', '--trials',
                          '20', '--seed', '02')
        self.assertEqual(status, 0)
        self.assertIn('sanitize success', out)
        report = self.path('bench.json')
        status, out = run('bench', '--params', 'nano', '--blocks', '1,2',
                          '--runs', '1', '--out', report, '--seed', '03')
        self.assertEqual(status, 0)
        self.assertTrue(os.path.isfile(report))
        self.assertIn('Reference Patterson estimate', out)
