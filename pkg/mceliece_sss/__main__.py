import logging
import os
import sys
from mceliece_sss.analysis import format_ratio, transparency_trial
from mceliece_sss.benchmark import bench_run, format_table, write_report, \
    REFERENCE_SECURE_PATTERSON_MS
from mceliece_sss.cli import MyArgumentParser, MappingAction, comma_list, \
    logging_level_mapping, params_mapping, analysis_mapping, read_message, \
    parse_adm, USAGE_ERROR
from mceliece_sss.codec import decode_any, decode_public_key, \
    decode_sanitizer_key, decode_signature, decode_signer_key, \
    encode_escrow, encode_public_key, encode_sanitizer_key, \
    encode_signature, encode_signer_key, KIND_NAMES
from mceliece_sss.digest_oracle import oracle_mapping
from mceliece_sss.exceptions import InvalidInput, MalformedInput, \
    NotDecodable, WeightMismatch
from mceliece_sss.outer_signer import outer_signer_mapping
from mceliece_sss.random_source import random_source_from_seed
from mceliece_sss.sanitizable_signature import keygen, sign, verify, \
    sanitize

VERIFY_FAILED = 1
NOT_DECODABLE = 2
MALFORMED = 3

logger = logging.getLogger('mceliece_sss')


def _read(path):
    with open(path, 'rb') as f:
        return f.read()


def _write(path, data):
    with open(path, 'wb') as f:
        f.write(data)
    logger.info(f'Wrote {len(data)} bytes to {path}')


def keygen_command(args):
    outer = args.outer()
    keys = keygen(args.params, outer, random_source_from_seed(args.seed))
    os.makedirs(args.out, exist_ok=True)
    params = args.params
    _write(os.path.join(args.out, 'pk.mcss'),
           encode_public_key(keys.public_key))
    _write(os.path.join(args.out, 'signer.sk'),
           encode_signer_key(keys.signer_key, params))
    _write(os.path.join(args.out, 'sanitizer.sk'),
           encode_sanitizer_key(keys.sanitizer_key))
    _write(os.path.join(args.out, 'escrow.sk'), encode_escrow(keys.escrow))
    return 0


def sign_command(args):
    outer = args.outer()
    pk = decode_public_key(_read(args.pk), outer)
    signer_sk = decode_signer_key(_read(args.sk), outer)
    M = read_message(args.input, pk.params.k)
    adm = parse_adm(args.adm, len(M))
    sigma = sign(signer_sk, pk, outer, args.test_oracle(pk.params), M, adm,
                 random_source_from_seed(args.seed))
    _write(args.out, encode_signature(sigma, pk.params))
    print(f'Signed {len(M)} blocks')
    return 0


def verify_command(args):
    outer = args.outer()
    pk = decode_public_key(_read(args.pk), outer)
    sigma = decode_signature(_read(args.sig), outer)
    M = read_message(args.input, pk.params.k)
    result = verify(pk, outer, args.test_oracle(pk.params), M, sigma)
    block = '' if result.block is None else f' (block {result.block})'
    print(f'{result.reason.value}{block}')
    return 0 if result else VERIFY_FAILED


def sanitize_command(args):
    outer = args.outer()
    pk = decode_public_key(_read(args.pk), outer)
    san_key = decode_sanitizer_key(_read(args.sankey))
    sigma = decode_signature(_read(args.sig), outer)
    M = read_message(args.orig, pk.params.k)
    M_new = read_message(args.new, pk.params.k)
    try:
        sigma_new = sanitize(san_key, pk, outer, args.test_oracle(pk.params),
                             M, sigma, M_new)
    except WeightMismatch as e:
        raise NotDecodable(str(e), block=e.block) from e
    _write(args.out, encode_signature(sigma_new, pk.params))
    print('Sanitized')
    return 0


def analyze_command(args):
    if args.params is not None:
        n, t, redundancy = args.params.n, args.params.t, \
            args.params.redundancy
    elif args.n is not None and args.t is not None:
        n, t = args.n, args.t
        redundancy = None if args.m is None else args.m * args.t
    else:
        raise InvalidInput('Either --params or both --n and --t are '
                           'required.')
    if args.what is analysis_mapping['density'] and redundancy is None:
        raise InvalidInput('Density needs --params or --m.')
    value = args.what(n, t, redundancy)
    print(f'{value.numerator}/{value.denominator}')
    print(format_ratio(value))
    return 0


def transparency_command(args):
    oracle = 'identity' if args.test_oracle is oracle_mapping['identity'] \
        else 'shake256'
    report = transparency_trial(args.params, args.blocks, args.trials,
                                random_source_from_seed(args.seed),
                                oracle=oracle, outer=args.outer())
    print(report.summary())
    return 0


def bench_command(args):
    records = bench_run(args.params, args.blocks, runs=args.runs,
                        rng=random_source_from_seed(args.seed),
                        n_cpu=args.n_cpu, outer=args.outer())
    print(format_table(records))
    print(f'Reference Patterson estimate at secure parameters: '
          f'{REFERENCE_SECURE_PATTERSON_MS:.1f} ms per block')
    write_report(records, args.out)
    return 0


def describe(obj):
    """One line per field of a decoded object."""
    lines = []
    for name in ('params', 'outer_pk', 'Hpub_non', 'Hpub_san', 'h_L',
                 'adm', 'outer_sig', 'randomizers', 'secret', 'P', 'S_inv',
                 'code'):
        if not hasattr(obj, name):
            continue
        value = getattr(obj, name)
        if isinstance(value, bytes):
            value = f'{len(value)} bytes'
        elif name in ('Hpub_non', 'Hpub_san'):
            value = value.Hpub
        elif name == 'h_L':
            value = f'{value.length} bits'
        elif name == 'adm':
            value = ''.join('1' if b else '0' for b in value.bits)
        elif name == 'randomizers':
            value = f'{len(value)} of weights ' \
                f'{sorted({r.weight for r in value})}'
        elif name == 'secret':
            lines.extend(describe(value))
            continue
        elif name == 'P':
            value = f'permutation of size {value.n}'
        elif name == 'code':
            value = f'Goppa polynomial of degree {value.g.degree} over ' \
                f'GF(2^{value.field.m}), support of {len(value.support)}'
        lines.append(f'{name}: {value}')
    if isinstance(obj, bytes):
        lines.append(f'secret: {len(obj)} bytes')
    return lines


def inspect_command(args):
    header, obj = decode_any(_read(args.file), args.outer())
    params = header.params
    print(f'magic: {header.magic.decode()}')
    print(f'version: {header.version}')
    print(f'kind: {header.kind:#04x} ({KIND_NAMES[header.kind]})')
    print(f'params: {params.name} (id {params.params_id}, m={params.m}, '
          f'n={params.n}, k={params.k}, t={params.t})')
    for line in describe(obj):
        print(line)
    return 0


def setup_logging(args):
    """
    Configure the `mceliece_sss` package logger: console output at the
    chosen level, plus a DEBUG file log if `--log-file` is given.
    """
    logger.setLevel(logging.DEBUG)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    fmt = '%(asctime)-15s - %(name)s - %(levelname)s - %(message)s'
    formatter = logging.Formatter(fmt=fmt, datefmt='%Y-%m-%d %H:%M:%S')

    ch = logging.StreamHandler()
    ch.setLevel(args.logging_level)
    ch.setFormatter(formatter)
    logger.addHandler(ch)

    if args.log_file is not None:
        fh = logging.FileHandler(args.log_file, mode='w')
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(formatter)
        logger.addHandler(fh)


def main(args):
    """
    Main execution function.

    :param args: argparse.Namespace, parsed arguments.
    :return: int, exit status.
    """
    setup_logging(args)
    try:
        return args.command(args)
    except NotDecodable as e:
        block = '' if e.block is None else f' in block {e.block}'
        logger.error(f'Not decodable{block}: {e}')
        return NOT_DECODABLE
    except (MalformedInput, WeightMismatch) as e:
        logger.error(f'Malformed input: {e}')
        return MALFORMED
    except (InvalidInput, ValueError, OSError) as e:
        logger.error(f'Invalid input: {e}')
        return USAGE_ERROR


def _common_parser():
    parser = MyArgumentParser(add_help=False)
    parser.add_argument(
        '--outer',
        required=False,
        action=MappingAction,
        mapping=outer_signer_mapping,
        default='simulated-dilithium2',
        help='Outer signature provider (default: simulated-dilithium2).'
    )
    return parser


def _seed_parser():
    parser = MyArgumentParser(add_help=False)
    parser.add_argument(
        '--seed',
        type=str,
        default=None,
        help='Hexadecimal seed making all randomness deterministic '
             '(default: operating system randomness).'
    )
    return parser


def _oracle_parser(default='shake256'):
    parser = MyArgumentParser(add_help=False)
    parser.add_argument(
        '--test-oracle',
        required=False,
        action=MappingAction,
        mapping=oracle_mapping,
        default=default,
        help=f'Digest oracle; `identity` is for tests only (default: '
             f'{default}).'
    )
    return parser


def build_parser():
    """
    :return: MyArgumentParser, parser of the command line.
    """
    parser = MyArgumentParser(
        prog='mceliece_sss',
        description='McEliece chameleon hash based sanitizable signatures.',
        fromfile_prefix_chars='@'
    )
    parser.add_argument(
        '--logging-level',
        required=False,
        action=MappingAction,
        mapping=logging_level_mapping,
        default='info',
        help='Logging level (default: info).'
    )
    parser.add_argument(
        '--log-file',
        type=str,
        default=None,
        help='File receiving a DEBUG level log (default: %(default)s).'
    )
    common, seed, oracle = _common_parser(), _seed_parser(), _oracle_parser()
    subparsers = parser.add_subparsers(dest='subcommand', required=True)

    keygen_parser = subparsers.add_parser(
        'keygen', parents=[common, seed],
        help='Generate keys into a directory.'
    )
    keygen_parser.add_argument(
        '--params', action=MappingAction, mapping=params_mapping,
        help='Parameter set.'
    )
    keygen_parser.add_argument('--out', required=True, type=str,
                               help='Output directory.')
    keygen_parser.set_defaults(command=keygen_command)

    sign_parser = subparsers.add_parser(
        'sign', parents=[common, seed, oracle],
        help='Sign a message file.'
    )
    sign_parser.add_argument('--pk', required=True, help='Public key file.')
    sign_parser.add_argument('--sk', required=True,
                             help='Signer secret key file.')
    sign_parser.add_argument('--in', dest='input', required=True,
                             help='Message file, 10* padded into blocks.')
    sign_parser.add_argument('--adm', required=True,
                             help='Admissibility mask, e.g. 0,1,0.')
    sign_parser.add_argument('--out', required=True,
                             help='Signature file.')
    sign_parser.set_defaults(command=sign_command)

    verify_parser = subparsers.add_parser(
        'verify', parents=[common, oracle],
        help='Verify a signature.'
    )
    verify_parser.add_argument('--pk', required=True,
                               help='Public key file.')
    verify_parser.add_argument('--in', dest='input', required=True,
                               help='Message file.')
    verify_parser.add_argument('--sig', required=True,
                               help='Signature file.')
    verify_parser.set_defaults(command=verify_command)

    sanitize_parser = subparsers.add_parser(
        'sanitize', parents=[common, oracle],
        help='Rewrite admissible blocks of a signed message.'
    )
    sanitize_parser.add_argument('--pk', required=True,
                                 help='Public key file.')
    sanitize_parser.add_argument('--sankey', required=True,
                                 help='Sanitizer secret key file.')
    sanitize_parser.add_argument('--orig', required=True,
                                 help='Signed message file.')
    sanitize_parser.add_argument('--new', required=True,
                                 help='New message file.')
    sanitize_parser.add_argument('--sig', required=True,
                                 help='Signature on the signed message.')
    sanitize_parser.add_argument('--out', required=True,
                                 help='Output signature file.')
    sanitize_parser.set_defaults(command=sanitize_command)

    analyze_parser = subparsers.add_parser(
        'analyze', help='Exact transparency figures.'
    )
    analyze_parser.add_argument(
        '--what', action=MappingAction, mapping=analysis_mapping,
        help='Quantity to compute.'
    )
    analyze_parser.add_argument(
        '--params', required=False, action=MappingAction,
        mapping=params_mapping, help='Parameter set.'
    )
    analyze_parser.add_argument('--n', type=int, default=None,
                                help='Code length.')
    analyze_parser.add_argument('--t', type=int, default=None,
                                help='Error weight.')
    analyze_parser.add_argument('--m', type=int, default=None,
                                help='Field degree, needed for density.')
    analyze_parser.set_defaults(command=analyze_command)

    transparency_parser = subparsers.add_parser(
        'transparency', parents=[common, seed, oracle],
        help='Monte-Carlo comparison of fresh and sanitized randomizers.'
    )
    transparency_parser.add_argument(
        '--params', action=MappingAction, mapping=params_mapping,
        help='Parameter set.'
    )
    transparency_parser.add_argument('--blocks', type=int, default=1,
                                     help='Blocks per message '
                                          '(default: %(default)s).')
    transparency_parser.add_argument('--trials', type=int, default=1000,
                                     help='Number of signatures '
                                          '(default: %(default)s).')
    transparency_parser.set_defaults(command=transparency_command)

    bench_parser = subparsers.add_parser(
        'bench', parents=[common, seed],
        help='Time keygen, decode, sign, verify and sanitize.'
    )
    bench_parser.add_argument(
        '--params', required=True, type=comma_list(params_mapping),
        help='Comma separated parameter sets.'
    )
    bench_parser.add_argument(
        '--blocks', type=comma_list(item_type=int), default=[1, 5, 10, 20],
        help='Comma separated block counts (default: 1,5,10,20).'
    )
    bench_parser.add_argument('--runs', type=int, default=5,
                              help='Samples per measurement '
                                   '(default: %(default)s).')
    bench_parser.add_argument('--n-cpu', type=int, default=1,
                              help='Number of CPU to be used '
                                   '(default: %(default)s).')
    bench_parser.add_argument('--out', required=True,
                              help='JSON report path.')
    bench_parser.set_defaults(command=bench_command)

    inspect_parser = subparsers.add_parser(
        'inspect', parents=[common],
        help='Print the header and structure of any encoded file.'
    )
    inspect_parser.add_argument('--file', required=True,
                                help='Key or signature file.')
    inspect_parser.set_defaults(command=inspect_command)
    return parser


if __name__ == '__main__':
    sys.exit(main(build_parser().parse_args()))
