"""
Wall-clock benchmark of key generation, signing, verification,
sanitization of one block and bare Patterson decoding.
"""
import logging
import multiprocessing
import statistics
import time
from dataclasses import dataclass, asdict
import pandas as pd
from mceliece_sss.analysis import constructive_block_rewrite
from mceliece_sss.chameleon_hash import sample_randomizer
from mceliece_sss.codec import size_report
from mceliece_sss.digest_oracle import IdentityOracle, Shake256Oracle
from mceliece_sss.exceptions import InvalidInput
from mceliece_sss.goppa_code import patterson_decode, syndrome_of
from mceliece_sss.outer_signer import SimulatedDilithium2
from mceliece_sss.random_source import SystemRandomSource
from mceliece_sss.sanitizable_signature import AdmMask, BlockMessage, \
    keygen, sign, verify, sanitize

logger = logging.getLogger(__name__)

OPERATIONS = ('keygen', 'decode', 'sign', 'verify', 'sanitize')

# Reference prototype timings in ms for (params, L): sign, randomized
# sanitize, estimated Patterson, verify, estimated total. Context only.
REFERENCE_TIMINGS_MS = {
    ('benchmark', 1): (2.06, 924.9, 0.6, 2.08, 4.7),
    ('benchmark', 5): (6.43, 989.5, 0.6, 5.76, 12.8),
    ('benchmark', 10): (8.09, 1040.9, 0.6, 10.37, 19.0),
    ('benchmark', 20): (14.05, 1032.0, 0.6, 13.05, 27.7),
    ('medium', 1): (5.27, 0.0, 1.8, 4.25, 11.4),
    ('medium', 5): (18.63, 5178.2, 1.8, 14.59, 35.1),
    ('medium', 10): (28.12, 4910.0, 1.8, 29.72, 59.7),
    ('medium', 20): (54.28, 4849.5, 1.8, 60.32, 116.4),
}
REFERENCE_COLUMNS = ('ref_sign', 'ref_sanitize', 'ref_patterson',
                     'ref_verify', 'ref_total')
# Estimated Patterson time per modified block at the secure parameters.
REFERENCE_SECURE_PATTERSON_MS = 8.0


@dataclass
class BenchRecord:
    """
    :param params: str, parameter set name.
    :param blocks: int, number of blocks, 0 for key generation and
        decoding.
    :param operation: str, one of `OPERATIONS`.
    :param median_ms: float, median of `samples_ms`.
    :param samples_ms: list, raw wall-clock samples in ms.
    :param pk_bytes: int, public key payload size.
    :param sig_bytes: int, signature payload size, 0 if not applicable.
    """

    params: str
    blocks: int
    operation: str
    median_ms: float
    samples_ms: list
    pk_bytes: int
    sig_bytes: int


def _timed(function, *args):
    start = time.perf_counter()
    result = function(*args)
    return result, (time.perf_counter() - start) * 1000


class Benchmark:
    """
    Benchmark of one parameter set.

    :param params: CodeParams, parameter set.
    :param blocks_list: list, block counts to measure.
    :param runs: int, samples per measurement.
    :param rng: RandomSource, randomness.
    :param outer: OuterSigner, outer signature provider.
    """

    def __init__(self, params, blocks_list, runs, rng, outer):
        if runs < 1:
            raise ValueError(f'Number of runs must be positive, got '
                             f'`{runs}`.')
        self.params = params
        self.blocks_list = blocks_list
        self.runs = runs
        self.rng = rng
        self.outer = outer
        self._logger = logging.getLogger(__name__) \
            .getChild(self.__class__.__name__)

    def _record(self, blocks, operation, samples):
        sizes = size_report(self.params, max(blocks, 1), self.outer)
        median = statistics.median(samples)
        self._logger.info(f'{self.params.name} L={blocks} {operation}: '
                          f'{median:.2f} ms')
        return BenchRecord(self.params.name, blocks, operation, median,
                           list(samples), sizes.pk_bytes,
                           sizes.sig_bytes if blocks else 0)

    def run(self):
        """
        :return: list, BenchRecord objects.
        """
        params, rng, outer = self.params, self.rng, self.outer
        samples, keys = [], None
        for _ in range(self.runs):
            keys, elapsed = _timed(keygen, params, outer, rng)
            samples.append(elapsed)
        records = [self._record(0, 'keygen', samples)]

        code = keys.sanitizer_key.secret.code
        samples = []
        for _ in range(self.runs):
            s = syndrome_of(code, sample_randomizer(params, rng).r)
            _, elapsed = _timed(patterson_decode, code, s)
            samples.append(elapsed)
        records.append(self._record(0, 'decode', samples))

        G = Shake256Oracle(params.params_id)
        identity = IdentityOracle()
        for L in self.blocks_list:
            adm = AdmMask((True,) * L)
            sign_samples, verify_samples, sanitize_samples = [], [], []
            for _ in range(self.runs):
                M = BlockMessage.random(params.k, L, rng)
                sigma, elapsed = _timed(sign, keys.signer_key,
                                        keys.public_key, outer, G, M, adm,
                                        rng)
                sign_samples.append(elapsed)
                _, elapsed = _timed(verify, keys.public_key, outer, G, M,
                                    sigma)
                verify_samples.append(elapsed)
                sanitize_samples.append(self._time_sanitize(keys, identity,
                                                            M, adm))
            records.append(self._record(L, 'sign', sign_samples))
            records.append(self._record(L, 'verify', verify_samples))
            records.append(self._record(L, 'sanitize', sanitize_samples))
        return records

    def _time_sanitize(self, keys, identity, M, adm):
        """Time sanitizing block 0 of a constructive identity-oracle
        instance."""
        while True:
            sigma = sign(keys.signer_key, keys.public_key, self.outer,
                         identity, M, adm, self.rng)
            try:
                M_new, _ = constructive_block_rewrite(self.params, M, sigma,
                                                      0, self.rng)
                break
            except InvalidInput:
                continue
        _, elapsed = _timed(sanitize, keys.sanitizer_key, keys.public_key,
                            self.outer, identity, M, sigma, M_new)
        return elapsed


def _bench_cell(params, blocks_list, runs, rng, outer):
    return Benchmark(params, blocks_list, runs, rng, outer).run()


def bench_run(params_list, blocks_list, runs=5, rng=None, n_cpu=1,
              outer=None):
    """
    Benchmark every parameter set, one parallel cell per set.

    :param params_list: list, CodeParams objects.
    :param blocks_list: list, block counts.
    :param runs: int (default: 5), samples per measurement.
    :param rng: RandomSource (default: None), randomness; every cell gets
        its own derived source.
    :param n_cpu: int (default: 1), number of worker processes.
    :param outer: OuterSigner (default: None), outer signature provider.
    :return: list, BenchRecord objects.
    """
    rng = SystemRandomSource() if rng is None else rng
    outer = SimulatedDilithium2() if outer is None else outer
    cells = [(params, list(blocks_list), runs, rng.spawn(params.name), outer)
             for params in params_list]
    if n_cpu == 1:
        results = [_bench_cell(*cell) for cell in cells]
    else:
        with multiprocessing.Pool(n_cpu) as pool:
            results = pool.starmap(_bench_cell, cells)
    return [record for cell in results for record in cell]


def records_to_frame(records):
    """
    :param records: list, BenchRecord objects.
    :return: pandas.DataFrame, one row per record.
    """
    return pd.DataFrame([asdict(record) for record in records],
                        columns=list(BenchRecord.__dataclass_fields__))


def format_table(records):
    """
    Human-readable table with one row per (params, L), medians per
    operation and the reference prototype timings where known.

    :param records: list, BenchRecord objects.
    :return: str, rendered table.
    """
    frame = records_to_frame(records)
    table = frame.pivot_table(index=['params', 'blocks'], columns='operation',
                              values='median_ms', aggfunc='first')
    table = table.reindex(columns=[op for op in OPERATIONS
                                   if op in table.columns])
    if {'sign', 'verify', 'sanitize'} <= set(table.columns):
        table['total'] = table['sign'] + table['verify'] + \
            table['sanitize']
    reference = pd.DataFrame(
        [REFERENCE_TIMINGS_MS.get(index, (float('nan'),) * 5)
         for index in table.index],
        index=table.index, columns=list(REFERENCE_COLUMNS)
    )
    table = pd.concat([table, reference], axis=1)
    return table.to_string(float_format=lambda x: f'{x:.2f}')


def write_report(records, path):
    """
    Write the machine-readable table as JSON records.

    :param records: list, BenchRecord objects.
    :param path: str, output path.
    """
    records_to_frame(records).to_json(path, orient='records', indent=2)
    logger.info(f'Benchmark report written to {path}')
