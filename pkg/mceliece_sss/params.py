from dataclasses import dataclass


@dataclass(frozen=True)
class CodeParams:
    """
    Parameters of a binary irreducible Goppa code.

    :param name: str, registry label.
    :param params_id: int, one byte identifier used on the wire and in
        digest domain separation.
    :param m: int, extension degree of the field GF(2^m).
    :param n: int, code length.
    :param k: int, code dimension, always `n - m * t`.
    :param t: int, designed error-correcting capability.
    """

    name: str
    params_id: int
    m: int
    n: int
    k: int
    t: int

    def __post_init__(self):
        if not 3 <= self.m <= 16:
            raise ValueError(f'Field degree `m` must be in <3, 16>, got '
                             f'`{self.m}`.')
        if self.n > 1 << self.m:
            raise ValueError(f'Code length `n={self.n}` exceeds the field '
                             f'size `2^{self.m}`.')
        if self.n % 8:
            raise ValueError(f'Code length `n={self.n}` must be divisible '
                             f'by 8.')
        if self.t < 2:
            raise ValueError(f'Error capability `t={self.t}` must be at '
                             f'least 2.')
        if self.k != self.n - self.m * self.t or self.k <= 0:
            raise ValueError(f'Dimension `k={self.k}` must equal '
                             f'`n - m * t = {self.n - self.m * self.t}` and '
                             f'be positive.')
        if not 0 <= self.params_id <= 0xff:
            raise ValueError(f'Identifier `{self.params_id}` does not fit '
                             f'into one byte.')

    @property
    def redundancy(self):
        """Number of parity-check rows, `n - k`."""
        return self.n - self.k


NANO = CodeParams('nano', 1, m=5, n=32, k=22, t=2)
TOY = CodeParams('toy', 2, m=8, n=256, k=128, t=16)
# Published as k=256, which no m satisfies; m=9 forces k=224.
BENCHMARK = CodeParams('benchmark', 3, m=9, n=512, k=224, t=32)
MEDIUM = CodeParams('medium', 4, m=10, n=1024, k=524, t=50)
SECURE = CodeParams('secure', 5, m=12, n=3488, k=2720, t=64)

PARAMS = {p.name: p for p in (NANO, TOY, BENCHMARK, MEDIUM, SECURE)}
PARAMS_BY_ID = {p.params_id: p for p in PARAMS.values()}


def get_params(name):
    """
    Look up a registry entry by name.

    :param name: str, registry label.
    :return: CodeParams, registered parameter set.
    """
    if name not in PARAMS:
        raise ValueError(f'Allowed values for `name` are {list(PARAMS)}.')
    return PARAMS[name]
