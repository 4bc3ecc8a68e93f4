import math

import pytest

from fracvarlab.limits import make_schedule


@pytest.fixture(scope="session")
def std_sched():
    return make_schedule(2.0 ** -4, 0.5, 30)


def dyadic(rng, lo, hi, bits=20):
    """Random dyadic rational in [lo, hi): keeps x + 2**-k exact."""
    raw = lo + (hi - lo) * float(rng.random())
    return math.floor(raw * 2 ** bits) / 2 ** bits


def bits_equal(a, b):
    """Bitwise float equality; any NaN equals any NaN (payloads carry no
    meaning here)."""
    if math.isnan(a) and math.isnan(b):
        return True
    return (a == b) and (math.copysign(1.0, a) == math.copysign(1.0, b))
