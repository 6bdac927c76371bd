import numpy as np
import pytest

from qmeas.linalg import DensityMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def ket(*amps):
    v = np.asarray(amps, dtype=complex)
    return v / np.linalg.norm(v)


def proj(*amps):
    v = ket(*amps)
    return np.outer(v, v.conj())


def bell_state() -> DensityMatrix:
    return DensityMatrix(proj(1, 0, 0, 1), (2, 2))


def shannon_oracle(p) -> float:
    """Scalar-loop Shannon entropy in bits."""
    total = 0.0
    for x in p:
        if x > 0:
            total -= x * np.log2(x)
    return total


def circular_convolution(p, r):
    """Distribution of (i + k) mod N with i ~ p (padded) and k ~ r independent."""
    n = len(r)
    out = [0.0] * n
    for i, pi in enumerate(p):
        for k, rk in enumerate(r):
            out[(i + k) % n] += pi * rk
    return out


def convolution_info_gain(amplitudes, spectrum) -> float:
    p = [abs(a) ** 2 for a in amplitudes]
    return shannon_oracle(circular_convolution(p, spectrum)) - shannon_oracle(spectrum)
