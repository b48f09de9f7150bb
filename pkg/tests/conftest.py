import numpy as np
import pytest

from ircrates.channel import ChannelInstance


def unit_disc(rng, n=1):
    """Complex samples uniform on the unit disc."""
    r = np.sqrt(rng.uniform(0, 1, n))
    phi = rng.uniform(0, 2 * np.pi, n)
    z = r * np.exp(1j * phi)
    return z[0] if n == 1 else z


def log_uniform(rng, lo=0.1, hi=10.0, n=1):
    v = np.exp(rng.uniform(np.log(lo), np.log(hi), n))
    return v[0] if n == 1 else v


def random_channel(rng, real_gains=False) -> ChannelInstance:
    """Gains from the unit disc (or its real slice), powers/noises log-uniform."""
    if real_gains:
        gains = rng.uniform(-1, 1, 8) + 0j
    else:
        gains = unit_disc(rng, 8)
    p = log_uniform(rng, n=6)
    return ChannelInstance(
        h11=gains[0], h12=gains[1], h21=gains[2], h22=gains[3],
        h1r=gains[4], h2r=gains[5], hr1=gains[6], hr2=gains[7],
        P1=p[0], P2=p[1], Pr=p[2], N1=p[3], N2=p[4], Nr=p[5],
    )


def symmetric_channel(rng) -> ChannelInstance:
    """Perfectly symmetric instance: equal powers, noises and gain magnitudes."""
    g_dir, g_cross, g_up, g_down = np.abs(unit_disc(rng, 4))
    P = log_uniform(rng)
    Pr = log_uniform(rng)
    N = log_uniform(rng)
    Nr = log_uniform(rng)
    return ChannelInstance(
        h11=g_dir, h22=g_dir, h12=g_cross, h21=g_cross,
        h1r=g_up, h2r=g_up, hr1=g_down, hr2=g_down,
        P1=P, P2=P, Pr=Pr, N1=N, N2=N, Nr=Nr,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240416)
