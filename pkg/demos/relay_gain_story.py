"""Why the relay should not always blast at full power.

A zero-delay scalar amplify-and-forward relay retransmits a scaled copy of
what it hears.  The obvious policy is to scale all the way up to the power
budget (the saturation gain), but the relay also forwards the *interferer's*
signal and its own receiver noise, so each user's rate over the gain has
interior stationary points.  This script walks one channel where user 1
prefers an interior gain, then sweeps the default geometry.
"""

import numpy as np

from ircrates import (
    ChannelInstance,
    af_rate,
    af_sum_rate_gain,
    optimal_gain,
    saturation_gain,
)
from ircrates.scenario import default_config

# A hand-picked real-gain channel where the relayed copy and the direct
# copy of user 1's signal interfere destructively at high gain: the rate
# peaks at an interior stationary point, well inside (0, a_bar).
ch = ChannelInstance(
    h11=-0.87, h12=-0.88, h21=-0.49, h22=-0.39,
    h1r=0.09, h2r=0.83, hr1=0.94, hr2=-0.96,
    P1=10.0, P2=10.0, Pr=10.0, N1=1.0, N2=1.0, Nr=1.0,
)

a_bar = saturation_gain(ch)
print(f"saturation gain  a_bar = {a_bar:.4f}")

res = optimal_gain(ch, 1)
print(f"user 1 optimum   a*    = {res.optimal_gain:.4f}  "
      f"(rate {res.optimal_rate:.4f} bits)")
print(f"user 1 at a_bar        = {float(af_rate(ch, a_bar, 1)):.4f} bits")
print(f"user 1 at a = 0        = {float(af_rate(ch, 0.0, 1)):.4f} bits")
if 0.0 < res.optimal_gain < a_bar:
    print("-> an interior gain beats both silence and full relay power\n")

print("gain sweep (10 samples):")
for a in np.linspace(0.0, a_bar, 10):
    r1 = float(af_rate(ch, a, 1))
    r2 = float(af_rate(ch, a, 2))
    bar = "#" * int(40 * (r1 + r2) / 4.0)
    print(f"  a = {a:5.3f}   R1 = {r1:.3f}   R2 = {r2:.3f}   sum {bar}")

# On the published geometry the story depends on where the relay stands.
print("\ndefault geometry, relay on the segment between the two destinations:")
cfg = default_config()
for x in np.linspace(-1.0, 2.0, 7):
    channel = cfg.channel_at(float(x), 0.5)
    gain, pair = af_sum_rate_gain(channel)
    frac = gain / saturation_gain(channel)
    print(f"  x_r = {x:+.2f} d0   best sum {pair.sum:.4f} bits   "
          f"gain at {100 * frac:5.1f}% of saturation")
