"""Fit a charge codebook to raw requests and size its uplink.

A population of appliances asks for constant-rate service with
continuously distributed rates and durations.  The encoder replaces
each request with the nearest of Q square pulses; a bigger codebook
means less quantization distortion but more bits per notification.
This script fits codebooks of several sizes to one sample, shows the
distortion falling as Q grows, then prices the communication links for
the desk-day parameters.
"""

import numpy as np

from ddls.codec import (
    FeedbackRateParams,
    design_codebook_min_q,
    feedback_rate_bound,
    fit_codebook,
    mean_distortion,
    uplink_rate_cems,
    uplink_rate_hems,
)
from ddls.core import RawRequest

INTERVAL_S = 900.0
WINDOW = 16

rng = np.random.default_rng(11)
samples = [
    RawRequest((float(rng.uniform(0.5, 3.0)), float(rng.uniform(0.5, 4.5))))
    for _ in range(400)
]

print("quantizing 400 requests, rates 0.5-3 kW, durations 0.5-4.5 epochs\n")
print("   Q   mean distortion (kW^2 epochs)")
for n_codes in (1, 2, 4, 8, 16):
    quant = fit_codebook(samples, n_codes)
    print(f"  {quant.n_codes:2d}   {mean_distortion(quant, samples):.4f}")

target = 6.0
peak_rate = 12.0
quant = design_codebook_min_q(samples, max_distortion=target, peak_rate=peak_rate)
print(f"\nsmallest codebook with rate-weighted distortion <= {target}")
print(f"at {peak_rate} arrivals per interval: Q = {quant.n_codes}")
print("\n  id  rate_kw  duration")
for code in quant.codebook:
    print(f"  {code.id:2d}  {code.pulse[0]:7.3f}  {code.duration_epochs:8d}")

print("\ncommunication footprint at that size:")
hems = uplink_rate_hems(peak_rate, INTERVAL_S, WINDOW, quant.n_codes)
cems = uplink_rate_cems(peak_rate, quant.n_codes)
print(f"  per-home uplink      {hems:.4f} bit/s "
      f"({peak_rate:g} arrivals/interval, {WINDOW}-slot arrival window)")
print(f"  aggregate uplink     {cems:.2f} bits per {INTERVAL_S:g}-s interval")

params = FeedbackRateParams([0.9] * quant.n_codes, [4.0] * quant.n_codes)
print(f"  threshold feedback   {feedback_rate_bound(params, INTERVAL_S):.4f} bit/s "
      "(cutoff correlation 0.9, variance 4)")
