"""Maximum delay on the read-2 family as n doubles.

Run with ``python demos/delay_benchmark.py``. The same sweep is available as
``monodual bench "read-k:n=8..64x2" out.csv``.
"""
import numpy as np

from monodual import dualize, measure_delay
from monodual.generators import read_k_family

ns, delays = [], []
for n in (8, 16, 32, 64):
    phi = read_k_family(n, 2, seed=11)
    runs = [measure_delay(dualize(phi)) for _ in range(3)]
    d = float(np.median([r.max_delay for r in runs]))
    ns.append(n)
    delays.append(d)
    print(f"n={n:3d}  outputs={runs[0].count:6d}  max delay={d * 1e3:8.3f} ms")

slope = np.polyfit(np.log(ns), np.log(delays), 1)[0]
print(f"log-log slope of max delay: {slope:.2f}")
