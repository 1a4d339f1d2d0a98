"""
Certified maxima: two baselines and a tamper check
==================================================

Every algorithm in this package returns a Certificate: the maxima indices in
staircase order plus, for each non-maximal point, a witness that dominates
it.  A linear pass re-checks the whole answer, so a fast algorithm never has
to be taken on faith.
"""

import numpy as np

from simax import (
    InputSet,
    Certificate,
    brute_force_maxima,
    sort_scan_maxima,
    check_certificate,
    verify_certificate,
    dominates,
)

# ---------------------------------------------------------------------------
# a small instance, worked by hand

pts = InputSet.from_points([(1, 5), (2, 3), (3, 4), (4, 1), (2.5, 2.5), (0.5, 0.5)])
print("points:", [pts.point(i) for i in range(pts.n)])

cert = brute_force_maxima(pts)
print("maxima (staircase order):", cert.maxima)
print("witnesses:", cert.dominators)
print("valid?", verify_certificate(pts, cert))

# the sweep baseline sorts by x and scans right to left; same staircase
swept = sort_scan_maxima(pts)
assert swept.maxima == cert.maxima
print("sort+scan agrees:", swept.maxima)

# dominance is what the witnesses certify
i, j = 5, 0
print(f"point {j} dominates point {i}?", dominates(pts.point(j), pts.point(i)))

# ---------------------------------------------------------------------------
# verification catches tampering

liar = Certificate(maxima=cert.maxima[:-1], dominators=dict(cert.dominators))
print("drop a maximum:", check_certificate(pts, liar))

wrong_witness = Certificate(maxima=cert.maxima, dominators={**cert.dominators, 1: 3})
print("bad witness:", check_certificate(pts, wrong_witness))

# ---------------------------------------------------------------------------
# random instances: the two baselines never disagree

rng = np.random.default_rng(0)
for trial in range(200):
    xs = rng.random(40)
    ys = rng.random(40)
    inp = InputSet(xs, ys)
    a = brute_force_maxima(inp)
    b = sort_scan_maxima(inp)
    assert a.maxima == b.maxima and verify_certificate(inp, a)
print("200 random instances: baselines agree, certificates verify")
