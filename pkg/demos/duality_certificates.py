"""Duality testing with short certificates for non-dual pairs.

Run with ``python demos/duality_certificates.py``.
"""
from monodual import (Certificate, DualPair, MonotoneCnf, brute_dual_check, check_dual_A,
                      check_dual_B, chi, replay_certificate)
from monodual.generators import random_pair
from monodual.oracle import transversal_cnf

phi = MonotoneCnf(4, [[1, 2], [1, 3], [2, 3, 4], [1, 4]])
psi = transversal_cnf(phi)
print("dual pair, A:", bool(check_dual_A(DualPair(phi, psi))),
      " B:", bool(check_dual_B(DualPair(phi, psi))))

# Drop one clause from the dual; both algorithms find a point where
# f(w) and g(not w) agree.
broken = DualPair(phi, MonotoneCnf.from_masks(4, psi.masks[1:]))
res = check_dual_B(broken)
print("broken pair: dual =", res.dual, "witness", res.witness.bits,
      "verifies", res.witness.verifies(broken))
print("certificate:")
print(res.certificate.to_text())

# Anyone holding the pair can re-walk the certificate without searching.
cert = Certificate.from_text(res.certificate.to_text())
print("replay:", replay_certificate(broken, cert).status)

# Certificate length against the volume |phi| * |psi|.
for seed in range(40):
    phi, psi = random_pair(10, seed, dual_bias=1.0)
    pair = DualPair(phi, psi)
    r = check_dual_B(pair)
    assert r.dual == (brute_dual_check(pair.phi, pair.psi) is True)
    if not r.dual and pair.volume > 8:
        v = pair.volume
        print(f"seed {seed}: v={v} chi(v)={chi(v).chi:.2f} bits={r.certificate.bit_length}")
