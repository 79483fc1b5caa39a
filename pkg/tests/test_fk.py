import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monodual.cnf import MonotoneCnf
from monodual.fk import (
    ACBlock,
    BJBlock,
    Certificate,
    CertificateError,
    DualPair,
    MoveStats,
    Witness,
    certificate_bit_length,
    check_conditions_A,
    check_dual_A,
    check_dual_B,
    chi,
    lcheck_B,
    leaf_test_B,
    precheck_intersections,
    replay_certificate,
)
from monodual.generators import random_pair
from monodual.oracle import brute_dual_check, transversal_cnf

from helpers import C, PHI2, PHI2_DUAL, PHI3, cnf_pairs


def P(phi, psi):
    return DualPair(phi, psi)


def test_pair_minimizes_and_checks_universe():
    p = P(C(2, [1], [1, 2]), C(2, [1]))
    assert p.phi == C(2, [1]) and p.volume == 1
    with pytest.raises(ValueError):
        P(C(2, [1]), C(3, [1]))


def test_witness_helpers():
    w = Witness.from_mask(0b01, 2)
    assert w.w == (1, 0) and w.bits == "10" and w.mask == 1
    assert w.verifies(P(C(2, [1], [2]), C(2, [1], [2])))


def test_precheck_examples():
    w = precheck_intersections(P(C(2, [1]), C(2, [2])))
    assert w.w == (0, 1)
    assert precheck_intersections(P(C(2, [1, 2]), C(2, [1, 2]))) is None
    assert precheck_intersections(P(C(2, [1, 2]), C(2, [1], [2]))) is None


def test_conditions_A_examples():
    pair = P(C(2, [1, 2]), C(2, [1, 2]))
    w = check_conditions_A(pair)
    assert w is not None and w.verifies(pair)
    assert check_conditions_A(P(C(2, [1, 2]), C(2, [1], [2]))) is None
    # weight sum is exactly 1 here
    assert check_conditions_A(P(C(1, [1]), C(1, [1]))) is None


def test_check_dual_A_examples():
    assert check_dual_A(P(PHI3, transversal_cnf(PHI3))).dual
    assert check_dual_A(P(PHI2, PHI2_DUAL)).dual
    pair = P(C(2, [1], [2]), C(2, [1], [2]))
    res = check_dual_A(pair)
    assert not res.dual and res.witness.verifies(pair)


def test_chi_examples():
    assert chi(1).chi == 1.0
    assert chi(4).chi == pytest.approx(2.0, abs=1e-9)
    assert chi(27).chi == pytest.approx(3.0, abs=1e-9)
    assert 7.0 < chi(10 ** 6).chi < 7.5
    with pytest.raises(ValueError):
        chi(0.5)


@given(st.floats(1.0, 1e12))
def test_chi_accuracy_and_monotone(v):
    c = chi(v).chi
    assert abs(c ** c - v) <= v * 1e-9
    assert chi(v * 1.5).chi > c


def test_lcheck_examples():
    assert lcheck_B(P(C(3, [1], [2]), C(3, [1, 2], [3], [1, 3])))
    assert lcheck_B(P(C(2, [1, 2]), C(2, [1])))
    assert not lcheck_B(P(PHI3, transversal_cnf(PHI3)))


def test_leaf_test_examples():
    assert leaf_test_B(P(C(2, [1, 2]), C(2, [1], [2]))) is None
    pair = P(C(2, [1, 2]), C(2, [1]))
    w = leaf_test_B(pair)
    assert w is not None and w.verifies(pair)
    sq = C(4, [1, 2], [3, 4])
    assert leaf_test_B(P(sq, C(4, [1, 3], [1, 4], [2, 3], [2, 4]))) is None
    with pytest.raises(ValueError):
        leaf_test_B(P(PHI3, transversal_cnf(PHI3)))


def test_check_dual_B_examples():
    res = check_dual_B(P(PHI2, PHI2_DUAL))
    assert res.dual and res.certificate is None
    pair = P(C(4, [1, 2], [3, 4]), C(4, [1, 3], [2, 4]))
    res = check_dual_B(pair)
    assert not res.dual and res.witness.verifies(pair)
    assert res.certificate.blocks == (ACBlock(0, ()),)
    assert replay_certificate(pair, res.certificate).confirmed


def test_cli_style_witness():
    res = check_dual_B(P(C(2, [1], [2]), C(2, [1], [2])))
    assert res.witness.bits == "10"


def _nondual_deep(seed_start=0, want=20):
    """Non-dual pairs whose certificate is longer than the root."""
    out = []
    s = seed_start
    while len(out) < want:
        phi, psi = random_pair(8, s, dual_bias=1.0)
        s += 1
        pair = P(phi, psi)
        res = check_dual_B(pair)
        if not res.dual and len(res.path) > 1:
            out.append((pair, res))
    return out


def test_deep_certificates_round_trip():
    for pair, res in _nondual_deep():
        rr = replay_certificate(pair, res.certificate)
        assert rr.confirmed and rr.witness.verifies(pair)
        assert [n.path for n in rr.path] == [n.path for n in res.path]
        assert [(n.phi, n.psi) for n in rr.path] == [(n.phi, n.psi) for n in res.path]
        assert all(b.volume <= a.volume for a, b in zip(rr.path, rr.path[1:]))


def test_replay_rejects_mutations():
    cases = _nondual_deep(want=30)
    flipped = 0
    for pair, res in cases:
        cert = res.certificate
        for i, b in enumerate(cert.blocks):
            if isinstance(b, ACBlock):
                for q in range(len(b.gamma)):
                    g = list(b.gamma)
                    g[q] ^= 1
                    blocks = cert.blocks[:i] + (ACBlock(b.alpha, tuple(g)),) + cert.blocks[i + 1:]
                    rr = replay_certificate(pair, Certificate(blocks, cert.volume))
                    flipped += 1
                    assert rr.status in ("invalid", "refuted") or rr.path[-1].path != res.path[-1].path
        bad = Certificate(cert.blocks[:-1] + (ACBlock(cert.blocks[-1].alpha + 50, ()),), cert.volume)
        assert replay_certificate(pair, bad).status == "invalid"


def test_replay_on_other_pairs_never_confirms_dual():
    pair, res = _nondual_deep(want=1)[0]
    assert replay_certificate(P(PHI2, PHI2_DUAL), res.certificate).status == "invalid"
    dual = P(PHI3, transversal_cnf(PHI3))
    cert = Certificate((ACBlock(0, ()),), dual.volume)
    assert replay_certificate(dual, cert).status in ("invalid", "refuted")


def test_certificate_structure_and_bits():
    assert certificate_bit_length(Certificate((ACBlock(0, ()),), 1)) <= 1
    cert = Certificate((ACBlock(5, (0, 1)), BJBlock(3), ACBlock(0, (1,))), 100)
    # α: 3 + 1 bits, γ: 3 bits, j: ceil(log2 100) = 7 bits
    assert certificate_bit_length(cert) == 3 + 1 + 3 + 7
    assert cert.b_count == 1 and cert.c_count == 3 and cert.a_count == 5
    assert Certificate.from_text(cert.to_text()) == cert
    with pytest.raises(CertificateError):
        Certificate((ACBlock(0, ()), BJBlock(1)), 10)
    with pytest.raises(CertificateError):
        Certificate((BJBlock(1),), 10)


@pytest.mark.parametrize("text", [
    "", "A:1\nG:\n", "seq* x\n", "seq* 4\nA:1\n", "seq* 4\nA:1\nG:2\n",
    "seq* 4\nA:0\nG:\nB:0\nA:0\nG:\n", "seq* 4\nZ:1\n",
])
def test_certificate_parse_errors(text):
    with pytest.raises(CertificateError):
        Certificate.from_text(text)


def _agree(phi, psi):
    pair = P(phi, psi)
    truth = brute_dual_check(pair.phi, pair.psi) is True
    a, b = check_dual_A(pair), check_dual_B(pair)
    assert a.dual == truth and b.dual == truth
    for r in (a, b):
        if not r.dual:
            assert r.witness.verifies(pair)
    return pair, b


@settings(max_examples=150, deadline=None)
@given(cnf_pairs(max_n=6))
def test_agreement_random_pairs(pq):
    _agree(*pq)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 9), st.integers(0, 10 ** 9))
def test_agreement_near_dual_pairs_and_move_counts(n, seed):
    phi, psi = random_pair(n, seed, dual_bias=1.0)
    pair = P(phi, psi)
    st_ = MoveStats()
    res = check_dual_B(pair, st_)
    truth = brute_dual_check(pair.phi, pair.psi) is True
    assert res.dual == truth
    v = max(pair.volume, 2)
    assert st_.max_a <= v
    assert st_.max_b <= math.log2(v)
    assert st_.max_c <= chi(v).chi * math.log2(v)
    assert st_.max_c <= math.log2(v) ** 2
    assert not st_.volume_violations
    if not res.dual:
        assert replay_certificate(pair, res.certificate).confirmed
        assert res.certificate.b_count <= math.log2(v)
    sa = MoveStats()
    check_dual_A(pair, sa)
    # split variables are frequent enough in their side
    assert sa.min_split_margin >= 1 - 1e-9


def test_exhaustive_n2():
    # every pair of antichains over two variables
    fams = [[], [[1]], [[2]], [[1, 2]], [[1], [2]]]
    for a, b in product(fams, repeat=2):
        _agree(C(2, *a), C(2, *b))


def test_constant_sides():
    # f ≡ 1 against g ≡ 1 is not dual; any w works
    pair = P(C(2), C(2))
    res = check_dual_A(pair)
    assert not res.dual and res.witness.verifies(pair)
    assert not check_dual_B(pair).dual
