import cmath
import math

import pytest

from rileyslice.riley import (
    FIGURE_EIGHT,
    LANDMARKS,
    batch_audit,
    certify_region,
    conjugate_word,
    density_trend,
    distinct_count,
    in_certified_slice,
    landmark,
    matrix_iterate_check,
    nielsen_witness,
    nonfree_certificate,
    root_location_audit,
    sl_screen,
    supergroup_witness,
    verify_witness,
)
from rileyslice.words import enumerate_words, star_power, word_polynomial


def test_landmarks():
    assert landmark("figure-eight") == FIGURE_EIGHT
    assert abs(FIGURE_EIGHT.z - (1 + 1j * math.sqrt(3)) / 2) < 1e-15
    assert abs(landmark("whitehead").z - (1 + 1j)) < 1e-15
    assert abs(landmark("triangle-3").z + 1) < 1e-12  # -4 cos^2(pi/3)
    assert abs(landmark("triangle-4").z + 2) < 1e-12
    assert len({lm.name for lm in LANDMARKS}) == len(LANDMARKS)
    with pytest.raises(KeyError):
        landmark("nowhere")


def test_certified_slice_region():
    assert in_certified_slice(5)
    assert in_certified_slice(-4.5)
    assert in_certified_slice(3j)
    assert not in_certified_slice(3.5)
    assert not in_certified_slice(1 + 3j)
    assert certify_region(6).kind == "certified_slice"
    assert certify_region(0.5 + 0.2j).kind in ("certified_complement", "unknown")


def test_screen():
    r = sl_screen(0.5, steps=3)
    assert r.status == "nondiscrete_certified"
    assert [v for _, v in r.chain] == [0.5, 0.25, 0.0625, 0.00390625]
    for w, v in r.chain[1:]:
        assert word_polynomial(w)(0.5) == pytest.approx(v, abs=1e-15)
    assert r.chain[2][0] == star_power((1,), 2)
    assert sl_screen(2).status == "inconclusive"
    with pytest.raises(ValueError):
        sl_screen(0)


def test_root_audit_small_batch():
    b = batch_audit(enumerate_words(3, 2))
    assert b.passed
    assert b.words == 4 + 16 + 64
    assert b.min_modulus >= 1 - 1e-9


def test_root_audit_detects_violation():
    from rileyslice.algebra import IntPolynomial

    r = root_location_audit(IntPolynomial((-25, 0, 1)))  # roots +-5
    assert not r.passed and len(r.violations) == 2


def test_witness_at_two():
    r = supergroup_witness(2, 1.5 + 0.5j, max_len=3, max_exp=2)
    assert r.accepted, r.diagnostics
    assert r.residual <= 1e-9
    assert r.parity_even
    assert abs(complex(word_polynomial(r.word)(r.zeta)) - 2) < 1e-9


def test_witness_at_figure_eight():
    r = supergroup_witness(FIGURE_EIGHT.z, 1.5 + 0.5j, max_len=3, max_exp=2, threads=2)
    assert r.accepted, r.diagnostics
    assert r.branch_check <= 2e-9
    obj = r.to_json()
    assert obj["accepted"] is True and obj["word"] == list(r.word)


def test_verify_witness_rejects_wrong_point():
    r = verify_witness((1, 1), 1.3 + 0.1j, 2)
    assert not r.accepted
    assert "preimage residual" in r.diagnostics


def test_conjugate_word_parity():
    for s in [(1,), (1, 2), (2, -1, 3)]:
        assert conjugate_word(s).count("b") % 2 == 0


def test_density_trend_non_increasing():
    d = density_trend(2, 1.5 + 0.5j, [20, 40, 80], max_len=5, max_exp=2)
    assert d[0] >= d[1] >= d[2]


def test_distinct_count():
    assert distinct_count([1, 1 + 1e-10, 2]) == 2


def test_nielsen_period_two():
    r = nielsen_witness((1, 1), 1)
    assert r.found
    # the exact period-2 cycles include (1 +- i sqrt 3)/2
    w = cmath.exp(1j * math.pi / 3)
    assert any(any(abs(z - w) < 1e-9 for z in c.cycle.points) for c in r.cycles)
    assert all(c.cycle_error < 1e-12 for c in r.cycles)
    assert all(e < 1e-12 for _, e in r.matrix_check)


def test_nielsen_two_classes():
    r = nielsen_witness((1, 1), 2)
    assert len(r.cycles) == 18
    assert all(c.distinct == 4 for c in r.cycles)
    assert [i for i, _ in r.matrix_check] == [1, 2, 3, 4]
    assert all(e < 1e-9 for _, e in r.matrix_check)


def test_matrix_iterate_check_generic_point():
    assert all(e < 1e-10 for _, e in matrix_iterate_check((1, 2), 0.3 + 0.4j, 2))


def test_nonfree():
    c = nonfree_certificate(2)
    assert c is not None and c.word == (1, 1)
    assert c.trace_residual <= 1e-9
    assert nonfree_certificate(5) is None
    with pytest.raises(ValueError):
        nonfree_certificate(0)
