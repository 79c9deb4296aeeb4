import math

import pytest

from wordlab.experiments import chebotarev_average, chebotarev_specs, commutator_power_word, fgi_deviation, random_relator_survey


def test_commutator_power_word():
    assert str(commutator_power_word(2)) == "abABcdCD"
    assert commutator_power_word(1).r == 2


def test_fgi_t1_identity_ratio():
    rep = fgi_deviation("SL2", 5, 1)
    # |[x,y]^-1(e)| = |G| k(G), so the ratio over e is |G| k / p^3
    assert rep["ratios"][0] == pytest.approx(120 * 9 / 125)


def test_pgl2_stays_away_from_one():
    rep = fgi_deviation("PGL2", 5, 2)
    assert rep["max_deviation"] > 0.9
    assert all(r == pytest.approx(0, abs=1e-12) or r > 1.5 for r in rep["ratios"])


def test_chebotarev_small_window():
    spec = chebotarev_specs()["x^2+1"]
    est = chebotarev_average(spec, 100, 2000)["estimate"]
    assert abs(est - 1) < 0.15


def test_survey_is_seeded():
    a = random_relator_survey(1, [6], [11, 13, 17, 19, 23, 29, 31, 37], seed=3)
    b = random_relator_survey(1, [6], [11, 13, 17, 19, 23, 29, 31, 37], seed=3)
    assert a == b
