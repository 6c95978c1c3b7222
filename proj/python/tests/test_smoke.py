import pytest

import primestrings as ps


def test_beatty_pi_primes():
    assert ps.special_primes("beatty:pi", 1, 100) == [3, 31, 37, 43, 47, 53, 59, 97]
    assert ps.beatty_member("pi", 31)
    assert not ps.beatty_member("pi", 32)


def test_primes_and_counts():
    assert ps.sieve_range(0, 30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not ps.is_prime(293930)
    assert ps.count_primes_ap(100, 4)[1] == 11
    assert ps.count_S_q(4, 30) == 6
    assert ps.count_psi(30, 5) == 12


def test_strings():
    hit = ps.find_first_string("all", 3, 4, 1, 200)
    assert hit["primes"] == [89, 97, 101]
    assert hit["first_occurrence"]
    assert ps.scan_all_strings("all", 4, 1, 30) == [(5, 1, 2), (13, 2, 5), (29, 1, 9)]
    miss = ps.find_first_string("all", 9, 4, 1, 200)
    assert miss["found"] is False
    assert ps.residue_census("beatty:pi", 100, 7)[3] == 3


def test_maier():
    cfg = ps.build_Q(5, 4, 20, 3)
    assert cfg["Q"] == 293930
    assert cfg["P_a"] == [2, 7, 13, 17, 19]
    assert ps.classify_residue(7, 12) == "A_plus"
    assert ps.crt_anchor(7, 3, [2, 3, 5], plus=False) == 60
    record = ps.maier(5, 4, y=20, p0=3, rows=3)
    assert record["Q"] == 293930
    assert len(record["per_row"]) == 3


def test_bounds_and_validation():
    assert ps.string_bound_pm(10.0, 2.0, 4) == pytest.approx(5 ** 0.25, abs=1e-12)
    assert ps.case1_proxy(4.0, 1.0, 2) == 2.0
    report = ps.validate_g("loglog", [1e4, 1e5, 1e6, 1e7, 1e8, 1e9])
    assert abs(report["alpha_g_samples"][0][2] - 1.0) < 0.05


def test_errors():
    with pytest.raises(ps.PrimestringsError):
        ps.find_first_string("all", 2, 4, 2, 100)
    with pytest.raises(ValueError):
        ps.special_primes("beatty:tau", 0, 10)
