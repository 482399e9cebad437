import json
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from primesums import bounds, primes, verify
from primesums.errors import DomainError, UnknownInequalityError
from primesums.verify import VerificationReport, find_crossover, residual_table, verify_range


def cell_oracle(ident, lo, hi):
    """Fails/holds per integer cell from samples of the continuous side inside each cell.

    A cell [x, x+1) is marked failing if any sample violates the inequality;
    samples are the left end, the middle and a point just left of x+1.
    """
    e = bounds.get_entry(ident)
    f = bounds.continuous_side(e)
    out = {}
    tiny = Fraction(1, 10**12)
    with mpmath.workdps(40):
        for x in range(lo, hi + 1):
            T = primes.state_at_x(x).sum if e.step == "S" else primes.state_at_x(x).n
            ok = True
            for t in (Fraction(x), x + Fraction(1, 2), x + 1 - tiny):
                fv = f(mpmath.mpf(t.numerator) / t.denominator)
                m = e.oriented(mpmath.mpf(T), fv)
                ok &= bool(m > 0 or (m == 0 and not e.strict))
            out[x] = ok
    return out


@pytest.mark.parametrize("ident,lo,hi", [("mnr_6_x", 69990, 70900), ("cor_6_8", 355900, 356100),
                                         ("pi_upper_4_1", 22, 400), ("pi_lower_rs", 17, 400),
                                         ("pi_upper_4_4", 6, 200), ("cor_6_10", 302800, 303100)])
def test_cells_match_sampling_oracle(ident, lo, hi):
    rep = verify_range(ident, lo, hi, precision="dd")
    oracle = cell_oracle(ident, lo, hi)
    bad = sorted(x for x, ok in oracle.items() if not ok)
    assert rep.indeterminate_count == 0
    assert rep.failures == bad
    assert rep.holds_count + rep.fails_count == hi - lo + 1


def test_mnr_stated_threshold_is_too_small():
    rep = verify_range("mnr_6_x", 70001, 10**6)
    assert rep.fails_count == 100
    assert rep.failures[0] == 70001 and rep.failures[-1] == 70840
    assert rep.onset == 70841
    assert not rep.reproduces_claim
    assert verify_range("mr_6_8", 70841, 10**6).clean


@pytest.mark.parametrize("ident,search_max,onset", [("cor_4_10", 10**6, 26220), ("mandl", 100, 9),
                                                    ("cor_6_8", 10**6, 355992)])
def test_crossovers(ident, search_max, onset):
    c = find_crossover(ident, search_max)
    assert c.onset == onset
    assert c.status_before == "fails"
    assert "verified on window" in c.label
    assert c.matches_claim


def test_crossover_without_onset():
    c = find_crossover("sinha_4_18", 5000)
    assert c.onset is None
    assert "does not hold" in c.label


def verdicts(rep):
    # tier_counts count checks, which depend on how runs are cut into chunks
    d = rep.to_json(include_elapsed=False)
    d.pop("tier_counts")
    return d


def test_chunk_independence():
    a, m, b = 100000, 170001, 300000
    whole = verify_range("thm_4_9", a, b)
    left = verify_range("thm_4_9", a, m)
    right = verify_range("thm_4_9", m + 1, b)
    assert whole.holds_count == left.holds_count + right.holds_count
    tiny = verify_range("thm_4_9", a, b, chunk_size=777)
    assert verdicts(tiny) == verdicts(whole)
    x_whole = verify_range("mnr_6_x", 60000, 90000)
    x_tiny = verify_range("mnr_6_x", 60000, 90000, chunk_size=1000)
    assert verdicts(x_tiny) == verdicts(x_whole)


def test_parallel_matches_serial():
    s = verify_range("cor_5_5", 2, 400000, chunk_size=1 << 16)
    p = verify_range("cor_5_5", 2, 400000, chunk_size=1 << 16, threads=3)
    assert p.dumps(include_elapsed=False) == s.dumps(include_elapsed=False)
    sx = verify_range("mnr_6_x", 2, 300000, chunk_size=1 << 15)
    px = verify_range("mnr_6_x", 2, 300000, chunk_size=1 << 15, threads=3)
    assert px.dumps(include_elapsed=False) == sx.dumps(include_elapsed=False)


def test_streaming_path_matches_table(monkeypatch):
    ref_n = verify_range("cor_4_10", 26000, 90000, chunk_size=1 << 14)
    ref_x = verify_range("mnr_6_x", 69000, 200000, chunk_size=1 << 15)
    monkeypatch.setattr(primes.PrimeTable, "fits", lambda self, limit: False)
    got_n = verify_range("cor_4_10", 26000, 90000, chunk_size=1 << 14)
    got_x = verify_range("mnr_6_x", 69000, 200000, chunk_size=1 << 15)
    par_x = verify_range("mnr_6_x", 69000, 200000, chunk_size=1 << 15, threads=2)
    for a, b in ((ref_n, got_n), (ref_x, got_x), (ref_x, par_x)):
        assert verdicts(a) == verdicts(b)


def test_failure_cap_and_counts():
    rep = verify_range("sinha_4_18", 2, 5000, failure_cap=10)
    assert rep.fails_count == 4999
    assert rep.failures == list(range(2, 12))
    assert rep.onset is None
    assert not rep.reproduces_claim


def test_exact_entries_never_indeterminate():
    for ident in ("mandl", "sun_quarter", "hassani_twelfth", "hassani_upper"):
        rep = verify_range(ident, 1, 300000)
        assert rep.indeterminate_count == 0
        assert rep.tier_counts["exact"] == 300000


def test_precision_modes_agree_pointwise():
    for ident, lo in (("cor_5_2", 355000), ("cor_4_8", 348000), ("lemma_4_5", 200)):
        e = bounds.get_entry(ident)
        blk = primes.prime_table().block(lo, lo + 400)
        data = {"n": blk.indices(), "p": blk.primes, "S": blk.sums, "twoB": blk.twoB()}
        strict = np.full(len(blk), e.strict)
        tiers = dict.fromkeys(verify.TIERS, 0)
        a = verify.classify_points(e, blk.indices(), data, strict, "dd", tiers)
        b = verify.classify_points(e, blk.indices(), data, strict, "bigfloat", tiers)
        resolved = (a != verify.INDET) & (b != verify.INDET)
        assert np.array_equal(a[resolved], b[resolved])


def test_report_round_trip(tmp_path):
    rep = verify_range("mandl", 2, 1000, report_path=tmp_path / "r.json", csv_path=tmp_path / "f.csv")
    again = VerificationReport.read(tmp_path / "r.json")
    assert again == rep
    assert again.summary() == rep.summary()
    rows = (tmp_path / "f.csv").read_text().splitlines()
    assert rows[0] == "inequality_id,point,status"
    assert [r.split(",")[1] for r in rows[1:]] == ["2", "3", "4", "5", "6", "8"]
    assert json.loads(rep.dumps(include_elapsed=False))["onset"] == 9


def test_range_guards():
    with pytest.raises(DomainError):
        verify_range("cor_5_2", 10, 5)
    with pytest.raises(DomainError):
        verify_range("pi_lower_4_2_c5", 100, 1000)
    with pytest.raises(UnknownInequalityError):
        verify_range("nope", 1, 2)
    with pytest.raises(ValueError):
        verify_range("mandl", 2, 10, precision="quad")


def test_real_variable_entry():
    rep = verify_range("li_upper_6_10", 10**9, 10**9 + 2000)
    assert rep.clean and rep.holds_count == 2001


def test_residual_trend_and_values():
    rows = residual_table(2, "T", [10**3, 10**6])
    assert abs(rows[1].gap) < abs(rows[0].gap)
    assert rows[0].prediction == pytest.approx(float(mpmath.log(mpmath.log(1000))) ** 2
                                               - 7 * float(mpmath.log(mpmath.log(1000))) + 14.5)
    v = residual_table(2, "V", [10**3, 10**6])
    assert abs(v[1].gap) < abs(v[0].gap)
    with pytest.raises(ValueError):
        residual_table(2, "R", [100])
