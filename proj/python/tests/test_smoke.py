import math
import os

import pytest

import freeconv as fc

DATA = os.environ.get("FREECONV_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "tests", "data"))


def bernoulli():
    return fc.make_atomic([(-1.0, 0.5), (1.0, 0.5)])


def test_measure_basics():
    b = bernoulli()
    assert b.mean == 0.0
    assert b.variance == pytest.approx(1.0)
    assert fc.moment(b, 4) == pytest.approx(1.0)
    # dilate(mu, s) is the law of X / s
    assert fc.dilate(b, 2.0).atoms == [(-0.5, 0.5), (0.5, 0.5)]


def test_catalan_and_partitions():
    assert fc.catalan(30) == 3814986502092304
    assert len(fc.enumerate_nc(5)) == 42
    assert sum(fc.count_nc_blocks(6, s) for s in range(1, 7)) == fc.catalan(6)


def test_cumulant_round_trip():
    m = fc.cumulants_to_moments([0.0, 1.0, 0.0, 0.0])
    assert m == pytest.approx([0.0, 1.0, 0.0, 2.0])
    assert fc.moments_to_cumulants(m) == pytest.approx([0.0, 1.0, 0.0, 0.0], abs=1e-12)


def test_semicircle_cauchy():
    z = 0.3 + 1.0j
    expected = (z - complex(z * z - 4) ** 0.5) / 2
    if expected.imag > 0:
        expected = (z + complex(z * z - 4) ** 0.5) / 2
    assert fc.cauchy(fc.FamilySpec.semicircle(), z) == pytest.approx(expected, abs=1e-12)


def test_power_of_bernoulli_is_arcsine():
    # free convolution square of the symmetric Bernoulli law is arcsine on [-2, 2]
    xs = fc.linspace(-2.5, 2.5, 501)
    table = fc.power_cdf(bernoulli(), 2, xs, [1e-3, 5e-4])
    for x, v in zip(table.xs, table.values):
        exact = 0.0 if x <= -2 else 1.0 if x >= 2 else 0.5 + math.asin(x / 2) / math.pi
        assert abs(v - exact) < 1e-2


def test_solve_zn_residual():
    r = fc.solve_Zn(bernoulli(), 3, 0.5 + 0.5j)
    assert r.residual < 1e-10
    assert r.Zn.imag > 0


def test_kolmogorov_of_identical_tables():
    t = fc.measure_to_cdf(bernoulli())
    assert fc.kolmogorov(t, t)[0] == 0.0


def test_idcheck():
    assert fc.is_free_id_sampled(fc.FamilySpec.meixner(1.0))[0] == "PassesSampledCriterion"
    assert fc.is_free_id_sampled(bernoulli())[0] != "PassesSampledCriterion"


def test_errors_carry_codes():
    with pytest.raises(fc.FreeconvError) as info:
        fc.solve_Zn(bernoulli(), 2, 0.5 - 1.0j)
    assert info.value.code == "NotUpperHalfPlane"
    with pytest.raises(fc.FreeconvError):
        fc.make_atomic([(0.0, -1.0)])


def test_load_law_from_file():
    law = fc.load_law(os.path.join(DATA, "bernoulli.json"))
    assert law.moment(2) == pytest.approx(1.0)


def test_rates_small():
    report = fc.run_rate_experiment(bernoulli(), [4, 16], (-4.0, 4.0, 401))
    assert [row.n for row in report.rows] == [4, 16]
    assert all(not row.failed for row in report.rows)
    assert report.rows[1].distance < report.rows[0].distance
