import math

import numpy as np
import pytest

from sharptail import (
    BerryEsseenConstants,
    DiscreteDistribution,
    SumModel,
    build_lattice,
    chernoff_bound,
    expansion_error,
    expansion_interval,
    extremal_model,
    hoeffding_bound,
    normal_tail_upper,
    rademacher_model,
    saddlepoint_interval,
    subgaussian_multiplier,
    subgaussian_upper,
    third_moment_interval,
    tilt_cap,
    two_sided_interval,
    two_sided_multiplier,
)
from sharptail.classical import SQRT_2PI, SQRT_PI
from sharptail.errors import HypothesisError, ParameterError, RangeError

C0_TWO_SIDED = 2.804189583547756286948      # 2.24 + 1/sqrt(pi)
C0_SUBGAUSSIAN = 23.87360290306685955045    # sqrt(2) + 16 sqrt(2 pi) 0.56
EPS0_FACTOR = 9.851419542005454933378       # 1.58/sqrt(pi) + 16*0.56


class TestTiltCap:
    def test_zero(self):
        assert tilt_cap(0.0, 1.0, 1.0) == 0.0

    def test_near_boundary_value(self):
        # r = 0.2475 -> sqrt(1 - 0.99) = 0.1 -> t = 0.495 / 1.1 = 0.45
        assert tilt_cap(0.2475, 1.0, 1.0) == pytest.approx(0.45, rel=1e-12)

    def test_boundary_rejected(self):
        with pytest.raises(RangeError):
            tilt_cap(0.25, 1.0, 1.0)

    def test_monotone(self):
        vals = [tilt_cap(x, 1.0, 1.0) for x in np.linspace(0, 0.2499, 200)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestExpansionError:
    def test_rademacher_at_zero(self):
        for n in (16, 100, 2500):
            m = rademacher_model(n)
            assert expansion_error(m, 0.0, 1.0) == pytest.approx(
                EPS0_FACTOR / math.sqrt(n), rel=1e-13
            )

    def test_increasing_in_x(self):
        m = rademacher_model(100)
        xs = np.linspace(0, 0.2499 * m.sigma, 100)
        vals = [expansion_error(m, x, 1.0) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestExpansionInterval:
    def test_at_zero(self):
        m = rademacher_model(100)
        iv = expansion_interval(m, 0.0, 1.0)
        assert iv.center == 0.5
        assert iv.band == pytest.approx(EPS0_FACTOR / 10, rel=1e-13)

    def test_containment_large_rademacher(self):
        m = rademacher_model(10**4)
        lat = build_lattice(m)
        for x in np.linspace(0, 3, 31):
            iv = expansion_interval(m, x, 1.0)
            p = lat.tail(x * 100.0, strict=True)
            assert iv.lower <= p <= iv.upper

    def test_upper_capped_by_hoeffding(self):
        m = rademacher_model(64)
        for x in np.linspace(0, 1.9, 20):
            iv = expansion_interval(m, x, 1.0)
            assert iv.upper <= hoeffding_bound(x, m.sigma, m.n) + 1e-15
            assert iv.upper <= 1.0

    def test_hypothesis_gate(self):
        wide = DiscreteDistribution(((2.0, 0.2), (-0.5, 0.8)))
        with pytest.raises(HypothesisError):
            expansion_interval(SumModel(((wide, 4),)), 0.1, 2.0)

    def test_out_of_range_flagged(self):
        m = rademacher_model(100)
        iv = expansion_interval(m, 2.6, 1.0)  # limit is 2.5
        assert not iv.valid
        assert math.isnan(iv.center)
        assert iv.lower == 0.0
        assert iv.upper == pytest.approx(min(1.0, hoeffding_bound(2.6, 10.0, 100)), rel=1e-15)


class TestSaddlepointInterval:
    def test_at_zero(self):
        m = rademacher_model(100)
        iv = saddlepoint_interval(m, 0.0)
        assert iv.center == 0.5
        assert iv.band == pytest.approx(16 * 0.56 * 100 / 1000.0, rel=1e-13)

    def test_containment(self):
        m = rademacher_model(400)
        lat = build_lattice(m)
        for x in np.linspace(0, 4, 17):
            iv = saddlepoint_interval(m, x)
            p = lat.tail(x * 20.0, strict=True)
            assert iv.lower <= p <= iv.upper

    def test_tighter_than_expansion_band(self):
        m = rademacher_model(10**4)
        for x in np.linspace(0, 1, 11):
            assert saddlepoint_interval(m, x).band <= expansion_interval(m, x, 1.0).band


class TestThirdMomentInterval:
    def test_at_zero(self):
        m = rademacher_model(10**4)
        iv = third_moment_interval(m, 0.0)
        assert iv.lower == pytest.approx(max(0.0, 0.5 - 16 / 100), rel=1e-13)
        assert iv.upper == pytest.approx(min(1.0, 0.5 + 16 / 100), rel=1e-13)

    def test_containment_point(self):
        m = rademacher_model(10**4)
        lat = build_lattice(m)
        iv = third_moment_interval(m, 0.5)
        p = lat.tail(50.0, strict=True)
        assert iv.lower <= p <= iv.upper

    def test_band_to_center_vanishes(self):
        # at fixed x the relative band 16 B / (sigma Theta(x)) shrinks like 1/sqrt(n)
        ratios = []
        for n in (100, 400, 1600, 6400):
            iv = third_moment_interval(rademacher_model(n), 0.5)
            ratios.append(iv.band / iv.center)
        assert all(b < a for a, b in zip(ratios, ratios[1:]))
        # the relative band is exactly 16 B / (sigma Theta(x)): halves as sigma doubles
        assert ratios[-1] == pytest.approx(ratios[-2] / 2, rel=1e-12)

    def test_b_override_must_dominate_ratio(self):
        m = rademacher_model(100)
        with pytest.raises(HypothesisError):
            third_moment_interval(m, 0.1, B=0.5)
        iv = third_moment_interval(m, 0.1, B=2.0)  # larger B stays valid, wider
        assert iv.band > third_moment_interval(m, 0.1).band


class TestNormalTailUpper:
    def test_at_zero(self):
        m = rademacher_model(100)
        assert normal_tail_upper(m, 0.0) == pytest.approx(
            0.5 * (1 + 16 * SQRT_2PI / 10), rel=1e-13
        )

    def test_dominates_exact(self):
        m = rademacher_model(100)
        lat = build_lattice(m)
        for x in np.linspace(0, 1.0, 21):
            assert normal_tail_upper(m, x) >= lat.tail(x * 10.0, strict=True)

    def test_shrunk_argument_fattens_tail(self):
        from sharptail import bernstein_arg, normal_cdf

        for x in np.linspace(0.1, 5, 20):
            assert bernstein_arg(x, 7.0) < x
            assert 1 - normal_cdf(bernstein_arg(x, 7.0)) > 1 - normal_cdf(x)

    def test_out_of_range(self):
        with pytest.raises(RangeError):
            normal_tail_upper(rademacher_model(100), 1.5)  # limit 0.1 sigma/B = 1


class TestSubgaussian:
    def test_multiplier_at_zero(self):
        assert subgaussian_multiplier(0.0, 1.0, 1.0) == pytest.approx(C0_SUBGAUSSIAN, rel=1e-13)

    def test_multiplier_cap(self):
        for x in np.linspace(0, 0.1, 500):
            assert subgaussian_multiplier(x, 1.0, 1.0) <= 32.47

    def test_upper_dominates_exact(self):
        m = rademacher_model(10**4)
        lat = build_lattice(m)
        for x in np.linspace(0, 3, 31):
            assert subgaussian_upper(m, x) >= lat.tail(x * 100.0, strict=True)

    def test_hypothesis_gate(self):
        # extremal law with v = 0.25 has upper = 1 > sigma_i = 0.5
        with pytest.raises(HypothesisError):
            subgaussian_upper(extremal_model(0.25, 10), 0.1)

    def test_range_gate(self):
        with pytest.raises(RangeError):
            subgaussian_upper(rademacher_model(100), 2.5)


class TestTwoSided:
    def test_multiplier_at_zero(self):
        assert two_sided_multiplier(0.0, 5.0) == pytest.approx(C0_TWO_SIDED, rel=1e-14)
        assert C0_TWO_SIDED == pytest.approx(2.24 + 1 / SQRT_PI, rel=1e-15)

    def test_multiplier_cap(self):
        for x in np.linspace(0, 0.1, 500):
            assert two_sided_multiplier(x, 1.0) <= 3.08

    @pytest.mark.parametrize("n", [100, 400])
    def test_containment(self, n):
        m = rademacher_model(n)
        lat = build_lattice(m)
        sigma = m.sigma
        for x in np.linspace(0, 0.606 * sigma, 40):
            p = lat.tail(x * sigma, strict=True)
            if p < 1e-12:
                continue
            iv = two_sided_interval(m, x)
            assert iv.lower <= p <= iv.upper

    def test_beyond_range_flagged_with_hoeffding_cap(self):
        m = rademacher_model(100)
        x = 0.7 * m.sigma
        iv = two_sided_interval(m, x)
        assert not iv.valid
        assert iv.upper == pytest.approx(min(1.0, hoeffding_bound(x, m.sigma, m.n)), rel=1e-15)
        assert iv.lower == 0.0

    def test_hypothesis_gate(self):
        wide = DiscreteDistribution(((0.5, 0.8), (-2.0, 0.2)))
        with pytest.raises(HypothesisError):
            two_sided_interval(SumModel(((wide, 4),)), 0.1)


class TestIntervalShapes:
    def test_contains_center_lower_nonneg_upper_capped(self):
        m = rademacher_model(64)
        for x in np.linspace(0, 1.9, 25):
            for iv in (
                expansion_interval(m, x, 1.0),
                saddlepoint_interval(m, x),
                two_sided_interval(m, x),
            ):
                assert iv.lower >= 0.0
                assert iv.upper <= 1.0
                assert iv.lower <= min(iv.center, iv.upper)

    def test_band_monotone_in_x(self):
        m = rademacher_model(400)
        for build in (
            lambda x: expansion_interval(m, x, 1.0),
            lambda x: two_sided_interval(m, x),
        ):
            bands = [build(x).band for x in np.linspace(0, 2, 15)]
            rel = [b / chernoff_bound(m, x) for b, x in zip(bands, np.linspace(0, 2, 15))]
            assert all(b >= a - 1e-12 for a, b in zip(rel, rel[1:]))

    def test_serialization(self):
        iv = two_sided_interval(rademacher_model(100), 0.5)
        d = iv.to_dict()
        assert d["name"] == "two_sided"
        assert d["valid"] is True
        assert set(d) >= {"x", "lower", "center", "upper", "band", "t_param", "range_limit"}


class TestConstantsPolicy:
    def test_default_universal(self):
        c = BerryEsseenConstants()
        assert c.resolve(1.0) == 0.56
        assert c.resolve(1.0, "iid") == 0.4784
        assert c.resolve(1.0, "binomial") == 0.4215
        assert c.c3_lower == 0.4097

    def test_fractional_delta_requires_user_constant(self):
        with pytest.raises(ParameterError):
            BerryEsseenConstants().resolve(0.5)
        assert BerryEsseenConstants(c_user=0.7).resolve(0.5) == 0.7

    def test_unknown_regime(self):
        with pytest.raises(ParameterError):
            BerryEsseenConstants().resolve(1.0, "bogus")
