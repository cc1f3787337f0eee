#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "photonstat/correlations.hpp"
#include "photonstat/detection.hpp"

using namespace photonstat;
using Catch::Matchers::WithinAbs;

namespace {

bool within_sigma(const EstimateResult& est, double truth, double k) {
    return std::abs(est.value - truth) <= k * est.std_error;
}

double combined_sigma(const EstimateResult& a, const EstimateResult& b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

} // namespace

TEST_CASE("config validation") {
    REQUIRE_THROWS_AS(validate(SimulationConfig{0, 1, 1.0, false, 10}), std::domain_error);
    REQUIRE_THROWS_AS(validate(SimulationConfig{10, 1, 0.0, false, 10}), std::domain_error);
    REQUIRE_THROWS_AS(validate(SimulationConfig{10, 1, 1.5, false, 10}), std::domain_error);
}

TEST_CASE("sampling determinism and partition merging") {
    auto dist = make_two_component(0.6, 0.2);
    SimulationConfig config{5000, 97, 0.8, true, 50};

    auto s1 = sample(dist, config);
    auto s2 = sample(dist, config);
    REQUIRE(s1.counts == s2.counts);
    REQUIRE(s1.counts_b == s2.counts_b);
    REQUIRE(s1.histogram == s2.histogram);

    // shot-index keying: any partition concatenates to the full run
    auto left = sample_range(dist, config, 0, 1234);
    auto right = sample_range(dist, config, 1234, config.shots);
    std::vector<std::uint32_t> joined(left.counts);
    joined.insert(joined.end(), right.counts.begin(), right.counts.end());
    REQUIRE(joined == s1.counts);

    std::uint64_t hist_total = 0;
    for (auto h : s1.histogram)
        hist_total += h;
    REQUIRE(hist_total == s1.shots_used());
}

TEST_CASE("trivial records") {
    SimulationConfig config{1000, 7, 1.0, false, 100};
    auto zeros = sample(vacuum_state(), config);
    REQUIRE(std::all_of(zeros.counts.begin(), zeros.counts.end(),
                        [](std::uint32_t c) { return c == 0; }));
    REQUIRE_THROWS_AS(estimate_g2(zeros), estimation_error);
    REQUIRE_THROWS_AS(post_select(zeros), estimation_error);

    auto ones = sample(make_fock(1), config);
    REQUIRE(std::all_of(ones.counts.begin(), ones.counts.end(),
                        [](std::uint32_t c) { return c == 1; }));
    auto g = estimate_g2(ones);
    REQUIRE(g.value == 0.0);
    REQUIRE(g.std_error == 0.0);
    REQUIRE(estimate_vacuum(ones).value == 0.0);
    // no vacuum shots: post-selection is the identity
    REQUIRE(post_select(ones).counts == ones.counts);
}

TEST_CASE("sampled histogram matches the Poisson pmf (chi-squared)") {
    const double mean = 1.0;
    auto dist = make_coherent(mean);
    SimulationConfig config{1000000, 12345, 1.0, false, 0};
    auto s = sample(dist, config);

    const double m = static_cast<double>(s.shots_used());
    double stat = 0.0;
    int bins = 0;
    double tail_expected = m, tail_observed = m;
    for (std::size_t n = 0; n < s.histogram.size() || tail_expected > 5.0; ++n) {
        const double expected = m * dist.prob(n);
        if (expected < 5.0)
            break; // pool everything beyond into one tail bin
        const double observed =
            n < s.histogram.size() ? static_cast<double>(s.histogram[n]) : 0.0;
        stat += (observed - expected) * (observed - expected) / expected;
        tail_expected -= expected;
        tail_observed -= observed;
        ++bins;
    }
    stat += (tail_observed - tail_expected) * (tail_observed - tail_expected) /
            tail_expected;
    boost::math::chi_squared chi2(bins); // bins+1 cells, no fitted parameters
    const double p_value = boost::math::cdf(boost::math::complement(chi2, stat));
    INFO("chi2 = " << stat << ", p = " << p_value);
    REQUIRE(p_value > 0.001);
}

TEST_CASE("estimator convergence to analytic g2") {
    SimulationConfig config{1000000, 31, 1.0, false, 300};
    auto coherent_est = estimate_g2(sample(make_coherent(1.0), config));
    REQUIRE(within_sigma(coherent_est, 1.0, 3.0));

    config.seed = 32;
    auto two_comp_est = estimate_g2(sample(make_two_component(0.9, 0.05), config));
    REQUIRE(within_sigma(two_comp_est, 0.1, 3.0));
}

TEST_CASE("estimate_vacuum") {
    SimulationConfig config{1000000, 33, 1.0, false, 0};
    auto diluted = estimate_vacuum(sample(add_vacuum(make_fock(1), 0.9), config));
    REQUIRE(within_sigma(diluted, 0.9, 3.0));

    config.seed = 34;
    auto coherent_x = estimate_vacuum(sample(make_coherent(1.0), config));
    REQUIRE(within_sigma(coherent_x, std::exp(-1.0), 3.0));
}

TEST_CASE("post_select") {
    std::mt19937_64 rng(51);
    auto base = test_helpers::random_distribution_with_vacuum(rng, 0.0, 4);
    const double x = 0.35;
    SimulationConfig config{200000, 35, 1.0, false, 0};
    auto s = sample(add_vacuum(base, x), config);
    auto kept = post_select(s);
    const double survival =
        static_cast<double>(kept.shots_used()) / static_cast<double>(s.shots_used());
    REQUIRE_THAT(survival, WithinAbs(1.0 - x, 3.0 * std::sqrt(x * (1.0 - x) / 200000.0)));
    for (std::size_t i = 0; i < kept.counts.size(); ++i)
        REQUIRE(kept.total(i) >= 1);
}

TEST_CASE("post-selected vacuum + |2> mixture estimates g2 = 1/2 exactly") {
    auto state = mix({{vacuum_state(), 0.5}, {make_fock(2), 0.5}});
    SimulationConfig config{200000, 36, 1.0, false, 300};
    auto m = measure_effective_g2(state, config);
    // every post-selected shot is a two-photon event, so the estimate is exact
    REQUIRE_THAT(m.g2_eff_direct.value, WithinAbs(0.5, 1e-15));
    REQUIRE_THAT(m.g2_eff_scaled.value, WithinAbs(0.5, 1e-15));
    REQUIRE(within_sigma(m.g2_raw, 1.0, 3.0));
}

TEST_CASE("measure_effective_g2") {
    SECTION("diluted single photon gives exact zeros") {
        SimulationConfig config{20000, 37, 1.0, false, 200};
        auto m = measure_effective_g2(add_vacuum(make_fock(1), 0.5), config);
        REQUIRE(m.g2_raw.value == 0.0);
        REQUIRE(m.g2_eff_direct.value == 0.0);
        REQUIRE(m.g2_eff_direct.std_error == 0.0);
        REQUIRE(m.g2_eff_scaled.value == 0.0);
    }
    SECTION("two routes agree with the analytic effective g2") {
        auto state = add_vacuum(make_two_component(0.9, 0.05), 0.8);
        const double target = summarize(state).g2_eff; // 0.095
        REQUIRE_THAT(target, WithinAbs(0.095, 1e-12));
        SimulationConfig config{1000000, 38, 1.0, false, 300};
        auto m = measure_effective_g2(state, config);
        REQUIRE(within_sigma(m.g2_raw, 0.5, 3.0));
        REQUIRE(within_sigma(m.g2_eff_direct, target, 3.0));
        REQUIRE(within_sigma(m.g2_eff_scaled, target, 3.0));
        REQUIRE(std::abs(m.g2_eff_direct.value - m.g2_eff_scaled.value) <=
                3.0 * combined_sigma(m.g2_eff_direct, m.g2_eff_scaled));
    }
    SECTION("pure vacuum input propagates the post-selection error") {
        SimulationConfig config{100, 39, 1.0, false, 10};
        REQUIRE_THROWS_AS(measure_effective_g2(vacuum_state(), config), estimation_error);
    }
}

TEST_CASE("binomial loss keeps g2 but inflates the vacuum fraction") {
    auto state = make_two_component(0.7, 0.1);
    const double analytic = g2(state);
    SimulationConfig config{200000, 40, 1.0, false, 300};

    double prev_x = -1.0;
    EstimateResult reference{};
    for (double eta : {1.0, 0.5, 0.2}) {
        config.efficiency = eta;
        auto s = sample(state, config);
        auto est = estimate_g2(s);
        REQUIRE(within_sigma(est, analytic, 3.0));
        if (eta < 1.0)
            REQUIRE(std::abs(est.value - reference.value) <=
                    3.0 * combined_sigma(est, reference));
        else
            reference = est;
        const double x = estimate_vacuum(s).value;
        REQUIRE(x > prev_x); // more loss, more empty shots
        prev_x = x;
    }
}

TEST_CASE("split coincidence estimator agrees with the plug-in form") {
    SimulationConfig config{200000, 41, 1.0, true, 300};
    auto s = sample(make_coherent(1.0), config);
    auto coincidence = estimate_g2(s);
    auto plug_in = estimate_g2(merged_totals(s));
    REQUIRE(within_sigma(coincidence, 1.0, 3.0));
    REQUIRE(within_sigma(plug_in, 1.0, 3.0));
    REQUIRE(std::abs(coincidence.value - plug_in.value) <=
            3.0 * combined_sigma(coincidence, plug_in));
}

TEST_CASE("bootstrap standard error scales like 1/sqrt(shots)") {
    auto dist = make_coherent(1.0);
    double se[3];
    std::uint64_t shots[3] = {10000, 100000, 1000000};
    for (int i = 0; i < 3; ++i) {
        SimulationConfig config{shots[i], 42, 1.0, false, 400};
        se[i] = estimate_g2(sample(dist, config)).std_error;
    }
    const double root10 = std::sqrt(10.0);
    REQUIRE_THAT(se[0] / se[1], WithinAbs(root10, 0.2 * root10));
    REQUIRE_THAT(se[1] / se[2], WithinAbs(root10, 0.2 * root10));
}
