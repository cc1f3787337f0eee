#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "photonstat/distribution.hpp"

namespace photonstat {

/// Thrown when a record cannot support the requested estimate
/// (all-vacuum record, empty post-selection).
class estimation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters of one simulated detection run.
struct SimulationConfig {
    std::uint64_t shots = 1;
    std::uint64_t seed = 0;
    double efficiency = 1.0;              // per-photon survival probability
    bool split = false;                   // 50/50 HBT split into two channels
    std::uint64_t bootstrap_resamples = 1000;
};

inline void validate(const SimulationConfig& config) {
    if (config.shots < 1)
        throw std::domain_error("simulation needs at least one shot");
    if (!(config.efficiency > 0.0) || config.efficiency > 1.0)
        throw std::domain_error("efficiency must be in (0,1]");
}

/// Deterministic per-shot random stream: a splitmix64 sequence whose start
/// state is a hash of (seed, stream index). Streams for different indices
/// are independent regardless of how many values each one consumes, so
/// shot ranges can be generated in any order or in parallel and merged by
/// index with bit-identical results.
class ShotRng {
public:
    ShotRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^
                     mix(stream + 0xBF58476D1CE4E5B9ULL))) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) via multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    /// Binomial(n, p) by n Bernoulli trials; n is small here (photon counts).
    std::uint32_t next_binomial(std::uint32_t n, double p) {
        std::uint32_t k = 0;
        for (std::uint32_t i = 0; i < n; ++i)
            if (next_unit() < p)
                ++k;
        return k;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

namespace detail {

// Stream tag separating bootstrap index draws from shot generation.
inline constexpr std::uint64_t bootstrap_stream_tag = 0x626F6F7473747261ULL;

} // namespace detail

/// One detection record: per-shot photon counts plus the generating config.
struct SampleSet {
    SimulationConfig config;              // echo of the generating run
    std::vector<std::uint32_t> counts;    // per-shot count (channel A when split)
    std::vector<std::uint32_t> counts_b;  // channel B; empty unless split
    std::vector<std::uint64_t> histogram; // histogram of per-shot totals

    bool is_split() const { return !counts_b.empty(); }
    std::uint64_t shots_used() const { return counts.size(); }
    std::uint32_t total(std::size_t shot) const {
        return counts[shot] + (counts_b.empty() ? 0u : counts_b[shot]);
    }
};

/// Assemble a SampleSet, computing the histogram and checking shape.
inline SampleSet make_sample_set(SimulationConfig config, std::vector<std::uint32_t> counts,
                                 std::vector<std::uint32_t> counts_b = {}) {
    if (counts.empty())
        throw std::domain_error("sample set needs at least one shot");
    if (!counts_b.empty() && counts_b.size() != counts.size())
        throw std::domain_error("split channels must have equal length");
    SampleSet s{std::move(config), std::move(counts), std::move(counts_b), {}};
    std::uint32_t max_total = 0;
    for (std::size_t i = 0; i < s.counts.size(); ++i)
        max_total = std::max(max_total, s.total(i));
    s.histogram.assign(static_cast<std::size_t>(max_total) + 1, 0);
    for (std::size_t i = 0; i < s.counts.size(); ++i)
        ++s.histogram[s.total(i)];
    return s;
}

/// Sample the shot-index range [first, last). Each shot draws from its own
/// (seed, index)-keyed stream; concatenating subranges in index order
/// reproduces a full run exactly.
inline SampleSet sample_range(const PhotonNumberDistribution& dist,
                              const SimulationConfig& config, std::uint64_t first,
                              std::uint64_t last) {
    validate(config);
    if (first >= last || last > config.shots)
        throw std::domain_error("shot range must be nonempty and within config.shots");

    // Inverse-CDF table over the stored weights.
    std::vector<double> cumulative(dist.probs().size());
    double run = 0.0;
    for (std::size_t n = 0; n < dist.probs().size(); ++n) {
        run += dist.probs()[n];
        cumulative[n] = run;
    }

    std::vector<std::uint32_t> counts;
    std::vector<std::uint32_t> counts_b;
    counts.reserve(last - first);
    if (config.split)
        counts_b.reserve(last - first);
    for (std::uint64_t shot = first; shot < last; ++shot) {
        ShotRng rng(config.seed, shot);
        const double u = rng.next_unit();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        auto n = static_cast<std::uint32_t>(
            it == cumulative.end() ? dist.cutoff()
                                   : static_cast<std::size_t>(it - cumulative.begin()));
        if (config.efficiency < 1.0)
            n = rng.next_binomial(n, config.efficiency);
        if (config.split) {
            const std::uint32_t a = rng.next_binomial(n, 0.5);
            counts.push_back(a);
            counts_b.push_back(n - a);
        } else {
            counts.push_back(n);
        }
    }
    return make_sample_set(config, std::move(counts), std::move(counts_b));
}

/// Full detection run of config.shots shots.
inline SampleSet sample(const PhotonNumberDistribution& dist, const SimulationConfig& config) {
    return sample_range(dist, config, 0, config.shots);
}

/// Collapse a split record to per-shot totals (plug-in estimator input).
inline SampleSet merged_totals(const SampleSet& samples) {
    if (!samples.is_split())
        return samples;
    std::vector<std::uint32_t> totals(samples.counts.size());
    for (std::size_t i = 0; i < totals.size(); ++i)
        totals[i] = samples.total(i);
    SimulationConfig config = samples.config;
    config.split = false;
    return make_sample_set(config, std::move(totals));
}

/// A point estimate with its bootstrap (or closed-form) standard error.
struct EstimateResult {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t shots_used = 0;
};

namespace detail {

// Standard deviation of bootstrap replicates (B-1 denominator).
inline double replicate_sd(const std::vector<double>& values) {
    if (values.size() < 2)
        return 0.0;
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

struct G2Sums {
    double s1 = 0, s2 = 0;       // sum n, sum n(n-1)      (plug-in form)
    double sa = 0, sb = 0, sab = 0; // channel sums          (coincidence form)
    std::uint64_t zeros = 0;
};

inline void accumulate(const SampleSet& s, std::size_t shot, G2Sums& sums) {
    if (s.is_split()) {
        const double a = s.counts[shot];
        const double b = s.counts_b[shot];
        sums.sa += a;
        sums.sb += b;
        sums.sab += a * b;
        if (a + b == 0.0)
            ++sums.zeros;
    } else {
        const double n = s.counts[shot];
        sums.s1 += n;
        sums.s2 += n * (n - 1.0);
        if (n == 0.0)
            ++sums.zeros;
    }
}

// Plug-in g2 of accumulated sums over m shots; NaN when the mean is zero.
inline double g2_of_sums(const G2Sums& sums, double m, bool split) {
    if (split) {
        if (sums.sa == 0.0 || sums.sb == 0.0)
            return std::numeric_limits<double>::quiet_NaN();
        return m * sums.sab / (sums.sa * sums.sb);
    }
    if (sums.s1 == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return m * sums.s2 / (sums.s1 * sums.s1);
}

// One nonparametric bootstrap pass; per replicate b the index stream is
// ShotRng(seed ^ tag, b), so errors are reproducible for a given record.
// Replicates whose resampled mean vanishes are skipped.
template <typename Visit>
inline void bootstrap_pass(const SampleSet& s, Visit&& visit) {
    const std::uint64_t m = s.shots_used();
    for (std::uint64_t b = 0; b < s.config.bootstrap_resamples; ++b) {
        ShotRng rng(s.config.seed ^ bootstrap_stream_tag, b);
        G2Sums sums;
        for (std::uint64_t k = 0; k < m; ++k)
            accumulate(s, static_cast<std::size_t>(rng.next_below(m)), sums);
        const double g = g2_of_sums(sums, static_cast<double>(m), s.is_split());
        if (std::isnan(g))
            continue;
        visit(g, static_cast<double>(sums.zeros) / static_cast<double>(m));
    }
}

} // namespace detail

/// Plug-in estimate of g2: sum n(n-1) / M divided by (sum n / M)^2, or the
/// coincidence form <ab>/(<a><b>) for split records. The standard error is
/// a nonparametric bootstrap over shots.
inline EstimateResult estimate_g2(const SampleSet& samples) {
    detail::G2Sums sums;
    for (std::size_t i = 0; i < samples.counts.size(); ++i)
        detail::accumulate(samples, i, sums);
    const double m = static_cast<double>(samples.shots_used());
    const double value = detail::g2_of_sums(sums, m, samples.is_split());
    if (std::isnan(value))
        throw estimation_error("record has zero mean count; g2 is undefined");

    std::vector<double> replicates;
    replicates.reserve(samples.config.bootstrap_resamples);
    detail::bootstrap_pass(samples, [&](double g, double) { replicates.push_back(g); });
    return {value, detail::replicate_sd(replicates), samples.shots_used()};
}

/// Click-detector estimate of the vacuum fraction: the share of shots with
/// zero total count, with the binomial standard error.
inline EstimateResult estimate_vacuum(const SampleSet& samples) {
    std::uint64_t zeros = 0;
    for (std::size_t i = 0; i < samples.counts.size(); ++i)
        if (samples.total(i) == 0)
            ++zeros;
    const double m = static_cast<double>(samples.shots_used());
    const double x = static_cast<double>(zeros) / m;
    return {x, std::sqrt(x * (1.0 - x) / m), samples.shots_used()};
}

/// Restrict a record to shots with at least one detected photon.
inline SampleSet post_select(const SampleSet& samples) {
    std::vector<std::uint32_t> counts;
    std::vector<std::uint32_t> counts_b;
    for (std::size_t i = 0; i < samples.counts.size(); ++i) {
        if (samples.total(i) == 0)
            continue;
        counts.push_back(samples.counts[i]);
        if (samples.is_split())
            counts_b.push_back(samples.counts_b[i]);
    }
    if (counts.empty())
        throw estimation_error("post-selection removed every shot (pure vacuum record)");
    return make_sample_set(samples.config, std::move(counts), std::move(counts_b));
}

/// The two routes to the effective correlation function, from one record.
struct EffectiveG2Measurement {
    EstimateResult g2_raw;
    EstimateResult x_hat;
    EstimateResult g2_eff_direct; // g2 of the post-selected record
    EstimateResult g2_eff_scaled; // (1 - x_hat) * g2_raw
};

/// Measure g2 and the vacuum fraction from a record, then estimate the
/// effective g2 both by post-selection and by rescaling. The two values
/// estimate the same quantity; the scaled route's error is bootstrapped
/// jointly so the g2/vacuum correlation is respected.
inline EffectiveG2Measurement measure_effective_g2(const SampleSet& s) {
    EffectiveG2Measurement out;
    out.x_hat = estimate_vacuum(s);

    detail::G2Sums sums;
    for (std::size_t i = 0; i < s.counts.size(); ++i)
        detail::accumulate(s, i, sums);
    const double m = static_cast<double>(s.shots_used());
    const double g2_value = detail::g2_of_sums(sums, m, s.is_split());
    if (std::isnan(g2_value))
        throw estimation_error("record has zero mean count; g2 is undefined");

    std::vector<double> g2_reps;
    std::vector<double> scaled_reps;
    detail::bootstrap_pass(s, [&](double g, double x) {
        g2_reps.push_back(g);
        scaled_reps.push_back((1.0 - x) * g);
    });
    out.g2_raw = {g2_value, detail::replicate_sd(g2_reps), s.shots_used()};
    out.g2_eff_scaled = {(1.0 - out.x_hat.value) * g2_value,
                         detail::replicate_sd(scaled_reps), s.shots_used()};
    out.g2_eff_direct = estimate_g2(post_select(s));
    return out;
}

/// Sample a fresh record and measure it.
inline EffectiveG2Measurement measure_effective_g2(const PhotonNumberDistribution& dist,
                                                   const SimulationConfig& config) {
    return measure_effective_g2(sample(dist, config));
}

} // namespace photonstat
