#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "photonstat/correlations.hpp"
#include "photonstat/io.hpp"

using namespace photonstat;

TEST_CASE("distribution CSV round-trips bitwise") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        auto d = test_helpers::random_distribution(rng, 12);
        std::stringstream buf;
        write_distribution_csv(buf, d);
        auto back = read_distribution_csv(buf);
        REQUIRE(back.probs() == d.probs());
    }
    // truncated states keep their missing mass as the tail bound
    auto coherent = make_coherent(0.7);
    std::stringstream buf;
    write_distribution_csv(buf, coherent);
    auto back = read_distribution_csv(buf);
    REQUIRE(back.probs() == coherent.probs());
    REQUIRE(g2(back) == g2(coherent));
    REQUIRE(back.tail_mass_bound() <= 1e-12);
}

TEST_CASE("distribution CSV accepts gaps as zero weights") {
    std::stringstream in("n,prob\n0,0.5\n3,0.5\n");
    auto d = read_distribution_csv(in);
    REQUIRE(d.cutoff() == 3);
    REQUIRE(d.prob(1) == 0.0);
    REQUIRE(d.prob(2) == 0.0);
    REQUIRE(d.prob(3) == 0.5);
}

TEST_CASE("distribution CSV rejects malformed input") {
    auto expect_error = [](const std::string& text, std::size_t line) {
        std::stringstream in(text);
        try {
            read_distribution_csv(in);
            FAIL("expected io_error for: " << text);
        } catch (const io_error& e) {
            if (line)
                REQUIRE(e.line_number == line);
        }
    };
    expect_error("", 0);                                  // empty
    expect_error("a,b\n0,1\n", 1);                        // bad header
    expect_error("n,prob\n0,0.5\nx,0.5\n", 3);            // non-numeric n
    expect_error("n,prob\n0,0.5\n0,0.5\n", 3);            // repeated n
    expect_error("n,prob\n2,0.5\n1,0.5\n", 3);            // decreasing n
    expect_error("n,prob\n0,0.7\n1,0.7\n", 0);            // sum > 1
    expect_error("n,prob\n0,1.5\n", 0);                   // prob > 1
    expect_error("n,prob\n0,0.5\n", 0);                   // missing mass
    expect_error("n,prob\n0,0.5,9\n", 2);                 // extra field
}

TEST_CASE("sample CSV round-trips with its config header") {
    auto dist = make_two_component(0.6, 0.2);
    SECTION("plain record") {
        SimulationConfig config{500, 77, 0.9, false, 64};
        auto s = sample(dist, config);
        std::stringstream buf;
        write_samples_csv(buf, s);
        auto back = read_samples_csv(buf);
        REQUIRE(back.counts == s.counts);
        REQUIRE(back.histogram == s.histogram);
        REQUIRE(back.config.shots == config.shots);
        REQUIRE(back.config.seed == config.seed);
        REQUIRE(back.config.efficiency == config.efficiency);
        REQUIRE(back.config.split == config.split);
        REQUIRE(back.config.bootstrap_resamples == config.bootstrap_resamples);
    }
    SECTION("split record") {
        SimulationConfig config{500, 78, 1.0, true, 64};
        auto s = sample(dist, config);
        std::stringstream buf;
        write_samples_csv(buf, s);
        auto back = read_samples_csv(buf);
        REQUIRE(back.counts == s.counts);
        REQUIRE(back.counts_b == s.counts_b);
    }
}

TEST_CASE("sample CSV rejects malformed input") {
    auto expect_error = [](const std::string& text) {
        std::stringstream in(text);
        REQUIRE_THROWS_AS(read_samples_csv(in), io_error);
    };
    expect_error("shot,count\n0,1\n");                         // missing config line
    expect_error("# not json\nshot,count\n0,1\n");             // bad config
    expect_error("# {\"shots\":1}\nshot,count\n0,1\n");        // incomplete config
    const std::string header =
        "# {\"shots\":2,\"seed\":1,\"efficiency\":1.0,\"split\":false,"
        "\"bootstrap_resamples\":10}\n";
    expect_error(header + "count\n0\n");                       // wrong columns
    expect_error(header + "shot,count\n1,1\n");                // indices not from 0
    expect_error(header + "shot,count\n0,1\n2,1\n");           // gap in indices
    expect_error(header + "shot,count\n0,1\n1,-3\n");          // negative count
    expect_error(header + "shot,count\n");                     // no shots
}
