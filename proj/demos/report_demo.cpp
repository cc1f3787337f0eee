// Minimal library walkthrough: build a state, summarize it, and print the
// bounds that follow from its (g2, x) pair.

#include <cstdio>

#include "photonstat/bounds.hpp"
#include "photonstat/correlations.hpp"

int main() {
    using namespace photonstat;

    // A source that emits one photon 90% of the time and leaks a two-photon
    // event 5% of the time, diluted by 80% vacuum.
    auto source = add_vacuum(make_two_component(0.9, 0.05), 0.8);
    auto s = summarize(source);
    std::printf("mean photon number  %.6f\n", s.mean_n);
    std::printf("g2                  %.6f\n", s.g2);
    std::printf("vacuum fraction     %.6f\n", s.vacuum_x);
    std::printf("effective g2        %.6f\n", s.g2_eff);
    std::printf("exact p/q           %.6f\n\n", s.smpp_exact);

    auto r = full_report(s.g2, s.vacuum_x);
    std::printf("p/q lower bound     %.6f\n", r.ratio_lower);
    std::printf("p interval          [%.6f, %.6f]\n", r.p_min, r.p_max);
    std::printf("purity lower bound  %.6f\n", r.purity_lower);
    std::printf("multi-photon bound  %.6f\n", r.q_upper);
    return 0;
}
