#include <doctest.h>

#include <cmath>
#include <map>

#include "dyncomm/model.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace dyncomm;
namespace dt = dyncomm::testing;

namespace {

unsigned mask_of(const std::vector<NodeId>& responders) {
    unsigned mask = 0;
    for (NodeId n : responders) mask |= 1u << n;
    return mask;
}

// Responder-set frequencies at steps 1 and 2 over `runs` seeded runs of the
// three-node complete network.
std::pair<std::map<unsigned, int>, std::map<unsigned, int>> empirical(int runs, std::uint64_t first_seed) {
    std::map<unsigned, int> step1;
    std::map<unsigned, int> step2;
    for (int r = 0; r < runs; ++r) {
        auto c = dt::small_config(3, 1.0, 2, 2, 2, first_seed + static_cast<std::uint64_t>(r));
        c.polarization_onset = std::nullopt;
        Simulator sim(c);
        ++step1[mask_of(sim.step().outcome.responders)];
        ++step2[mask_of(sim.step().outcome.responders)];
    }
    return {step1, step2};
}

void check_within_3se(const std::map<unsigned, double>& exact, const std::map<unsigned, int>& counts, int runs) {
    double total = 0.0;
    for (const auto& [mask, p] : exact) {
        total += p;
        const auto it = counts.find(mask);
        const double freq = (it == counts.end() ? 0 : it->second) / double(runs);
        const double se = std::sqrt(p * (1 - p) / runs);
        INFO("mask " << mask << " exact " << p << " empirical " << freq);
        CHECK(std::abs(freq - p) <= 3 * se);
    }
    CHECK(total == doctest::Approx(1.0));
}

}  // namespace

TEST_CASE("oracle step-1 probabilities for the three-node complete network") {
    const auto a = dt::complete_adjacency(3);
    const std::vector<double> l{1, 2, 3};
    CHECK(dt::reference_probability(a, l, 0, false) == doctest::Approx(5.0 / 7.0));
    CHECK(dt::reference_probability(a, l, 1, false) == doctest::Approx(4.0 / 7.0));
    CHECK(dt::reference_probability(a, l, 2, false) == doctest::Approx(3.0 / 7.0));
    // nobody fires: (2/7)(3/7)(4/7)
    CHECK(dt::subset_distribution({5.0 / 7, 4.0 / 7, 3.0 / 7}).at(0) == doctest::Approx(24.0 / 343.0));
}

TEST_CASE("step-1 and step-2 responder sets match brute-force enumeration") {
    const int runs = 100000;
    const auto [step1, step2] = empirical(runs, 1);
    const auto a = dt::complete_adjacency(3);
    const std::vector<double> l{1, 2, 3};
    std::vector<double> p(3);
    for (std::size_t n = 0; n < 3; ++n) p[n] = dt::reference_probability(a, l, n, false);
    check_within_3se(dt::subset_distribution(p), step1, runs);
    check_within_3se(dt::step2_distribution_complete3(l), step2, runs);
}
