#ifndef PNTA_LEMMALAB_HPP
#define PNTA_LEMMALAB_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pnta/model.hpp"
#include "pnta/property.hpp"

namespace pnta {

// Knobs for the random template generator. Generated specs always pass
// validate_network and use closed integer constraints only, so they feed the
// discrete oracle directly.
struct GenParams {
    std::uint64_t seed = 1;
    int max_states = 3;           // <= 4
    int max_clocks = 1;           // <= 2
    std::int64_t max_const = 2;   // <= 3
    double transition_density = 0.7;
    double guard_restriction_prob = 0.4;
    int num_templates = 0;        // 0 = pick 1 or 2 at random
};

// Deterministic in the seed; 1-2 templates named U1, U2.
NetworkSpec random_spec(const GenParams& p);

// One falsified implication, with everything needed to replay it.
struct LemmaViolation {
    std::uint64_t seed = 0;
    std::string spec_text;
    std::string property;
    SizeVector premise_sizes, conclusion_sizes;
    bool premise_truth = false, conclusion_truth = false;
};

struct LemmaReport {
    std::string suite;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<LemmaViolation> violations;

    // Plain-text report ending with the machine-readable line
    // `violations=<n> trials=<n> seed=<s>`.
    std::string text() const;
};

// suite: "mono"  — satisfaction at size n implies satisfaction at n+1;
//        "bound" — satisfaction at n > cutoff implies satisfaction at cutoff;
//        "trunc" — 2-template verdicts agree with the sizes clamped to the
//                  cutoff vector.
// Each trial generates a fresh spec and E-quantified property from
// p.seed + trial and evaluates both sides on the discrete oracle.
LemmaReport run_suite(const std::string& suite, const GenParams& p, int trials);

}  // namespace pnta

#endif  // PNTA_LEMMALAB_HPP
