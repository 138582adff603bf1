#include "pnta/cutoff.hpp"

#include <algorithm>
#include <map>

#include "pnta/errors.hpp"

namespace pnta {

CutoffVector compute_cutoff(const NetworkSpec& spec, const Property& prop) {
    std::vector<char> indexed(spec.templates.size(), 0);
    for (const auto& b : prop.binders) {
        if (b.template_index < 0 ||
            b.template_index >= static_cast<int>(spec.templates.size()))
            throw Error(ErrorKind::Validation,
                        "binder " + b.var + " references unknown template");
        indexed[static_cast<std::size_t>(b.template_index)] = 1;
    }

    CutoffVector cv;
    for (std::size_t l = 0; l < spec.templates.size(); ++l) {
        const Template& t = spec.templates[l];
        int c = 0;
        std::string why;
        switch (prop.quantifier) {
            case PathQuantifier::Ainf:
            case PathQuantifier::Einf:
                c = indexed[l] ? 2 : 1;
                why = indexed[l] ? "infinite-run quantifier, indexed template"
                                 : "infinite-run quantifier, unindexed template";
                break;
            case PathQuantifier::Afin:
            case PathQuantifier::Efin:
                c = 1;
                why = "finite-run quantifier";
                break;
            case PathQuantifier::A:
            case PathQuantifier::E:
                c = 2 * static_cast<int>(t.states.size()) + (indexed[l] ? 1 : 0);
                why = "2*" + std::to_string(t.states.size()) +
                      (indexed[l] ? "+1 (indexed template)" : " (unindexed template)");
                break;
        }
        cv.sizes.push_back(c);
        cv.reasons.push_back(why);
    }
    return cv;
}

SizeVector minimum_sizes(const NetworkSpec& spec, const Property& prop) {
    SizeVector lo(spec.templates.size(), 1);
    if (prop.pairwise_distinct) {
        std::map<int, int> per_template;
        for (const auto& b : prop.binders) ++per_template[b.template_index];
        for (auto [t, count] : per_template)
            lo[static_cast<std::size_t>(t)] =
                std::max(lo[static_cast<std::size_t>(t)], count);
    }
    return lo;
}

std::vector<SizeVector> enumerate_sizes(const SizeVector& lo, const SizeVector& hi) {
    if (lo.size() != hi.size())
        throw Error(ErrorKind::Internal, "size vector arity mismatch");
    std::vector<SizeVector> result;
    SizeVector current = lo;
    while (true) {
        result.push_back(current);
        std::size_t k = current.size();
        while (k > 0 && current[k - 1] >= std::max(lo[k - 1], hi[k - 1])) {
            current[k - 1] = lo[k - 1];
            --k;
        }
        if (k == 0) break;
        ++current[k - 1];
    }
    return result;
}

ParamVerdict parameterized_check(const NetworkSpec& spec, const Property& prop,
                                 bool fail_fast) {
    ParamVerdict pv;
    pv.cutoff = compute_cutoff(spec, prop);
    SizeVector lo = minimum_sizes(spec, prop);
    for (const auto& sizes : enumerate_sizes(lo, pv.cutoff.sizes)) {
        Verdict v = check(spec, sizes, prop);
        pv.checked.push_back(sizes);
        pv.detail.stats.states_explored += v.stats.states_explored;
        if (!v.truth) {
            pv.truth = false;
            pv.failures.push_back(sizes);
            if (pv.failures.size() == 1) {
                auto stats = pv.detail.stats;
                pv.detail = std::move(v);
                pv.detail.stats = stats;
            }
            if (fail_fast) return pv;
        }
    }
    return pv;
}

}  // namespace pnta
