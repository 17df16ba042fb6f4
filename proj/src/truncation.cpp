#include "permbound/truncation.hpp"

#include <algorithm>
#include <cmath>

namespace permbound {

MassBracket mass_bracket(double cumulative, const BoundedEstimate& roos) {
    MassBracket b;
    if (roos.has_bound() && roos.upper > 0.0 && std::isfinite(roos.upper)) {
        b.lower = std::clamp(cumulative / roos.upper, 0.0, 1.0);
    }
    if (roos.has_bound() && roos.lower > 0.0) {
        b.upper = std::min(1.0, cumulative / roos.lower);
        b.upper_informative = true;
    }
    return b;
}

TruncationReport truncation_report(const WideMatrix& l, std::size_t k_max,
                                   const TruncationOptions& opts) {
    TruncationReport rep;
    rep.order = opts.order;
    rep.kbest = murty_kbest(l, k_max, opts.kbest);
    rep.cumulative_weight = rep.kbest.cumulative_weights;
    for (std::size_t k = 1; k <= rep.cumulative_weight.size(); ++k) rep.k_values.push_back(k);

    const ThinMatrix thin = to_thin(l);
    rep.diagnostics = diagnostics(thin, opts.roos, opts.order);
    rep.roos = opts.order == ApproxOrder::first ? approx_first(rep.diagnostics)
                                                : approx_second(rep.diagnostics);

    if (opts.with_exact) {
        try {
            rep.permanent_exact = permanent_exact(thin, opts.permanent).value;
        } catch (const InfeasibleError&) {
            rep.permanent_exact.reset();
        }
    }

    std::vector<double> exact_fraction;
    for (double cw : rep.cumulative_weight) {
        const MassBracket b = mass_bracket(cw, rep.roos);
        rep.mass_fraction_lower.push_back(b.lower);
        rep.mass_fraction_upper.push_back(b.upper);
        rep.upper_informative.push_back(b.upper_informative);
        if (rep.permanent_exact) {
            exact_fraction.push_back(*rep.permanent_exact > 0.0 ? cw / *rep.permanent_exact : 1.0);
        }
    }
    if (rep.permanent_exact) rep.mass_fraction_exact = std::move(exact_fraction);
    return rep;
}

}  // namespace permbound
