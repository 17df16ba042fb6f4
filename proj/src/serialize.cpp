#include "permbound/serialize.hpp"

#include <cmath>

#include "permbound/matrix_io.hpp"

namespace permbound {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double>& v) {
    return v ? number_or_null(*v) : json(nullptr);
}

json from_map(const std::map<int, double>& m, int key) {
    const auto it = m.find(key);
    return it == m.end() ? json(nullptr) : number_or_null(it->second);
}

}  // namespace

json to_json(const PermanentValue& v) {
    return json{{"value", v.value},
                {"log_value", number_or_null(v.log_value)},
                {"method", to_string(v.method)}};
}

json to_json(const BoundedEstimate& b) {
    return json{{"order", static_cast<int>(b.order)},
                {"estimate", b.estimate},
                {"log_estimate", optional_number(b.log_estimate)},
                {"half_width", optional_number(b.half_width)},
                {"lower", b.has_bound() ? json(b.lower) : json(nullptr)},
                {"upper", b.has_bound() ? json(b.upper) : json(nullptr)},
                {"raw_lower", b.has_bound() ? json(b.raw_lower) : json(nullptr)}};
}

json to_json(const RoosDiagnostics& d) {
    json j{{"rows", d.rows},
           {"cols", d.cols},
           {"z_tilde", d.col_means},
           {"p1", d.p1},
           {"p2", d.p2},
           {"beta", d.beta},
           {"ff_ratio", d.ff_ratio},
           {"ff_ratio_2", optional_number(d.ff_ratio_2)}};
    for (int k = 2; k <= 4; ++k) {
        const std::string s = std::to_string(k);
        j["kappa" + s] = from_map(d.kappa, k);
        j["theta" + s] = from_map(d.theta, k);
        j["alpha" + s] = from_map(d.alpha, k);
        j["f" + s] = from_map(d.f_values, k);
    }
    return j;
}

json to_json(const Assignment& a) {
    return json{{"assignment", a.row_to_col}, {"weight", a.weight}, {"cost", number_or_null(a.cost)}};
}

json to_json(const KBestResult& r) {
    json list = json::array();
    for (const auto& a : r.assignments) list.push_back(to_json(a));
    return json{{"assignments", std::move(list)}, {"cumulative_weights", r.cumulative_weights}};
}

json to_json(const TruncationReport& r) {
    json j{{"order", static_cast<int>(r.order)},
           {"K", r.k_values},
           {"cumulative_weight", r.cumulative_weight},
           {"permanent_exact", optional_number(r.permanent_exact)},
           {"roos", to_json(r.roos)},
           {"mass_fraction_lower", r.mass_fraction_lower},
           {"mass_fraction_upper", r.mass_fraction_upper},
           {"upper_informative", r.upper_informative},
           {"diagnostics", to_json(r.diagnostics)}};
    j["mass_fraction_exact"] = r.mass_fraction_exact ? json(*r.mass_fraction_exact) : json(nullptr);
    return j;
}

std::string to_csv(const TruncationReport& r) {
    std::string out = "K,cumulative_weight,mass_lower,mass_upper,mass_exact\n";
    for (std::size_t i = 0; i < r.k_values.size(); ++i) {
        out += std::to_string(r.k_values[i]) + ',' + format_double(r.cumulative_weight[i]) + ',' +
               format_double(r.mass_fraction_lower[i]) + ',' +
               format_double(r.mass_fraction_upper[i]) + ',';
        if (r.mass_fraction_exact) out += format_double((*r.mass_fraction_exact)[i]);
        out += '\n';
    }
    return out;
}

}  // namespace permbound
