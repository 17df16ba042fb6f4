#pragma once

#include <string>

#include "json.hpp"
#include "permbound/assignment.hpp"
#include "permbound/exact_permanent.hpp"
#include "permbound/roos.hpp"
#include "permbound/truncation.hpp"

namespace permbound {

// JSON views of results. Unavailable quantities serialize as null.

[[nodiscard]] nlohmann::json to_json(const PermanentValue& v);
[[nodiscard]] nlohmann::json to_json(const BoundedEstimate& b);
/// Keys: z_tilde, p1, p2, beta, kappa2..4, theta2..4, alpha2..4, f2..4,
/// ff_ratio, ff_ratio_2.
[[nodiscard]] nlohmann::json to_json(const RoosDiagnostics& d);
/// {"assignment": [col per row], "weight": w, "cost": c}
[[nodiscard]] nlohmann::json to_json(const Assignment& a);
[[nodiscard]] nlohmann::json to_json(const KBestResult& r);
[[nodiscard]] nlohmann::json to_json(const TruncationReport& r);

/// Plot-ready table: K,cumulative_weight,mass_lower,mass_upper,mass_exact.
[[nodiscard]] std::string to_csv(const TruncationReport& r);

}  // namespace permbound
