#pragma once

#include <string>

#include <json.hpp>

#include "htype/algebra.hpp"
#include "htype/estimates.hpp"
#include "htype/heatkernel.hpp"

namespace htype {

inline constexpr int kSchemaVersion = 1;

/// {"schema": 1, "n": n, "m": m, "J": [[[row], ...], ...]}
nlohmann::json structure_to_json(const Structure& s);
/// Accepts each J_j either as nested rows or as a flat row-major array.
Structure structure_from_json(const nlohmann::json& doc);

Structure load_structure(const std::string& path);
void save_structure(const Structure& s, const std::string& path);

/// Resolves a preset name: heisenberg[-N], complex-heisenberg, clifford-M[xC].
Structure structure_preset(const std::string& name);

/// A structure with the given dimensions: Heisenberg-Weyl for m = 1, else
/// copies of the minimal Clifford module. Throws std::invalid_argument when
/// 2n is not a multiple of the module dimension.
Structure structure_for_dims(int n, int m);

/// Parses "a,b,c" into a vector (empty string gives an empty vector).
Vec parse_vector(const std::string& text);
/// Parses "x1,...,x2n;z1,...,zm".
GroupPoint parse_group_point(const std::string& text, const Structure& s);

nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const EvalResult& r);
nlohmann::json to_json(const ScanReport& r);
nlohmann::json to_json(const DriftReport& r);
nlohmann::json to_json(const GroupPoint& g);

/// Shortest round-trip decimal form, as used for CSV cells.
std::string format_number(double v);

}  // namespace htype
