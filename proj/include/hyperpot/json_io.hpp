#pragma once

#include "hyperpot/hypergroup.hpp"
#include "hyperpot/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace hyperpot {

using Json = nlohmann::json;

/// Pretty-printed JSON with every double written as %.17g. Non-finite
/// doubles become the strings "inf", "-inf" and "nan". Keys come out sorted.
std::string dump_json(const Json& value);
void write_json_file(const std::filesystem::path& path, const Json& value);

/// Parses a file; syntax errors are rethrown as config_error with the line
/// and column of the offending byte.
Json read_json_file(const std::filesystem::path& path);
Json parse_json_text(const std::string& text, const std::string& origin);

/// {n_points, rho, haar, identity, involution, dim_exponent}
Json space_to_json(const DiscreteSpace& space);
SpaceData space_from_json(const Json& j);

/// {space_ref, atoms: [[x, y, [[z, mass], ...]], ...], safe_window}
Json table_to_json(const ConvolutionTable& table, const std::string& space_ref);
ConvolutionTable table_from_json(const Json& j, SpacePtr space);

/// Loads a table; the space comes from `space_path` if non-empty, else from
/// the table's space_ref resolved against the table's directory.
ConvolutionTable load_instance(const std::filesystem::path& table_path, const std::filesystem::path& space_path = {});

Json to_json(const AxiomReport& report);
Json to_json(const ConditionCertificate& cert);
Json to_json(const BoundednessReport& report, bool with_records = true);
Json to_json(const DominationResult& result);

}  // namespace hyperpot
