#pragma once

#include <filesystem>

#include <json.hpp>

#include "ngca/common.hpp"
#include "ngca/lsldg.hpp"

namespace ngca::io {

using Json = nlohmann::json;

// {"frame", "basis" (row-major), "d_x", "d_s", "warning_degenerate_gap"}
Json to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j);

// {"centers" (b rows of d), "sigma", "lambda", "theta" (d rows of b), "dims"}
Json to_json(const lsldg::GradientModel& m);
lsldg::GradientModel model_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace ngca::io
