#pragma once

#include "jd/cube.hpp"
#include "jd/decomposition.hpp"
#include "jd/dvoretzky_rogers.hpp"
#include "jd/extraction.hpp"
#include "jd/john.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace jd::io {

using json = nlohmann::json;

json to_json(const Matrix& m);          // {"rows","cols","entries" row-major}
Matrix matrix_from_json(const json& j);

json to_json(const Decomposition& d);   // {"dim","vectors"[,"parent_map"]}
Decomposition decomposition_from_json(const json& j, double tol);

// {"dim","points"}: one representative per +- pair, rows are points
Matrix points_from_json(const json& j);
json points_to_json(const Matrix& points);

json to_json(const JohnResult& r);
json to_json(const SelectionCertificate& c);
json to_json(const DRResult& r);
json to_json(const WalshReport& r);
json to_json(const SharpnessReport& r);
json to_json(const CubeEmbeddingResult& r);
json to_json(const MonteCarloEstimate& e);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

}  // namespace jd::io
