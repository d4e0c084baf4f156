#include "jd/io.hpp"

#include <fstream>

namespace jd::io {

namespace {

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

json index_set_to_json(const IndexSet& s) {
    json arr = json::array();
    for (Index i : s) arr.push_back(i);
    return arr;
}

json columns_to_json(const Matrix& m) {
    json arr = json::array();
    for (Index j = 0; j < m.cols(); ++j) arr.push_back(vector_to_json(m.col(j)));
    return arr;
}

Matrix rows_from_json(const json& arr, Index dim, const char* what) {
    if (!arr.is_array() || arr.empty()) {
        throw ValidationError(std::string(what) + ": expected a nonempty array");
    }
    Matrix m(dim, static_cast<Index>(arr.size()));
    for (std::size_t j = 0; j < arr.size(); ++j) {
        const json& row = arr[j];
        if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
            throw ValidationError(std::string(what) + ": row dimension mismatch");
        }
        for (Index i = 0; i < dim; ++i) {
            m(i, static_cast<Index>(j)) = row[static_cast<std::size_t>(i)].get<double>();
        }
    }
    return m;
}

}  // namespace

json to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json entries = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) entries.push_back(m(r, c));
    }
    j["entries"] = entries;
    return j;
}

Matrix matrix_from_json(const json& j) {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    const json& entries = j.at("entries");
    if (!entries.is_array() || static_cast<Index>(entries.size()) != rows * cols) {
        throw ValidationError("matrix: entries length must be rows*cols");
    }
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) m(r, c) = entries[k++].get<double>();
    }
    require_finite(m, "matrix");
    return m;
}

json to_json(const Decomposition& d) {
    json j;
    j["dim"] = d.dim;
    j["vectors"] = columns_to_json(d.vectors);
    if (d.parent_map) j["parent_map"] = index_set_to_json(*d.parent_map);
    return j;
}

Decomposition decomposition_from_json(const json& j, double tol) {
    const Index dim = j.at("dim").get<Index>();
    Matrix vectors = rows_from_json(j.at("vectors"), dim, "decomposition");
    Decomposition d = validate(vectors, tol > 0.0 ? tol : default_validation_tol(dim));
    if (j.contains("parent_map")) {
        IndexSet pm;
        for (const auto& v : j.at("parent_map")) pm.push_back(v.get<Index>());
        require(pm.size() == static_cast<std::size_t>(d.size()),
                "decomposition: parent_map length mismatch");
        d.parent_map = std::move(pm);
    }
    return d;
}

Matrix points_from_json(const json& j) {
    const Index dim = j.at("dim").get<Index>();
    Matrix pts = rows_from_json(j.at("points"), dim, "points");
    require_finite(pts, "points");
    return pts;
}

json points_to_json(const Matrix& points) {
    json j;
    j["dim"] = points.rows();
    j["points"] = columns_to_json(points);
    return j;
}

json to_json(const JohnResult& r) {
    json j;
    j["dim"] = r.decomposition.dim;
    j["ellipsoid"] = to_json(r.ellipsoid.shape);
    j["contact_indices"] = index_set_to_json(r.contact_indices);
    j["weights"] = vector_to_json(r.weights);
    j["weight_sum"] = r.weights.sum();
    j["contact_points"] = columns_to_json(r.contact_points);
    j["decomposition"] = to_json(r.decomposition);
    j["residual"] = r.residual;
    j["mvee_converged"] = r.mvee_converged;
    j["mvee_gap"] = r.mvee_gap;
    return j;
}

json to_json(const SelectionCertificate& c) {
    json j;
    j["sigma"] = index_set_to_json(c.sigma);
    j["sigma_size"] = c.sigma.size();
    j["size_bound"] = c.size_bound;
    j["target_size"] = c.target_size;
    j["h"] = c.h;
    j["achieved_equivalence_K"] = c.achieved_equivalence_K;
    j["per_vector_norm_ratio"] = c.per_vector_norm_ratio;
    j["fallback_used"] = c.fallback_used;
    if (c.scalar_ratio) j["scalar_ratio"] = *c.scalar_ratio;
    if (c.trace_fallback) j["trace_fallback"] = true;
    json rounds = json::array();
    for (const RoundLog& r : c.rounds) {
        json jr;
        jr["round"] = r.round;
        jr["sigma_size"] = r.sigma_size;
        jr["remainder"] = r.remainder;
        jr["split_size"] = r.split_size;
        jr["kt_size"] = r.kt_size;
        jr["kt_constant"] = r.kt_constant;
        jr["bt_size"] = r.bt_size;
        jr["bt_besselian"] = r.bt_besselian;
        jr["projector_defect"] = r.projector_defect;
        jr["fallback"] = r.fallback;
        rounds.push_back(jr);
    }
    j["rounds"] = rounds;
    return j;
}

json to_json(const DRResult& r) {
    json j;
    j["contact_indices"] = index_set_to_json(r.contact_indices);
    j["z_vectors"] = columns_to_json(r.z_vectors);
    j["z_norms_X"] = vector_to_json(r.z_norms_x);
    j["image_norms_2"] = vector_to_json(r.image_norms_2);
    j["equivalence_K"] = r.equivalence_K;
    j["x_norm_floor"] = r.x_norm_floor;
    j["fitted_c"] = r.fitted_c;
    j["duality_margin"] = r.duality_margin;
    j["certificate"] = to_json(r.certificate);
    return j;
}

json to_json(const WalshReport& r) {
    json j;
    j["n"] = r.n;
    j["z_norms_X"] = vector_to_json(r.z_norms_x);
    j["expected"] = r.expected;
    j["max_deviation"] = r.max_deviation;
    j["orthogonality_residual"] = r.orthogonality_residual;
    return j;
}

json to_json(const SharpnessReport& r) {
    json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["projection"] = to_json(r.projection);
    j["col_norms_2"] = vector_to_json(r.col_norms_2);
    j["max_inf_norm"] = r.max_inf_norm;
    j["bound"] = r.bound;
    j["projector_residual"] = r.projector_residual;
    return j;
}

json to_json(const MonteCarloEstimate& e) {
    json j;
    j["mean"] = e.mean;
    j["stderr"] = e.stderr_;
    j["exact"] = e.exact;
    j["trials"] = e.trials;
    return j;
}

json to_json(const CubeEmbeddingResult& r) {
    json j;
    j["sigma"] = index_set_to_json(r.sigma);
    j["m_dim"] = r.m_dim;
    j["iso_constant"] = r.iso_constant;
    j["M_estimate"] = to_json(r.m_estimate);
    j["omega"] = r.omega;
    j["ell_P"] = to_json(r.ell_p);
    j["domination_margin"] = r.domination_margin;
    j["benchmark"] = r.benchmark;
    j["lower_violation"] = r.lower_violations;
    j["upper_margin"] = r.upper_margin;
    j["z_vectors"] = columns_to_json(r.z_vectors);
    return j;
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace jd::io
