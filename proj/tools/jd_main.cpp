#include "jd/cube.hpp"
#include "jd/decomposition.hpp"
#include "jd/dvoretzky_rogers.hpp"
#include "jd/extraction.hpp"
#include "jd/io.hpp"
#include "jd/john.hpp"
#include "jd/rng.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using jd::io::json;

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

int worker_cap() {
    const char* env = std::getenv("JOHN_EXTRACT_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

// every artifact carries the full configuration and a timestamp
void emit(const std::string& path, json j, const json& config) {
    j["config"] = config;
    j["config"]["workers"] = worker_cap();
    j["timestamp"] = utc_timestamp();
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
    } else {
        jd::io::save_file(path, j);
    }
}

jd::Matrix random_projection(jd::Index n, jd::Index rank, std::uint64_t seed) {
    jd::Pcg32 rng(seed, 0x9a0b);
    jd::Matrix g = jd::gaussian_matrix(rng, n, rank);
    Eigen::HouseholderQR<jd::Matrix> qr(g);
    jd::Matrix q = qr.householderQ() * jd::Matrix::Identity(n, rank);
    return q * q.transpose();
}

jd::Matrix load_operator(const std::string& path, jd::Index dim) {
    if (path.empty()) return jd::Matrix::Identity(dim, dim);
    jd::Matrix t = jd::io::matrix_from_json(jd::io::load_file(path));
    jd::require(t.rows() == dim && t.cols() == dim, "operator dimension mismatch");
    const double op = jd::svd(t).op_norm;
    if (op > 1.0) t /= op;  // the extractors require a contraction
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"John decomposition toolkit: tight-frame subset extraction with certificates"};
    app.require_subcommand(1);

    std::string input, output, t_path, proj_path;
    std::uint64_t seed = 1;
    jd::Index n = 4, m = 9, kappa = 0, proj_rank = 0;
    int walsh_m = 3;
    double epsilon = 0.5, tol = 1e-7;
    long max_iter = 200000, trials = 2000;
    jd::Index max_rounds = 32, sweep_seeds = 5;
    bool use_trace = false;

    auto* gen = app.add_subcommand("gen", "generate a seeded random tight frame");
    gen->add_option("--n", n, "dimension")->required();
    gen->add_option("--m", m, "number of vectors")->required();
    gen->add_option("--seed", seed, "rng seed")->required();
    gen->add_option("--out", output, "output decomposition JSON");

    auto* john = app.add_subcommand("john", "MVEE and John decomposition of a point set");
    john->add_option("--input", input, "points JSON")->required();
    john->add_option("--tol", tol, "identity residual tolerance");
    john->add_option("--max-iter", max_iter, "solver iteration cap");
    john->add_option("--out", output, "output JSON");

    auto* extract = app.add_subcommand("extract", "extract a near-orthogonal subsystem");
    extract->add_option("--input", input, "decomposition JSON")->required();
    extract->add_option("--t", t_path, "operator JSON (default identity)");
    extract->add_option("--epsilon", epsilon, "target fraction 1-epsilon of h");
    extract->add_option("--kappa", kappa, "exact cardinality (count variant)");
    extract->add_flag("--scalar", use_trace, "trace-filter variant");
    extract->add_option("--seed", seed, "rng seed")->required();
    extract->add_option("--max-rounds", max_rounds, "iteration cap");
    extract->add_option("--out", output, "certificate JSON");

    auto* rinv = app.add_subcommand("rinv", "restricted invertibility on the coordinate basis");
    rinv->add_option("--input", input, "operator JSON")->required();
    rinv->add_option("--epsilon", epsilon, "target fraction");
    rinv->add_option("--seed", seed, "rng seed")->required();
    rinv->add_option("--out", output, "certificate JSON");

    auto* dr = app.add_subcommand("dr", "Dvoretzky-Rogers contact selection");
    dr->add_option("--input", input, "points JSON")->required();
    dr->add_option("--proj", proj_path, "projection JSON");
    dr->add_option("--proj-rank", proj_rank, "random projection rank (seeded)");
    dr->add_option("--kappa", kappa, "number of contacts")->required();
    dr->add_option("--seed", seed, "rng seed")->required();
    dr->add_option("--out", output, "report JSON");

    auto* walsh = app.add_subcommand("walsh", "Walsh counterexample report");
    walsh->add_option("--m", walsh_m, "n = 2^m")->required();
    walsh->add_option("--out", output, "report JSON");

    auto* sharp = app.add_subcommand("sharpness", "flat-column projection report");
    sharp->add_option("--n", n, "dimension (power of two)")->required();
    sharp->add_option("--k", kappa, "rank")->required();
    sharp->add_option("--out", output, "report JSON");

    auto* cube = app.add_subcommand("cube", "l_inf cube embedding pipeline");
    cube->add_option("--input", input, "points JSON")->required();
    cube->add_option("--proj", proj_path, "projection JSON");
    cube->add_option("--proj-rank", proj_rank, "random projection rank (seeded)");
    cube->add_option("--trials", trials, "Monte Carlo trials");
    cube->add_option("--seed", seed, "rng seed")->required();
    cube->add_option("--out", output, "report JSON");

    auto* sweep = app.add_subcommand("sweep", "epsilon x seed grid, CSV output");
    sweep->add_option("--n", n, "dimension");
    sweep->add_option("--m", m, "frame size");
    sweep->add_option("--seeds", sweep_seeds, "seeds per epsilon");
    sweep->add_option("--out", output, "CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    json config;
    config["seed"] = seed;

    try {
        if (gen->parsed()) {
            config["command"] = "gen";
            config["n"] = n;
            config["m"] = m;
            jd::Decomposition d = jd::random_tight_frame(n, m, seed);
            emit(output, jd::io::to_json(d), config);
        } else if (john->parsed()) {
            config["command"] = "john";
            config["input"] = input;
            config["tol"] = tol;
            jd::Matrix points = jd::io::points_from_json(jd::io::load_file(input));
            jd::JohnResult result = jd::john_decomposition(points, tol, max_iter);
            emit(output, jd::io::to_json(result), config);
            if (!result.mvee_converged) return 2;
        } else if (extract->parsed()) {
            config["command"] = "extract";
            config["input"] = input;
            config["epsilon"] = epsilon;
            config["kappa"] = kappa;
            config["scalar"] = use_trace;
            config["max_rounds"] = max_rounds;
            jd::Decomposition d =
                jd::io::decomposition_from_json(jd::io::load_file(input), 0.0);
            jd::Matrix t = load_operator(t_path, d.dim);
            jd::ExtractionParams params;
            params.epsilon = epsilon;
            params.rng_seed = seed;
            params.max_rounds = max_rounds;
            jd::SelectionCertificate cert;
            if (kappa > 0) {
                cert = jd::extract_count(d, t, kappa, params);
            } else if (use_trace) {
                cert = jd::extract_trace(d, t, params);
            } else {
                cert = jd::extract_main(d, t, params);
            }
            emit(output, jd::io::to_json(cert), config);
        } else if (rinv->parsed()) {
            config["command"] = "rinv";
            config["input"] = input;
            config["epsilon"] = epsilon;
            jd::Matrix t = jd::io::matrix_from_json(jd::io::load_file(input));
            const double op = jd::svd(t).op_norm;
            jd::require(op > 0.0, "rinv: zero operator");
            t /= op;
            jd::ExtractionParams params;
            params.epsilon = epsilon;
            params.rng_seed = seed;
            emit(output, jd::io::to_json(jd::restricted_invertibility(t, epsilon, params)),
                 config);
        } else if (dr->parsed()) {
            config["command"] = "dr";
            config["input"] = input;
            config["kappa"] = kappa;
            jd::Matrix points = jd::io::points_from_json(jd::io::load_file(input));
            jd::JohnResult johnres = jd::john_decomposition(points, tol, max_iter);
            jd::Matrix p = proj_path.empty()
                               ? random_projection(points.rows(),
                                                   proj_rank > 0 ? proj_rank : points.rows() / 2 + 1,
                                                   seed)
                               : jd::io::matrix_from_json(jd::io::load_file(proj_path));
            jd::ExtractionParams params;
            params.rng_seed = seed;
            jd::DRResult result = jd::dr_select(johnres, p, kappa, params);
            emit(output, jd::io::to_json(result), config);
        } else if (walsh->parsed()) {
            config["command"] = "walsh";
            config["m"] = walsh_m;
            emit(output, jd::io::to_json(jd::walsh_counterexample(walsh_m)), config);
        } else if (sharp->parsed()) {
            config["command"] = "sharpness";
            config["n"] = n;
            config["k"] = kappa;
            emit(output, jd::io::to_json(jd::sharpness_projection(n, kappa)), config);
        } else if (cube->parsed()) {
            config["command"] = "cube";
            config["input"] = input;
            config["trials"] = trials;
            jd::Matrix points = jd::io::points_from_json(jd::io::load_file(input));
            jd::JohnResult johnres = jd::john_decomposition(points, tol, max_iter);
            const jd::Index dim = points.rows();
            jd::Matrix p = proj_path.empty()
                               ? (proj_rank > 0 ? random_projection(dim, proj_rank, seed)
                                                : jd::Matrix::Identity(dim, dim))
                               : jd::io::matrix_from_json(jd::io::load_file(proj_path));
            jd::ExtractionParams params;
            params.rng_seed = seed;
            jd::CubeEmbeddingResult result = jd::gt_embedding(johnres, p, params, trials, seed);
            json j = jd::io::to_json(result);
            jd::ComplementationReport comp =
                jd::complementation_check(result, jd::polytope_space(johnres), trials, seed);
            j["pz_norm_estimate"] = comp.pz_norm_estimate;
            emit(output, j, config);
        } else if (sweep->parsed()) {
            config["command"] = "sweep";
            std::ofstream csv(output);
            jd::require(static_cast<bool>(csv), "sweep: cannot open output " + output);
            csv << "epsilon,seed,n,m,h,sigma_size,sigma_over_h,equivalence_K,fallback\n";
            for (int e10 = 1; e10 <= 9; ++e10) {
                const double eps = e10 / 10.0;
                for (jd::Index s = 1; s <= sweep_seeds; ++s) {
                    jd::Decomposition d =
                        jd::random_tight_frame(n, m, static_cast<std::uint64_t>(s));
                    jd::ExtractionParams params;
                    params.epsilon = eps;
                    params.rng_seed = static_cast<std::uint64_t>(s);
                    jd::SelectionCertificate cert = jd::extract_main(
                        d, jd::Matrix::Identity(n, n), params);
                    csv << eps << "," << s << "," << n << "," << m << "," << cert.h << ","
                        << cert.sigma.size() << ","
                        << static_cast<double>(cert.sigma.size()) / cert.h << ","
                        << cert.achieved_equivalence_K << "," << (cert.fallback_used ? 1 : 0)
                        << "\n";
                }
            }
        }
    } catch (const jd::ValidationError& e) {
        std::cerr << "error: " << e.what();
        if (std::isfinite(e.residual())) std::cerr << " (residual " << e.residual() << ")";
        std::cerr << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
