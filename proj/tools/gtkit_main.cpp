// gtkit: pooling-design generation, decoding, Monte Carlo simulation, and
// closed-form bound evaluation for noisy non-adaptive group testing.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gtkit/bounds.hpp"
#include "gtkit/combinatorial.hpp"
#include "gtkit/harness.hpp"
#include "gtkit/lp_decoders.hpp"

using namespace gtkit;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

int cmd_generate(std::size_t T, std::size_t n, const std::string& design, double p,
                 std::size_t g, std::uint64_t seed, const std::string& out_path) {
    TestMatrix M;
    if (design == "bernoulli")
        M = gen_bernoulli_matrix(T, n, p, seed);
    else if (design == "coco")
        M = gen_coco_matrix(T, n, g, seed);
    else
        throw CLI::ValidationError("--design must be bernoulli or coco");
    std::ofstream file;
    write_matrix(open_out(file, out_path), M);
    return 0;
}

int cmd_decode(const std::string& matrix_path, const std::string& y_path,
               const std::string& algo, double q, std::optional<double> tau,
               std::optional<std::size_t> d, std::optional<std::size_t> D,
               const std::string& out_path, const std::string& diag_path,
               const std::string& eta_path) {
    std::ifstream min(matrix_path);
    if (!min) throw std::runtime_error("cannot open " + matrix_path);
    const TestMatrix M = read_matrix(min);
    std::string line = read_file(y_path);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    const ResultVector y = parse_bits(line);

    std::ofstream file;
    std::ostream& os = open_out(file, out_path);

    const auto emit_diag = [&](const DecodeOutput& out) {
        if (diag_path.empty()) return;
        std::ofstream diag(diag_path);
        diag << "item,Tj,Sj,decision\n";
        for (std::size_t j = 0; j < M.cols(); ++j)
            diag << j << ',' << out.t_count[j] << ',' << out.s_count[j] << ','
                 << (out.estimate.get(j) ? 1 : 0) << '\n';
    };
    const auto emit_eta = [&](const LpDecodeOutput& out) {
        if (eta_path.empty()) return;
        std::ofstream eta(eta_path);
        eta << "test,eta\n";
        char buf[40];
        for (std::size_t i = 0; i < out.eta.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g", out.eta[i]);
            eta << i << ',' << buf << '\n';
        }
    };

    if (algo == "coco" || algo == "coma" || algo == "nocoma") {
        DecodeOutput out;
        if (algo == "coco")
            out = decode_coco(M, y);
        else if (algo == "coma")
            out = decode_coma(M, y);
        else {
            double t = tau ? *tau : 0.0;
            if (!tau) {
                if (!D) throw CLI::ValidationError("nocoma needs --tau or --D to derive tau*");
                const auto [Gamma, gamma] = bounds::gamma_params(M.cols(), *D, 1.0);
                (void)Gamma;
                t = bounds::tau_star(q, gamma);
            }
            out = decode_nocoma(M, y, q, t);
        }
        write_bits(os, out.estimate);
        emit_diag(out);
        return 0;
    }

    LpDecodeOutput out;
    if (algo == "lipo") {
        if (!d) throw CLI::ValidationError("lipo needs --d");
        out = decode_lipo(M, y, *d);
    } else if (algo == "nolipo") {
        if (!d) throw CLI::ValidationError("nolipo needs --d");
        out = decode_nolipo(M, y, *d);
    } else if (algo == "nolipo+") {
        if (!d) throw CLI::ValidationError("nolipo+ needs --d");
        out = decode_nolipo_plus(M, y, *d);
    } else if (algo == "nolipo-") {
        if (!d) throw CLI::ValidationError("nolipo- needs --d");
        out = decode_nolipo_minus(M, y, *d);
    } else if (algo == "nounlipo") {
        if (!D) throw CLI::ValidationError("nounlipo needs --D");
        double t = tau ? *tau : 0.0;
        if (!tau) {
            const auto [Gamma, gamma] = bounds::gamma_params(M.cols(), *D, 1.0);
            (void)Gamma;
            t = q > 0.0 ? bounds::tau_star(q, gamma) : 0.0;
        }
        out = decode_nounlipo(M, y, *D, q, t);
    } else {
        throw CLI::ValidationError("unknown --algo " + algo);
    }
    write_bits(os, out.estimate);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", out.objective_value);
    os << "objective " << buf << '\n';
    os << "integral " << (out.integral ? 1 : 0) << '\n';
    if (out.failed) os << "decode-failure\n";
    emit_eta(out);
    return 0;
}

int cmd_bounds(const std::string& algo, std::size_t n, std::size_t D, double delta,
               const std::string& noise_kind, double q, double q0, double q1, double u,
               bool as_stated, std::optional<std::size_t> act_d, bool as_json) {
    bounds::BoundQuery query;
    query.n = n;
    query.D = D;
    query.delta = delta;
    query.algo = bounds::algo_from_string(algo);
    query.as_stated = as_stated;
    query.act_d = act_d;
    if (noise_kind == "noiseless")
        query.noise = NoiseModel::noiseless();
    else if (noise_kind == "bsc")
        query.noise = NoiseModel::bsc(q);
    else if (noise_kind == "asym")
        query.noise = NoiseModel::asymmetric(q0, q1);
    else if (noise_kind == "activation")
        query.noise = NoiseModel::activation(u, q0);
    else
        throw CLI::ValidationError("unknown --noise " + noise_kind);

    const bounds::BoundResult r = bounds::upper_bound(query);
    if (as_json) {
        nlohmann::json j;
        j["algo"] = algo;
        j["T"] = r.T;
        j["beta"] = r.beta;
        j["Gamma"] = r.internals.Gamma;
        j["gamma"] = r.internals.gamma;
        if (std::isfinite(r.internals.tau_star)) j["tau_star"] = r.internals.tau_star;
        if (std::isfinite(r.internals.w)) j["w"] = r.internals.w;
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("%-10s %14s %14s %10s %10s %10s %10s\n", "algo", "T", "beta", "Gamma",
                    "gamma", "tau*", "w");
        std::printf("%-10s %14.6f %14.6f %10.6f %10.6f %10.6f %10.6f\n", algo.c_str(), r.T,
                    r.beta, r.internals.Gamma, r.internals.gamma, r.internals.tau_star,
                    r.internals.w);
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& overrides_json,
                 const std::string& out_path, const std::string& summary_path,
                 unsigned threads) {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path.empty()) j = nlohmann::json::parse(read_file(config_path));
    if (!overrides_json.empty()) {
        const auto o = nlohmann::json::parse(overrides_json);
        for (const auto& [k, v] : o.items()) j[k] = v;
    }
    const ExperimentConfig config = ExperimentConfig::from_json(j.dump());

    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    const ExperimentResult res = run_experiment(config, &os, threads);

    std::ofstream sfile;
    std::ostream& sos = summary_path.empty() ? std::cerr : open_out(sfile, summary_path);
    sos << kSummaryCsvHeader << '\n' << summary_csv_row(res.summary) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"group-testing toolkit: designs, decoders, bounds, simulation"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a pooling matrix");
    std::size_t gen_T = 0, gen_n = 0, gen_g = 1;
    double gen_p = 0.1;
    std::uint64_t gen_seed = 0;
    std::string gen_design = "bernoulli", gen_out;
    gen->add_option("--T", gen_T, "number of tests")->required();
    gen->add_option("--n", gen_n, "number of items")->required();
    gen->add_option("--design", gen_design, "bernoulli|coco");
    gen->add_option("--p", gen_p, "bernoulli entry probability");
    gen->add_option("--g", gen_g, "coco draws per test");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // decode
    auto* dec = app.add_subcommand("decode", "decode a result vector");
    std::string dec_matrix, dec_y, dec_algo = "coma", dec_out, dec_diag, dec_eta;
    double dec_q = 0.0;
    std::optional<double> dec_tau;
    std::optional<std::size_t> dec_d, dec_D;
    dec->add_option("--matrix", dec_matrix, "matrix file")->required();
    dec->add_option("--y", dec_y, "result vector file (one 0/1 line)")->required();
    dec->add_option("--algo", dec_algo, "coco|coma|nocoma|lipo|nolipo|nolipo+|nolipo-|nounlipo");
    dec->add_option("--q", dec_q, "noise level");
    dec->add_option("--tau", dec_tau, "threshold slack (default tau*)");
    dec->add_option("--d", dec_d, "exact defective count (LP decoders)");
    dec->add_option("--D", dec_D, "defective count upper bound");
    dec->add_option("--out", dec_out, "estimate output path (default stdout)");
    dec->add_option("--diag", dec_diag, "per-item diagnostics CSV (item,Tj,Sj,decision)");
    dec->add_option("--eta-out", dec_eta, "per-test slack CSV");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "evaluate closed-form test-count bounds");
    std::string bnd_algo, bnd_noise = "noiseless";
    std::size_t bnd_n = 0, bnd_D = 1;
    double bnd_delta = 1.0, bnd_q = 0.0, bnd_q0 = 0.0, bnd_q1 = 0.0, bnd_u = 0.0;
    bool bnd_json = false, bnd_as_stated = false;
    std::optional<std::size_t> bnd_act_d;
    bnd->add_option("--algo", bnd_algo, "bound tag")->required();
    bnd->add_option("--n", bnd_n, "items")->required();
    bnd->add_option("--D", bnd_D, "defective upper bound")->required();
    bnd->add_option("--delta", bnd_delta, "error exponent");
    bnd->add_option("--noise", bnd_noise, "noiseless|bsc|asym|activation");
    bnd->add_option("--q", bnd_q, "bsc flip probability");
    bnd->add_option("--q0", bnd_q0, "false-positive probability");
    bnd->add_option("--q1", bnd_q1, "false-negative probability");
    bnd->add_option("--u", bnd_u, "non-activation probability");
    bnd->add_option("--act-d", bnd_act_d, "activation bound at explicit d (default D)");
    bnd->add_flag("--as-stated", bnd_as_stated, "coco: theorem statement instead of its proof");
    bnd->add_flag("--json", bnd_json, "JSON output");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo experiment");
    std::string sim_config, sim_over, sim_out, sim_summary;
    unsigned sim_threads = 0;
    sim->add_option("--config", sim_config, "JSON config path");
    sim->add_option("--set", sim_over, "JSON object of config overrides");
    sim->add_option("--out", sim_out, "trial CSV path (default stdout)");
    sim->add_option("--summary", sim_summary, "summary CSV path (default stderr)");
    sim->add_option("--threads", sim_threads, "worker threads (default: hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(gen_T, gen_n, gen_design, gen_p, gen_g, gen_seed, gen_out);
        if (dec->parsed())
            return cmd_decode(dec_matrix, dec_y, dec_algo, dec_q, dec_tau, dec_d, dec_D, dec_out,
                              dec_diag, dec_eta);
        if (bnd->parsed())
            return cmd_bounds(bnd_algo, bnd_n, bnd_D, bnd_delta, bnd_noise, bnd_q, bnd_q0, bnd_q1,
                              bnd_u, bnd_as_stated, bnd_act_d, bnd_json);
        if (sim->parsed())
            return cmd_simulate(sim_config, sim_over, sim_out, sim_summary, sim_threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
