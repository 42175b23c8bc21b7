#include "gtkit/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gtkit/combinatorial.hpp"
#include "gtkit/lp_decoders.hpp"
#include "gtkit/rng.hpp"

namespace gtkit {

namespace {

using nlohmann::json;

// Substream indices hung off the per-trial seed.
enum : std::uint64_t { kSubCount = 0, kSubSubset = 1, kSubMatrix = 2, kSubNoise = 3 };

bounds::Algo bound_tag(const std::string& algo) {
    if (algo == "nolipo+" || algo == "nolipo-") return bounds::Algo::NolipoPm;
    if (algo == "nolipo") {
        return bounds::Algo::Nolipo;  // asym/activation variants resolved by noise kind below
    }
    return bounds::algo_from_string(algo);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (D < 1 || D > n) throw std::invalid_argument("config requires 1 <= D <= n");
    if (d && *d > D) throw std::invalid_argument("config requires d <= D");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    noise.validate();
    if (algo == "coco" || algo == "coma" || algo == "lipo") {
        if (noise.noisy())
            throw std::invalid_argument(algo + " is a noiseless decoder; noise kind must be noiseless");
    } else if (algo == "nocoma" || algo == "nounlipo") {
        if (noise.kind != NoiseKind::Bsc)
            throw std::invalid_argument(algo + " needs bsc noise (its threshold depends on q)");
    } else if (algo == "nolipo" || algo == "nolipo+" || algo == "nolipo-") {
        // any noise kind; the bound tag adapts
    } else {
        throw std::invalid_argument("unknown algo: " + algo);
    }
}

double ExperimentConfig::theory_T() const {
    bounds::BoundQuery q;
    q.n = n;
    q.D = D;
    q.delta = delta;
    q.noise = noise;
    q.algo = bound_tag(algo);
    if (algo == "nolipo") {
        if (noise.kind == NoiseKind::Asymmetric) q.algo = bounds::Algo::NolipoAsym;
        if (noise.kind == NoiseKind::Activation) q.algo = bounds::Algo::NolipoAct;
    }
    if (D >= n) return std::numeric_limits<double>::quiet_NaN();  // outside the bounds' domain
    return bounds::upper_bound(q).T;
}

std::size_t ExperimentConfig::resolved_T() const {
    if (T) return *T;
    const double theory = theory_T();
    if (!std::isfinite(theory))
        throw std::invalid_argument("T=auto needs D < n so the bound formulas apply");
    return static_cast<std::size_t>(std::ceil(theory));
}

double ExperimentConfig::resolved_tau() const {
    if (tau) return *tau;
    const auto [Gamma, gamma] = bounds::gamma_params(n, D, delta);
    (void)Gamma;
    return bounds::tau_star(noise.q, gamma);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig c;
    for (const auto& [key, val] : j.items()) {
        if (key == "n") c.n = val.get<std::size_t>();
        else if (key == "D") c.D = val.get<std::size_t>();
        else if (key == "d") {
            if (val.is_string()) {
                if (val.get<std::string>() != "random")
                    throw std::invalid_argument("config d must be an integer or \"random\"");
            } else {
                c.d = val.get<std::size_t>();
            }
        } else if (key == "delta") c.delta = val.get<double>();
        else if (key == "noise") {
            const std::string kind = val.value("kind", "noiseless");
            if (kind == "noiseless") c.noise = NoiseModel::noiseless();
            else if (kind == "bsc") c.noise = NoiseModel::bsc(val.at("q").get<double>());
            else if (kind == "asym")
                c.noise = NoiseModel::asymmetric(val.at("q0").get<double>(),
                                                 val.at("q1").get<double>());
            else if (kind == "activation")
                c.noise = NoiseModel::activation(val.at("u").get<double>(),
                                                 val.value("q0", 0.0));
            else throw std::invalid_argument("unknown noise kind: " + kind);
        } else if (key == "algo") c.algo = val.get<std::string>();
        else if (key == "T") {
            if (val.is_string()) {
                if (val.get<std::string>() != "auto")
                    throw std::invalid_argument("config T must be an integer or \"auto\"");
            } else {
                c.T = val.get<std::size_t>();
            }
        } else if (key == "trials") c.trials = val.get<std::size_t>();
        else if (key == "seed") c.seed = val.get<std::uint64_t>();
        else if (key == "tau") c.tau = val.get<double>();
        else if (key == "out") { /* output path handled by the CLI */ }
        else throw std::invalid_argument("unknown config key: " + key);
    }
    c.validate();
    return c;
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["n"] = n;
    j["D"] = D;
    if (d) j["d"] = *d; else j["d"] = "random";
    j["delta"] = delta;
    json nj;
    switch (noise.kind) {
        case NoiseKind::Noiseless: nj["kind"] = "noiseless"; break;
        case NoiseKind::Bsc: nj["kind"] = "bsc"; nj["q"] = noise.q; break;
        case NoiseKind::Asymmetric:
            nj["kind"] = "asym"; nj["q0"] = noise.q0; nj["q1"] = noise.q1; break;
        case NoiseKind::Activation:
            nj["kind"] = "activation"; nj["u"] = noise.u; nj["q0"] = noise.q0; break;
    }
    j["noise"] = nj;
    j["algo"] = algo;
    if (T) j["T"] = *T; else j["T"] = "auto";
    j["trials"] = trials;
    j["seed"] = seed;
    if (tau) j["tau"] = *tau;
    return j.dump();
}

std::pair<double, double> wilson_interval(std::size_t errors, std::size_t trials) {
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    double lo = std::max(0.0, center - half);
    double hi = std::min(1.0, center + half);
    if (errors == 0) lo = 0.0;
    if (errors == trials) hi = 1.0;
    return {lo, hi};
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t index) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t trial_seed = derive_seed(config.seed, index);

    std::size_t d = 0;
    if (config.d) {
        d = *config.d;
    } else {
        Rng rng(derive_seed(trial_seed, kSubCount));
        d = 1 + static_cast<std::size_t>(rng.uniform_below(config.D));
    }

    // Uniform weight-d subset via a partial Fisher-Yates shuffle.
    ProblemInstance inst;
    inst.n = config.n;
    {
        Rng rng(derive_seed(trial_seed, kSubSubset));
        std::vector<std::size_t> idx(config.n);
        for (std::size_t i = 0; i < config.n; ++i) idx[i] = i;
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(rng.uniform_below(config.n - i));
            std::swap(idx[i], idx[j]);
            inst.defective_set.insert(idx[i]);
        }
    }

    const std::size_t T = config.resolved_T();
    const std::uint64_t mseed = derive_seed(trial_seed, kSubMatrix);
    TestMatrix M;
    if (config.algo == "coco") {
        M = gen_coco_matrix(T, config.n, coco_group_size(config.n, config.D), mseed);
    } else {
        const double p = config.D == 1 ? 0.5 : 1.0 / static_cast<double>(config.D);
        M = gen_bernoulli_matrix(T, config.n, p, mseed);
    }

    const ResultVector y = noiseless_outcomes(M, inst);
    ResultVector y_hat;
    if (config.noise.kind == NoiseKind::Activation) {
        y_hat = apply_activation(M, inst, config.noise.u, config.noise.q0,
                                 derive_seed(trial_seed, kSubNoise))
                    .y_hat;
    } else {
        y_hat = apply_noise(y, config.noise, derive_seed(trial_seed, kSubNoise)).y_hat;
    }

    BitVec estimate;
    bool fail = false;
    std::optional<bool> integral;
    if (config.algo == "coco") {
        estimate = decode_coco(M, y_hat).estimate;
    } else if (config.algo == "coma") {
        estimate = decode_coma(M, y_hat).estimate;
    } else if (config.algo == "nocoma") {
        estimate = decode_nocoma(M, y_hat, config.noise.q, config.resolved_tau()).estimate;
    } else {
        LpDecodeOutput out;
        if (config.algo == "lipo")
            out = decode_lipo(M, y_hat, d);
        else if (config.algo == "nolipo")
            out = decode_nolipo(M, y_hat, d);
        else if (config.algo == "nolipo+")
            out = decode_nolipo_plus(M, y_hat, d);
        else if (config.algo == "nolipo-")
            out = decode_nolipo_minus(M, y_hat, d);
        else
            out = decode_nounlipo(M, y_hat, config.D, config.noise.q, config.resolved_tau());
        estimate = std::move(out.estimate);
        fail = out.failed;
        integral = out.integral;
    }

    TrialRecord rec;
    rec.trial = index;
    rec.seed = trial_seed;
    rec.T = T;
    rec.algo = config.algo;
    const BitVec truth = inst.indicator();
    for (std::size_t j = 0; j < config.n; ++j) {
        const bool est = estimate.get(j);
        const bool tru = truth.get(j);
        if (est && !tru) ++rec.false_def;
        if (!est && tru) ++rec.false_nondef;
    }
    rec.fail = fail;
    rec.exact = !fail && rec.false_def == 0 && rec.false_nondef == 0;
    rec.integral = integral;
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    return rec;
}

const char* kTrialCsvHeader = "trial,seed,T,algo,exact,false_def,false_nondef,fail,integral,ms";
const char* kSummaryCsvHeader =
    "n,D,d,delta,algo,noise,T,T_theory,trials,errors,err_rate,wilson_lo,wilson_hi,eps_target";

std::string trial_csv_row(const TrialRecord& r) {
    std::ostringstream os;
    os << r.trial << ',' << r.seed << ',' << r.T << ',' << r.algo << ',' << (r.exact ? 1 : 0)
       << ',' << r.false_def << ',' << r.false_nondef << ',' << (r.fail ? 1 : 0) << ',';
    if (r.integral) os << (*r.integral ? 1 : 0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.ms);
    os << ',' << buf;
    return os.str();
}

TrialRecord parse_trial_csv_row(const std::string& line) {
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            f.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    f.push_back(cur);
    if (f.size() != 10) throw std::invalid_argument("trial CSV row needs 10 fields");
    TrialRecord r;
    r.trial = std::stoull(f[0]);
    r.seed = std::stoull(f[1]);
    r.T = std::stoull(f[2]);
    r.algo = f[3];
    r.exact = f[4] == "1";
    r.false_def = std::stoull(f[5]);
    r.false_nondef = std::stoull(f[6]);
    r.fail = f[7] == "1";
    if (!f[8].empty()) r.integral = f[8] == "1";
    r.ms = std::stod(f[9]);
    return r;
}

std::string summary_csv_row(const SweepSummary& s) {
    std::ostringstream os;
    os << s.n << ',' << s.D << ',' << s.d << ',' << fmt(s.delta) << ',' << s.algo << ','
       << s.noise << ',' << s.T << ',' << fmt(s.T_theory) << ',' << s.trials << ',' << s.errors
       << ',' << fmt(s.err_rate) << ',' << fmt(s.wilson_lo) << ',' << fmt(s.wilson_hi) << ','
       << fmt(s.eps_target);
    return os.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* out,
                                unsigned threads) {
    config.validate();
    const std::size_t trials = config.trials;
    if (threads == 0) threads = std::min(std::thread::hardware_concurrency(), 8u);
    if (threads == 0) threads = 1;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

    std::vector<TrialRecord> records(trials);
    std::vector<char> done(trials, 0);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::condition_variable cv;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= trials) return;
            TrialRecord rec = run_trial(config, i);
            {
                std::lock_guard<std::mutex> lock(mu);
                records[i] = std::move(rec);
                done[i] = 1;
            }
            cv.notify_one();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

    if (out) *out << kTrialCsvHeader << '\n';
    std::size_t written = 0;
    {
        std::unique_lock<std::mutex> lock(mu);
        while (written < trials) {
            cv.wait(lock, [&] { return done[written]; });
            while (written < trials && done[written]) {
                if (out) *out << trial_csv_row(records[written]) << '\n';
                ++written;
            }
            if (out) out->flush();
        }
    }
    for (auto& t : pool) t.join();

    ExperimentResult result;
    result.records = std::move(records);
    SweepSummary& s = result.summary;
    s.n = config.n;
    s.D = config.D;
    s.d = config.d ? std::to_string(*config.d) : "random";
    s.delta = config.delta;
    s.algo = config.algo;
    s.noise = config.noise.describe();
    s.T = config.resolved_T();
    s.T_theory = config.theory_T();
    s.trials = trials;
    for (const auto& r : result.records)
        if (!r.exact) ++s.errors;
    s.err_rate = static_cast<double>(s.errors) / static_cast<double>(trials);
    std::tie(s.wilson_lo, s.wilson_hi) = wilson_interval(s.errors, trials);
    s.eps_target = std::pow(static_cast<double>(config.n), -config.delta);
    return result;
}

}  // namespace gtkit
