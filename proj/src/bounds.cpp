#include "gtkit/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gtkit::bounds {

namespace {

constexpr double kE = 2.718281828459045235;
constexpr double kLn2 = 0.6931471805599453094;
const double kNan = std::numeric_limits<double>::quiet_NaN();

double log2n(std::size_t n) { return std::log2(static_cast<double>(n)); }

void check_nd(std::size_t n, std::size_t D) {
    if (D < 1 || D >= n) throw std::invalid_argument("bounds require 1 <= D < n");
}

double require_bsc(const BoundQuery& q, bool allow_noiseless) {
    if (q.noise.kind == NoiseKind::Bsc) return q.noise.q;
    if (allow_noiseless && q.noise.kind == NoiseKind::Noiseless) return 0.0;
    throw std::invalid_argument("bound for " + algo_to_string(q.algo) +
                                " needs a symmetric bit-flip noise level");
}

void require_noiseless(const BoundQuery& q) {
    if (q.noise.kind != NoiseKind::Noiseless &&
        !(q.noise.kind == NoiseKind::Bsc && q.noise.q == 0.0))
        throw std::invalid_argument("bound for " + algo_to_string(q.algo) +
                                    " is a noiseless result; q > 0 is a parameter error");
}

// 16 (1 + sqrt(gamma))^2 (1 + delta) ln2 / ((1 - e^-2)(1 - 2q)^2); the
// equivalent (1 + gamma^-1/2)^2 (Gamma + delta) form is cross-checked.
double beta_star(double Gamma, double gamma, double delta, double q) {
    const double denom = (1.0 - std::exp(-2.0)) * (1.0 - 2.0 * q) * (1.0 - 2.0 * q);
    const double b1 = 16.0 * (1.0 + std::sqrt(gamma)) * (1.0 + std::sqrt(gamma)) *
                      (1.0 + delta) * kLn2 / denom;
    const double b2 = 16.0 * (1.0 + 1.0 / std::sqrt(gamma)) * (1.0 + 1.0 / std::sqrt(gamma)) *
                      (Gamma + delta) * kLn2 / denom;
    if (std::fabs(b1 - b2) > 1e-6 * std::fabs(b1))
        throw std::logic_error("beta* algebraic forms disagree (defect)");
    return b1;
}

}  // namespace

Algo algo_from_string(const std::string& s) {
    if (s == "lower_noiseless") return Algo::LowerNoiseless;
    if (s == "lower_noisy") return Algo::LowerNoisy;
    if (s == "coco") return Algo::Coco;
    if (s == "coma") return Algo::Coma;
    if (s == "nocoma") return Algo::Nocoma;
    if (s == "nolipo") return Algo::Nolipo;
    if (s == "nolipo_asym") return Algo::NolipoAsym;
    if (s == "nolipo_act") return Algo::NolipoAct;
    if (s == "lipo") return Algo::Lipo;
    if (s == "nolipo_pm" || s == "nolipo+" || s == "nolipo-") return Algo::NolipoPm;
    if (s == "nounlipo") return Algo::Nounlipo;
    throw std::invalid_argument("unknown bound tag: " + s);
}

std::string algo_to_string(Algo a) {
    switch (a) {
        case Algo::LowerNoiseless: return "lower_noiseless";
        case Algo::LowerNoisy: return "lower_noisy";
        case Algo::Coco: return "coco";
        case Algo::Coma: return "coma";
        case Algo::Nocoma: return "nocoma";
        case Algo::Nolipo: return "nolipo";
        case Algo::NolipoAsym: return "nolipo_asym";
        case Algo::NolipoAct: return "nolipo_act";
        case Algo::Lipo: return "lipo";
        case Algo::NolipoPm: return "nolipo_pm";
        case Algo::Nounlipo: return "nounlipo";
    }
    return "?";
}

std::pair<double, double> gamma_params(std::size_t n, std::size_t D, double delta) {
    check_nd(n, D);
    const double Gamma = std::log(static_cast<double>(D)) / std::log(static_cast<double>(n));
    const double gamma = (Gamma + delta) / (1.0 + delta);
    return {Gamma, gamma};
}

double tau_star(double q, double gamma) {
    if (q == 0.0)
        throw std::domain_error("tau* is undefined at q = 0; use exact column matching");
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("tau* requires 0 < q < 1/2");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("tau* requires 0 < gamma <= 1");
    return (1.0 - 2.0 * q) / (4.0 * q * (1.0 + 1.0 / std::sqrt(gamma)));
}

double binary_entropy(double q) {
    if (q <= 0.0 || q >= 1.0) return 0.0;
    return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

BoundResult lower_bound(std::size_t n, std::size_t D, double delta, double q) {
    check_nd(n, D);
    if (!(q >= 0.0 && q < 0.5)) throw std::invalid_argument("lower bound requires 0 <= q < 1/2");
    const auto [Gamma, gamma] = gamma_params(n, D, delta);
    BoundResult r;
    r.internals = {Gamma, gamma, kNan, kNan};
    const double eps = std::pow(static_cast<double>(n), -delta);
    r.T = (1.0 - eps) * (1.0 - Gamma) * static_cast<double>(D) * log2n(n) /
          (1.0 - binary_entropy(q));
    r.beta = r.T / (static_cast<double>(D) * log2n(n));
    return r;
}

BoundResult upper_bound(const BoundQuery& query) {
    check_nd(query.n, query.D);
    if (!(query.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    query.noise.validate();
    const auto [Gamma, gamma] = gamma_params(query.n, query.D, query.delta);
    const double n = static_cast<double>(query.n);
    const double D = static_cast<double>(query.D);
    const double delta = query.delta;
    const double lg = log2n(query.n);
    const double ln_n = std::log(n);

    BoundResult r;
    r.internals = {Gamma, gamma, kNan, kNan};

    switch (query.algo) {
        case Algo::LowerNoiseless:
            return lower_bound(query.n, query.D, delta, 0.0);
        case Algo::LowerNoisy:
            return lower_bound(query.n, query.D, delta, require_bsc(query, true));
        case Algo::Coma: {
            require_noiseless(query);
            r.T = kE * D * (1.0 + delta) * ln_n;
            break;
        }
        case Algo::Coco: {
            if (query.as_stated) {
                const double q = require_bsc(query, true);
                if (q > 0.0) r.internals.tau_star = tau_star(q, gamma);
                r.T = beta_star(Gamma, gamma, delta, q) * D * lg;
            } else {
                require_noiseless(query);
                r.T = 2.0 * kE * D * (1.0 + delta) * ln_n;
            }
            break;
        }
        case Algo::Nocoma: {
            const double q = require_bsc(query, false);
            if (q > 0.0) r.internals.tau_star = tau_star(q, gamma);
            r.T = beta_star(Gamma, gamma, delta, q) * D * lg;
            break;
        }
        case Algo::Nolipo: {
            const double s = 1.0 - 2.0 * require_bsc(query, true);
            const double w = 1.0 + 2.0 * s / D;
            r.internals.w = w;
            r.T = (delta + 1.0 + Gamma) * kLn2 * kE * kE * w * (w + s / 3.0) / (s * s) * D * lg;
            break;
        }
        case Algo::NolipoAsym: {
            if (query.noise.kind != NoiseKind::Asymmetric)
                throw std::invalid_argument("nolipo_asym needs asymmetric noise parameters");
            const double s = 1.0 - query.noise.q0 - query.noise.q1;
            const double w = 1.0 + 2.0 * s / D;
            r.internals.w = w;
            r.T = (delta + 1.0 + Gamma) * kLn2 * kE * kE * w * (w + s / 3.0) / (s * s) * D * lg;
            break;
        }
        case Algo::NolipoAct: {
            if (query.noise.kind != NoiseKind::Activation)
                throw std::invalid_argument("nolipo_act needs activation noise parameters");
            const double u = query.noise.u;
            const double q0 = query.noise.q0;
            const double d = static_cast<double>(query.act_d.value_or(query.D));
            const double s = 2.0 - std::pow(u, d) - 2.0 * q0;
            if (!(s > 0.0))
                throw std::invalid_argument("activation bound needs 2 - u^d - 2 q0 > 0");
            const double w = 1.0 + s / D;
            r.internals.w = w;
            r.T = (delta + 1.0 + Gamma) * 2.0 * kLn2 * kE * kE * w *
                  (3.0 * w * (2.0 + u - std::pow(u, d)) - s) / (3.0 * s * s) * D * lg;
            break;
        }
        case Algo::Lipo: {
            require_noiseless(query);
            const double w = 1.0 + 2.0 / D;
            r.internals.w = w;
            r.T = (delta + 1.0 + Gamma) * kLn2 * kE * kE * w * (w + 1.0 / 3.0) * D * lg;
            break;
        }
        case Algo::NolipoPm: {
            const double s = 1.0 - 2.0 * require_bsc(query, true);
            const double w = 1.0 + s / D;
            r.internals.w = w;
            r.T = 2.0 * (delta + 1.0 + Gamma) * kLn2 * kE * kE * w * (w + s / 3.0) / (s * s) * D *
                  lg;
            break;
        }
        case Algo::Nounlipo: {
            BoundQuery a = query;
            a.algo = Algo::Nolipo;
            BoundQuery b = query;
            b.algo = Algo::Nocoma;
            const BoundResult ra = upper_bound(a);
            const BoundResult rb = upper_bound(b);
            r = ra.T >= rb.T ? ra : rb;
            r.internals.w = ra.internals.w;
            r.internals.tau_star = rb.internals.tau_star;
            break;
        }
    }
    r.internals.Gamma = Gamma;
    r.internals.gamma = gamma;
    r.beta = r.T / (D * lg);
    return r;
}

GapResult gap_factor(std::size_t n, std::size_t D, double delta, double q) {
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("gap factor requires 0 < q < 1/2");
    BoundQuery query;
    query.n = n;
    query.D = D;
    query.delta = delta;
    query.noise = NoiseModel::bsc(q);
    query.algo = Algo::Nocoma;
    const BoundResult up = upper_bound(query);
    const BoundResult low = lower_bound(n, D, delta, q);
    GapResult g;
    g.ratio = up.T / low.T;
    const double gamma = up.internals.gamma;
    g.closed_form = 12.83 * (1.0 + std::sqrt(gamma)) * (1.0 + std::sqrt(gamma)) * (1.0 + delta) /
                    ((1.0 - 2.0 * q) * (1.0 - 2.0 * q));
    return g;
}

PerturbationStats perturbation_expectations(double p, std::size_t d, const NoiseModel& noise) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    noise.validate();
    const double dd = static_cast<double>(d);
    const double pd = std::pow(1.0 - p, dd);       // (1-p)^d
    const double pd1 = std::pow(1.0 - p, dd - 1);  // (1-p)^(d-1)
    PerturbationStats s;
    switch (noise.kind) {
        case NoiseKind::Noiseless:
        case NoiseKind::Bsc: {
            const double q = noise.kind == NoiseKind::Bsc ? noise.q : 0.0;
            s.p1_plus = p * pd * (1.0 - q);
            s.p1_minus = p * pd * q;
            s.p0_plus = p * (1.0 - p) * ((1.0 - 2.0 * q) * pd1 + q);
            s.p0_minus = p * (1.0 - p) * q;
            break;
        }
        case NoiseKind::Asymmetric: {
            const double q0 = noise.q0;
            const double q1 = noise.q1;
            s.p1_plus = p * pd * (1.0 - q1);
            s.p1_minus = p * pd * q0;
            s.p0_plus = p * (1.0 - p) * ((1.0 - q0 - q1) * pd1 + q1);
            s.p0_minus = p * (1.0 - p) * q1;
            break;
        }
        case NoiseKind::Activation: {
            const double u = noise.u;
            const double q0 = noise.q0;
            const double ud = std::pow(u, dd);
            const double mix = std::pow(1.0 - p + p * u, dd - 1);  // (1-p+pu)^(d-1)
            s.p1_plus = p * pd * (1.0 - ud);
            s.p1_minus = p * pd * q0;
            s.p0_plus = p * (1.0 - p) * (mix - pd1 * q0);
            s.p0_minus = p * (1.0 - p) * mix * u;
            break;
        }
    }
    s.e_delta = (s.p1_plus - s.p1_minus) + (s.p0_plus - s.p0_minus);
    s.e_count = s.p1_plus + s.p1_minus + s.p0_plus + s.p0_minus;
    return s;
}

}  // namespace gtkit::bounds
