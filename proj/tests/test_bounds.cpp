#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gtkit/bounds.hpp"

using namespace gtkit;
using namespace gtkit::bounds;

namespace {

BoundQuery make(Algo algo, std::size_t n, std::size_t D, double delta, NoiseModel noise) {
    BoundQuery q;
    q.algo = algo;
    q.n = n;
    q.D = D;
    q.delta = delta;
    q.noise = noise;
    return q;
}

}  // namespace

TEST_CASE("gamma parameters") {
    {
        const auto [Gamma, gamma] = gamma_params(1000, 1, 0.7);
        CHECK(Gamma == 0.0);
        CHECK(gamma == doctest::Approx(0.7 / 1.7).epsilon(1e-12));
    }
    {
        const auto [Gamma, gamma] = gamma_params(1000, 10, 1.0);
        CHECK(Gamma == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(gamma == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    for (std::size_t n : {100u, 10000u})
        for (std::size_t D = 1; D < n; D = 3 * D + 2)
            for (double delta : {0.3, 1.0, 2.5}) {
                const auto [Gamma, gamma] = gamma_params(n, D, delta);
                CHECK(gamma > delta / (delta + 1.0) - 1e-12);
                CHECK(gamma <= 1.0 + 1e-12);
                CHECK(Gamma >= 0.0);
                CHECK(Gamma < 1.0);
            }
}

TEST_CASE("tau* examples and validity region") {
    CHECK(tau_star(0.1, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tau_star(0.49, 1.0) == doctest::Approx(0.02 / (4 * 0.49 * 2)).epsilon(1e-9));
    CHECK_THROWS_AS(tau_star(0.0, 0.5), std::domain_error);
    for (double q : {0.01, 0.1, 0.2, 0.4})
        for (double g : {0.3, 0.6, 1.0}) {
            const double t = tau_star(q, g);
            CHECK(t > 0.0);
            CHECK(t < (1.0 - 2.0 * q) / (4.0 * q));
        }
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(1.0 - binary_entropy(0.11) == doctest::Approx(0.50008).epsilon(1e-4));
}

TEST_CASE("lower bound examples") {
    // q = 0 reduces to the noiseless theorem.
    CHECK(lower_bound(1000, 10, 1.0, 0.0).T ==
          doctest::Approx(upper_bound(make(Algo::LowerNoiseless, 1000, 10, 1.0,
                                           NoiseModel::noiseless()))
                              .T));
    // n = 1024, D = 1, delta = 1: (1 - 1/1024) * 1 * 10 = 9.990.
    CHECK(lower_bound(1024, 1, 1.0, 0.0).T == doctest::Approx(9.990234375).epsilon(1e-9));
    // q = 0.11 roughly doubles the noiseless bound.
    const double t0 = lower_bound(1024, 1, 1.0, 0.0).T;
    const double t1 = lower_bound(1024, 1, 1.0, 0.11).T;
    CHECK(t1 / t0 == doctest::Approx(1.0 / 0.50008).epsilon(1e-3));
}

TEST_CASE("coma and coco headline values") {
    const auto coma = upper_bound(make(Algo::Coma, 1000, 10, 1.0, NoiseModel::noiseless()));
    CHECK(coma.T == doctest::Approx(375.5445130059837).epsilon(1e-12));
    const auto coco = upper_bound(make(Algo::Coco, 1000, 10, 1.0, NoiseModel::noiseless()));
    CHECK(coco.T == doctest::Approx(2 * 375.5445130059837).epsilon(1e-12));
    // The theorem-as-stated variant equals the relaxed column-matching bound.
    auto q = make(Algo::Coco, 1000, 10, 1.0, NoiseModel::bsc(0.1));
    q.as_stated = true;
    const auto stated = upper_bound(q);
    const auto nocoma = upper_bound(make(Algo::Nocoma, 1000, 10, 1.0, NoiseModel::bsc(0.1)));
    CHECK(stated.T == doctest::Approx(nocoma.T).epsilon(1e-12));
}

TEST_CASE("lipo equals nolipo at q = 0") {
    const auto lipo = upper_bound(make(Algo::Lipo, 2000, 12, 0.8, NoiseModel::noiseless()));
    const auto nolipo = upper_bound(make(Algo::Nolipo, 2000, 12, 0.8, NoiseModel::bsc(0.0)));
    CHECK(lipo.T == doctest::Approx(nolipo.T).epsilon(1e-12));
}

TEST_CASE("one-sided beta has the factor-two structure with w''") {
    const std::size_t n = 5000, D = 20;
    const double delta = 1.2, q = 0.08;
    const auto pm = upper_bound(make(Algo::NolipoPm, n, D, delta, NoiseModel::bsc(q)));
    const auto [Gamma, gamma] = gamma_params(n, D, delta);
    (void)gamma;
    const double s = 1.0 - 2.0 * q;
    const double w2 = 1.0 + s / D;
    const double expect = 2.0 * (delta + 1.0 + Gamma) * std::log(2.0) * std::exp(2.0) * w2 *
                          (w2 + s / 3.0) / (s * s) * D * std::log2(double(n));
    CHECK(pm.T == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("nounlipo is exactly the max of its two ingredients") {
    for (double q : {0.02, 0.1, 0.3})
        for (std::size_t D : {2u, 8u, 60u}) {
            const auto lps = upper_bound(make(Algo::Nounlipo, 5000, D, 0.5, NoiseModel::bsc(q)));
            const auto lp = upper_bound(make(Algo::Nolipo, 5000, D, 0.5, NoiseModel::bsc(q)));
            const auto nc = upper_bound(make(Algo::Nocoma, 5000, D, 0.5, NoiseModel::bsc(q)));
            CHECK(lps.T == std::max(lp.T, nc.T));
        }
}

TEST_CASE("upper bounds are monotone in delta, D, and q") {
    const auto algos = {Algo::Coco, Algo::Coma, Algo::Nocoma, Algo::Nolipo, Algo::Lipo,
                        Algo::NolipoPm, Algo::Nounlipo};
    for (Algo a : algos) {
        const bool noisy = a == Algo::Nocoma || a == Algo::Nolipo || a == Algo::NolipoPm ||
                           a == Algo::Nounlipo;
        const NoiseModel base = noisy ? NoiseModel::bsc(0.1) : NoiseModel::noiseless();
        double prev = 0.0;
        for (double delta : {0.4, 0.8, 1.6, 3.2}) {
            const double t = upper_bound(make(a, 4000, 12, delta, base)).T;
            CHECK(t >= prev);
            prev = t;
        }
        prev = 0.0;
        for (std::size_t D : {2u, 5u, 17u, 60u}) {
            const double t = upper_bound(make(a, 4000, D, 0.9, base)).T;
            CHECK(t >= prev);
            prev = t;
        }
        if (noisy) {
            prev = 0.0;
            for (double q : {0.0, 0.05, 0.15, 0.3, 0.45}) {
                if (q >= 0.5) continue;
                const double t = upper_bound(make(a, 4000, 12, 0.9, NoiseModel::bsc(q))).T;
                CHECK(t >= prev);
                prev = t;
            }
        }
    }
}

TEST_CASE("lower bound never exceeds the upper bounds on a desk-scale grid") {
    for (std::size_t n : {500u, 5000u, 50000u})
        for (std::size_t D : {2u, 8u, 40u})
            for (double delta : {0.5, 1.0})
                for (double q : {0.02, 0.1, 0.3}) {
                    const double low = lower_bound(n, D, delta, q).T;
                    for (Algo a : {Algo::Nocoma, Algo::Nolipo, Algo::NolipoPm, Algo::Nounlipo})
                        CHECK(low <= upper_bound(make(a, n, D, delta, NoiseModel::bsc(q))).T);
                }
}

TEST_CASE("tag/noise mismatches are parameter errors") {
    CHECK_THROWS_AS(upper_bound(make(Algo::Lipo, 100, 4, 1.0, NoiseModel::bsc(0.1))),
                    std::invalid_argument);
    CHECK_THROWS_AS(upper_bound(make(Algo::Coma, 100, 4, 1.0, NoiseModel::bsc(0.1))),
                    std::invalid_argument);
    CHECK_THROWS_AS(upper_bound(make(Algo::Nocoma, 100, 4, 1.0, NoiseModel::noiseless())),
                    std::invalid_argument);
    CHECK_THROWS_AS(upper_bound(make(Algo::NolipoAsym, 100, 4, 1.0, NoiseModel::bsc(0.1))),
                    std::invalid_argument);
    // activation bound needs 2 - u^d - 2 q0 > 0 at the d it is evaluated at
    auto act = make(Algo::NolipoAct, 100, 4, 1.0, NoiseModel::activation(0.999, 0.9));
    act.act_d = 1;  // 2 - 0.999 - 1.8 < 0
    CHECK_THROWS_AS(upper_bound(act), std::invalid_argument);
}

TEST_CASE("activation bound defaults to d = D and accepts explicit d") {
    auto q = make(Algo::NolipoAct, 2000, 6, 1.0, NoiseModel::activation(0.3, 0.05));
    const auto at_D = upper_bound(q);
    q.act_d = 6;
    CHECK(upper_bound(q).T == at_D.T);
    q.act_d = 2;
    CHECK(upper_bound(q).T != at_D.T);
}

TEST_CASE("gap factor example and q -> 0 behaviour") {
    // closed form at gamma = 1, delta = 1, q = 0.1: 12.83 * 4 * 2 / 0.64.
    const double expect = 12.83 * 4.0 * 2.0 / 0.64;
    CHECK(expect == doctest::Approx(160.375).epsilon(1e-9));
    const auto g = gap_factor(1000, 2, 1.0, 0.1);
    CHECK(g.ratio > 1.0);
    CHECK(g.closed_form > 0.0);
    // 1 - H(q) lies between (1-2q)^2/(2 ln 2) and (1-2q)^2, so the (1-2q)^-2
    // in beta* cancels and the ratio stays bounded as q -> 0.
    for (double q : {0.2, 0.1, 0.05, 0.01, 0.001}) {
        const double s2 = (1 - 2 * q) * (1 - 2 * q);
        const double one_minus_h = 1.0 - binary_entropy(q);
        CHECK(one_minus_h <= s2 + 1e-12);
        CHECK(one_minus_h >= s2 / (2.0 * std::log(2.0)) - 1e-12);
        const std::size_t n = 100000, D = 2;
        const auto [Gamma, gamma] = gamma_params(n, D, 1.0);
        const double cap = 16.0 * std::log(2.0) / (1.0 - std::exp(-2.0)) *
                           (1.0 + std::sqrt(gamma)) * (1.0 + std::sqrt(gamma)) * 2.0 /
                           ((1.0 - std::pow(double(n), -1.0)) * (1.0 - Gamma));
        const auto gg = gap_factor(n, D, 1.0, q);
        CHECK(gg.ratio <= cap + 1e-9);
        CHECK(gg.ratio >= cap / (2.0 * std::log(2.0)) - 1e-9);
    }
}

TEST_CASE("perturbation expectations: bsc closed forms") {
    const auto s = perturbation_expectations(1.0 / 3.0, 2, NoiseModel::bsc(0.1));
    CHECK(s.p1_plus == doctest::Approx((1.0 / 3.0) * (4.0 / 9.0) * 0.9).epsilon(1e-12));
    CHECK(s.p1_plus == doctest::Approx(0.13333333333).epsilon(1e-9));
    // E[Delta] per test = 2 p (1-p)^d (1-2q)
    CHECK(s.e_delta ==
          doctest::Approx(2.0 * (1.0 / 3.0) * (4.0 / 9.0) * 0.8).epsilon(1e-12));
    // E[#Delta] per test = 2p[(1-p)^d (1-q) + (1-p) q]
    CHECK(s.e_count ==
          doctest::Approx(2.0 * (1.0 / 3.0) * ((4.0 / 9.0) * 0.9 + (2.0 / 3.0) * 0.1))
              .epsilon(1e-12));
}

TEST_CASE("perturbation expectations: q = 0 kills the negative events") {
    const auto s = perturbation_expectations(0.25, 3, NoiseModel::noiseless());
    CHECK(s.p1_minus == 0.0);
    CHECK(s.p0_minus == 0.0);
    CHECK(s.e_delta == doctest::Approx(s.e_count).epsilon(1e-12));
}

TEST_CASE("perturbation probabilities are consistent and in range") {
    for (const auto& noise :
         {NoiseModel::bsc(0.12), NoiseModel::asymmetric(0.05, 0.15),
          NoiseModel::activation(0.3, 0.1)}) {
        for (double p : {0.1, 0.5})
            for (std::size_t d : {1u, 2u, 6u}) {
                const auto s = perturbation_expectations(p, d, noise);
                for (double v : {s.p1_plus, s.p1_minus, s.p0_plus, s.p0_minus}) {
                    CHECK(v >= 0.0);
                    CHECK(v <= 1.0);
                }
                CHECK(s.e_delta ==
                      doctest::Approx((s.p1_plus - s.p1_minus) + (s.p0_plus - s.p0_minus))
                          .epsilon(1e-12));
            }
    }
}

TEST_CASE("table II stratum expectation at d = 2") {
    // Each y-hat stratum contributes (1-2q)(1-p)^2 p to E[eta(x') - eta(x)].
    for (double p : {0.2, 1.0 / 3.0})
        for (double q : {0.1, 0.2}) {
            const auto s = perturbation_expectations(p, 2, NoiseModel::bsc(q));
            const double expect = (1.0 - 2.0 * q) * (1.0 - p) * (1.0 - p) * p;
            CHECK(s.p1_plus - s.p1_minus == doctest::Approx(expect).epsilon(1e-12));
            CHECK(s.p0_plus - s.p0_minus == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("bound tags round trip through strings") {
    for (const char* tag : {"lower_noiseless", "lower_noisy", "coco", "coma", "nocoma", "nolipo",
                            "nolipo_asym", "nolipo_act", "lipo", "nolipo_pm", "nounlipo"})
        CHECK(algo_to_string(algo_from_string(tag)) == tag);
    CHECK_THROWS_AS(algo_from_string("nope"), std::invalid_argument);
}
