#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gtkit/harness.hpp"

using namespace gtkit;

namespace {

ExperimentConfig base_config() {
    ExperimentConfig c;
    c.n = 60;
    c.D = 4;
    c.d = 3;
    c.delta = 1.0;
    c.noise = NoiseModel::noiseless();
    c.algo = "coma";
    c.T = 80;
    c.trials = 50;
    c.seed = 77;
    return c;
}

}  // namespace

TEST_CASE("config json round trip with exact keys") {
    const char* text = R"({"n":500,"D":8,"d":"random","delta":0.5,
        "noise":{"kind":"bsc","q":0.05},"algo":"nounlipo","T":"auto",
        "trials":100,"seed":42})";
    const auto c = ExperimentConfig::from_json(text);
    CHECK(c.n == 500);
    CHECK(c.D == 8);
    CHECK_FALSE(c.d.has_value());
    CHECK(c.delta == 0.5);
    CHECK(c.noise.kind == NoiseKind::Bsc);
    CHECK(c.noise.q == 0.05);
    CHECK(c.algo == "nounlipo");
    CHECK_FALSE(c.T.has_value());
    CHECK(c.trials == 100);
    CHECK(c.seed == 42);
    const auto back = ExperimentConfig::from_json(c.to_json());
    CHECK(back.n == c.n);
    CHECK(back.algo == c.algo);
    CHECK_FALSE(back.T.has_value());
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"n":10,"bogus":1})"),
                    std::invalid_argument);
}

TEST_CASE("config validation") {
    auto c = base_config();
    c.algo = "coco";
    c.noise = NoiseModel::bsc(0.1);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // noiseless-only decoder
    c.noise = NoiseModel::noiseless();
    c.validate();
    c.algo = "nocoma";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // needs bsc
    c.algo = "bogus";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = base_config();
    c.d = 9;  // > D
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("fixed seed reproduces a bit-identical record") {
    const auto c = base_config();
    const auto a = run_trial(c, 11);
    const auto b = run_trial(c, 11);
    CHECK(a.seed == b.seed);
    CHECK(a.exact == b.exact);
    CHECK(a.false_def == b.false_def);
    CHECK(a.false_nondef == b.false_nondef);
    CHECK(a.fail == b.fail);
    CHECK(trial_csv_row(a).substr(0, trial_csv_row(a).rfind(',')) ==
          trial_csv_row(b).substr(0, trial_csv_row(b).rfind(',')));
}

TEST_CASE("noiseless coma trials never produce false non-defectives") {
    auto c = base_config();
    c.trials = 200;
    const auto res = run_experiment(c);
    for (const auto& r : res.records) {
        CHECK(r.false_nondef == 0);
        CHECK(r.exact == (r.false_def == 0 && r.false_nondef == 0 && !r.fail));
    }
}

TEST_CASE("single-item recovery probability is 1 - 2^-T") {
    // n = 1, d = 0, D = 1 (so p = 1/2): failure iff the lone column is all
    // zero, which happens with probability 2^-T.
    auto c = base_config();
    c.n = 1;
    c.D = 1;
    c.d = 0;
    c.T = 3;
    c.trials = 4000;
    c.seed = 5;
    const auto res = run_experiment(c);
    const double expect = 1.0 / 8.0;
    const double rate = res.summary.err_rate;
    const double sigma = std::sqrt(expect * (1 - expect) / 4000.0);
    CHECK(std::fabs(rate - expect) <= 4.0 * sigma);
}

TEST_CASE("aggregate counts are schedule independent") {
    auto c = base_config();
    c.trials = 120;
    const auto serial = run_experiment(c, nullptr, 1);
    const auto parallel = run_experiment(c, nullptr, 2);
    CHECK(serial.summary.errors == parallel.summary.errors);
    for (std::size_t i = 0; i < c.trials; ++i) {
        CHECK(serial.records[i].seed == parallel.records[i].seed);
        CHECK(serial.records[i].exact == parallel.records[i].exact);
    }
}

TEST_CASE("trial CSV round trips every field") {
    auto c = base_config();
    c.algo = "nolipo";
    c.noise = NoiseModel::bsc(0.1);
    c.T = 40;
    c.trials = 8;
    std::ostringstream os;
    const auto res = run_experiment(c, &os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == kTrialCsvHeader);
    for (const auto& r : res.records) {
        REQUIRE(std::getline(is, line));
        const auto back = parse_trial_csv_row(line);
        CHECK(back.trial == r.trial);
        CHECK(back.seed == r.seed);
        CHECK(back.T == r.T);
        CHECK(back.algo == r.algo);
        CHECK(back.exact == r.exact);
        CHECK(back.false_def == r.false_def);
        CHECK(back.false_nondef == r.false_nondef);
        CHECK(back.fail == r.fail);
        CHECK(back.integral == r.integral);
        CHECK(back.ms == doctest::Approx(r.ms).epsilon(1e-3));
    }
}

TEST_CASE("wilson interval at zero errors") {
    const auto [lo, hi] = wilson_interval(0, 1000);
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(0.00383).epsilon(0.02));
}

TEST_CASE("summary row fields") {
    auto c = base_config();
    c.trials = 30;
    const auto res = run_experiment(c);
    const auto& s = res.summary;
    CHECK(s.n == c.n);
    CHECK(s.trials == 30);
    CHECK(s.err_rate == doctest::Approx(double(s.errors) / 30.0));
    CHECK(s.eps_target == doctest::Approx(1.0 / 60.0).epsilon(1e-9));
    CHECK(s.T == 80);
    CHECK(s.T_theory > 0.0);
    const auto row = summary_csv_row(s);
    CHECK(row.find("coma") != std::string::npos);
    CHECK(row.find("noiseless") != std::string::npos);
}

TEST_CASE("auto T picks the ceiling of the theoretical bound") {
    auto c = base_config();
    c.T.reset();
    CHECK(c.resolved_T() == static_cast<std::size_t>(std::ceil(c.theory_T())));
}

TEST_CASE("error rate is monotone in T for paired noiseless coma trials") {
    // The matrix stream is row-by-row, so the T1-test design is a prefix of
    // the T2-test design under the same seed; exact recovery at T1 implies it
    // at T2 trial by trial.
    auto c1 = base_config();
    c1.n = 40;
    c1.D = 3;
    c1.d = 3;
    c1.trials = 150;
    c1.T = 30;
    auto c2 = c1;
    c2.T = 60;
    const auto r1 = run_experiment(c1);
    const auto r2 = run_experiment(c2);
    for (std::size_t i = 0; i < c1.trials; ++i)
        if (r1.records[i].exact) CHECK(r2.records[i].exact);
    CHECK(r2.summary.errors <= r1.summary.errors);
}
