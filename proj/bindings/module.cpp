#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gtkit/bounds.hpp"
#include "gtkit/combinatorial.hpp"
#include "gtkit/harness.hpp"
#include "gtkit/lp_decoders.hpp"

namespace py = pybind11;
using namespace gtkit;

namespace {

std::vector<int> to_list(const BitVec& v) {
    std::vector<int> out(v.size(), 0);
    v.for_each_set([&](std::size_t i) { out[i] = 1; });
    return out;
}

BitVec from_list(const std::vector<int>& v) {
    BitVec b(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) b.set(i, v[i] != 0);
    return b;
}

ProblemInstance make_instance(std::size_t n, const std::vector<std::size_t>& defectives) {
    ProblemInstance inst;
    inst.n = n;
    inst.defective_set.insert(defectives.begin(), defectives.end());
    inst.validate();
    return inst;
}

NoiseModel noise_from_kwargs(const std::string& kind, double q, double q0, double q1, double u) {
    if (kind == "noiseless") return NoiseModel::noiseless();
    if (kind == "bsc") return NoiseModel::bsc(q);
    if (kind == "asym") return NoiseModel::asymmetric(q0, q1);
    if (kind == "activation") return NoiseModel::activation(u, q0);
    throw std::invalid_argument("unknown noise kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_gtkit, m) {
    m.doc() = "group-testing toolkit: pooling designs, decoders, bounds, simulation";

    py::class_<TestMatrix>(m, "TestMatrix")
        .def_property_readonly("rows", &TestMatrix::rows)
        .def_property_readonly("cols", &TestMatrix::cols)
        .def("get", [](const TestMatrix& M, std::size_t i, std::size_t j) {
            return M.bits.get(i, j);
        })
        .def("row_weight", [](const TestMatrix& M, std::size_t i) { return M.bits.row_weight(i); })
        .def("to_text", [](const TestMatrix& M) {
            std::ostringstream os;
            write_matrix(os, M);
            return os.str();
        })
        .def_static("from_text", [](const std::string& text) {
            std::istringstream is(text);
            return read_matrix(is);
        });

    m.def("gen_bernoulli_matrix", &gen_bernoulli_matrix, py::arg("T"), py::arg("n"), py::arg("p"),
          py::arg("seed"));
    m.def("gen_coco_matrix", &gen_coco_matrix, py::arg("T"), py::arg("n"), py::arg("g"),
          py::arg("seed"));
    m.def("coco_group_size", &coco_group_size, py::arg("n"), py::arg("D"));

    m.def("noiseless_outcomes",
          [](const TestMatrix& M, std::size_t n, const std::vector<std::size_t>& defectives) {
              return to_list(noiseless_outcomes(M, make_instance(n, defectives)));
          },
          py::arg("matrix"), py::arg("n"), py::arg("defectives"));

    m.def("apply_noise",
          [](const std::vector<int>& y, const std::string& kind, double q, double q0, double q1,
             std::uint64_t seed) {
              const auto out = apply_noise(from_list(y), noise_from_kwargs(kind, q, q0, q1, 0.0),
                                           seed);
              return py::make_tuple(to_list(out.y_hat), to_list(out.realization.nu));
          },
          py::arg("y"), py::arg("kind"), py::arg("q") = 0.0, py::arg("q0") = 0.0,
          py::arg("q1") = 0.0, py::arg("seed") = 0);

    m.def("apply_activation",
          [](const TestMatrix& M, std::size_t n, const std::vector<std::size_t>& defectives,
             double u, double q0, std::uint64_t seed) {
              return to_list(apply_activation(M, make_instance(n, defectives), u, q0, seed).y_hat);
          },
          py::arg("matrix"), py::arg("n"), py::arg("defectives"), py::arg("u"), py::arg("q0"),
          py::arg("seed") = 0);

    m.def("decode_coco", [](const TestMatrix& M, const std::vector<int>& y) {
        return to_list(decode_coco(M, from_list(y)).estimate);
    });
    m.def("decode_coma", [](const TestMatrix& M, const std::vector<int>& y) {
        return to_list(decode_coma(M, from_list(y)).estimate);
    });
    m.def("decode_nocoma",
          [](const TestMatrix& M, const std::vector<int>& y, double q, double tau) {
              return to_list(decode_nocoma(M, from_list(y), q, tau).estimate);
          },
          py::arg("matrix"), py::arg("y"), py::arg("q"), py::arg("tau"));

    py::class_<LpDecodeOutput>(m, "LpDecodeOutput")
        .def_property_readonly("estimate",
                               [](const LpDecodeOutput& o) { return to_list(o.estimate); })
        .def_readonly("eta", &LpDecodeOutput::eta)
        .def_readonly("fractional", &LpDecodeOutput::fractional)
        .def_readonly("integral", &LpDecodeOutput::integral)
        .def_readonly("objective_value", &LpDecodeOutput::objective_value)
        .def_readonly("failed", &LpDecodeOutput::failed)
        .def_readonly("accepted_dbar", &LpDecodeOutput::accepted_dbar);

    m.def("decode_lipo", [](const TestMatrix& M, const std::vector<int>& y, std::size_t d) {
        return decode_lipo(M, from_list(y), d);
    });
    m.def("decode_nolipo", [](const TestMatrix& M, const std::vector<int>& y, std::size_t d) {
        return decode_nolipo(M, from_list(y), d);
    });
    m.def("decode_nolipo_plus",
          [](const TestMatrix& M, const std::vector<int>& y, std::size_t d) {
              return decode_nolipo_plus(M, from_list(y), d);
          });
    m.def("decode_nolipo_minus",
          [](const TestMatrix& M, const std::vector<int>& y, std::size_t d) {
              return decode_nolipo_minus(M, from_list(y), d);
          });
    m.def("decode_nounlipo",
          [](const TestMatrix& M, const std::vector<int>& y, std::size_t D, double q, double tau) {
              return decode_nounlipo(M, from_list(y), D, q, tau);
          },
          py::arg("matrix"), py::arg("y"), py::arg("D"), py::arg("q"), py::arg("tau"));

    m.def("gamma_params", &bounds::gamma_params, py::arg("n"), py::arg("D"), py::arg("delta"));
    m.def("tau_star", &bounds::tau_star, py::arg("q"), py::arg("gamma"));
    m.def("binary_entropy", &bounds::binary_entropy);
    m.def("lower_bound_T",
          [](std::size_t n, std::size_t D, double delta, double q) {
              return bounds::lower_bound(n, D, delta, q).T;
          },
          py::arg("n"), py::arg("D"), py::arg("delta"), py::arg("q") = 0.0);
    m.def("upper_bound_T",
          [](const std::string& algo, std::size_t n, std::size_t D, double delta,
             const std::string& kind, double q, double q0, double q1, double u, bool as_stated) {
              bounds::BoundQuery query;
              query.algo = bounds::algo_from_string(algo);
              query.n = n;
              query.D = D;
              query.delta = delta;
              query.noise = noise_from_kwargs(kind, q, q0, q1, u);
              query.as_stated = as_stated;
              return bounds::upper_bound(query).T;
          },
          py::arg("algo"), py::arg("n"), py::arg("D"), py::arg("delta"),
          py::arg("noise") = "noiseless", py::arg("q") = 0.0, py::arg("q0") = 0.0,
          py::arg("q1") = 0.0, py::arg("u") = 0.0, py::arg("as_stated") = false);
    m.def("gap_factor", [](std::size_t n, std::size_t D, double delta, double q) {
        const auto g = bounds::gap_factor(n, D, delta, q);
        return py::make_tuple(g.ratio, g.closed_form);
    });

    m.def("run_experiment_json",
          [](const std::string& config_json) {
              const auto config = ExperimentConfig::from_json(config_json);
              std::ostringstream os;
              const auto res = run_experiment(config, &os);
              py::dict summary;
              summary["errors"] = res.summary.errors;
              summary["err_rate"] = res.summary.err_rate;
              summary["T"] = res.summary.T;
              summary["T_theory"] = res.summary.T_theory;
              summary["wilson_lo"] = res.summary.wilson_lo;
              summary["wilson_hi"] = res.summary.wilson_hi;
              summary["eps_target"] = res.summary.eps_target;
              return py::make_tuple(summary, os.str());
          },
          py::arg("config_json"));
}
