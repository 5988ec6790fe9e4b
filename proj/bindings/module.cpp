// Python bindings for the ontolab core: model verification, classification,
// nonlocality experiments, and the fidelity/overlap primitives.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ontolab/analysis.hpp"
#include "ontolab/experiments.hpp"
#include "ontolab/models.hpp"

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace ontolab;

namespace {

// States arrive as "z+"-style specs, "theta,phi" strings, or (x, y, z) triples.
Ray ray_from_object(const py::object& obj) {
    if (py::isinstance<py::str>(obj)) {
        return parse_state_spec(obj.cast<std::string>());
    }
    auto v = obj.cast<std::vector<double>>();
    if (v.size() != 3) {
        throw std::invalid_argument("state must be a spec string or a 3-sequence (x, y, z)");
    }
    BlochVector b{v[0], v[1], v[2]};
    const double n = norm(b);
    if (n < 1e-12) throw std::invalid_argument("state vector must be non-zero");
    return bloch_to_ray((1.0 / n) * b);
}

QuadratureConfig make_config(std::optional<std::pair<int, int>> grid,
                             std::optional<long long> mc, unsigned long long seed,
                             int threads) {
    QuadratureConfig cfg;
    if (mc) {
        cfg = QuadratureConfig::monte_carlo(*mc, seed);
    } else if (grid) {
        cfg = QuadratureConfig::gauss(grid->first, grid->second);
        cfg.seed = seed;
    } else {
        cfg = QuadratureConfig::gauss();
        cfg.seed = seed;
    }
    cfg.threads = threads;
    return cfg;
}

py::list bloch_list(const BlochVector& v) {
    py::list out;
    out.append(v.x);
    out.append(v.y);
    out.append(v.z);
    return out;
}

py::list point_list(const OnticPoint& p) {
    py::list out;
    for (const auto& c : p.coords) out.append(bloch_list(c));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical laboratory for ontological models of a single qubit";

    py::register_exception<HypothesisRefusal>(m, "HypothesisRefusal");
    py::register_exception<ModelContractError>(m, "ModelContractError");

    m.def("model_names", [] {
        std::vector<std::string> names;
        for (const auto& [name, factory] : model_registry()) names.push_back(name);
        return names;
    }, "Registered model names.");

    m.def("bloch_vector", [](const py::object& state) {
        return bloch_list(ray_to_bloch(ray_from_object(state)));
    }, py::arg("state"), "Bloch vector (x, y, z) of a state spec.");

    m.def("born_probability", [](const py::object& phi, const py::object& psi) {
        return born_probability(ray_from_object(phi), ray_from_object(psi));
    }, py::arg("outcome"), py::arg("state"),
       "Born probability |<outcome|state>|^2.");

    m.def("verify_born",
          [](const std::string& model, std::optional<std::pair<int, int>> grid,
             std::optional<long long> mc, unsigned long long seed, int threads,
             int pairs) {
              const auto cfg = make_config(grid, mc, seed, threads);
              const auto r = verify_born(*find_model(model), cfg, pairs);
              py::dict out;
              out["model"] = model;
              out["pairs"] = r.pairs;
              out["max_deviation"] = r.max_deviation;
              out["max_sigma_excess"] = r.max_sigma_excess;
              out["worst_psi"] = bloch_list(ray_to_bloch(r.worst_psi));
              out["worst_phi"] = bloch_list(ray_to_bloch(r.worst_phi));
              out["pass"] = r.pass;
              return out;
          },
          py::arg("model"), py::arg("grid") = std::nullopt, py::arg("mc") = std::nullopt,
          py::arg("seed") = 0, py::arg("threads") = 0, py::arg("pairs") = 100,
          "Born-rule reproduction suite over deterministic state/measurement pairs.");

    m.def("classify",
          [](const std::string& model, std::optional<std::pair<int, int>> grid,
             std::optional<long long> mc, unsigned long long seed, int threads) {
              const auto cfg = make_config(grid, mc, seed, threads);
              const auto r = classify(*find_model(model), make_default_sampler(), cfg);
              py::dict out;
              out["model"] = r.model_name;
              out["verdict"] = verdict_name(r.verdict);
              out["psi_ontic"] = r.is_psi_ontic;
              out["pairs_tested"] = r.pairs_tested;
              out["max_fidelity"] = r.max_fidelity;
              if (r.witness) {
                  py::dict w;
                  w["psi"] = bloch_list(ray_to_bloch(r.witness->psi));
                  w["phi"] = bloch_list(ray_to_bloch(r.witness->phi));
                  w["fidelity"] = r.witness->fidelity;
                  if (r.witness->overlap_point) {
                      w["overlap_point"] = point_list(*r.witness->overlap_point);
                  }
                  out["witness"] = w;
              } else {
                  out["witness"] = py::none();
              }
              return out;
          },
          py::arg("model"), py::arg("grid") = std::nullopt, py::arg("mc") = std::nullopt,
          py::arg("seed") = 0, py::arg("threads") = 0,
          "Classify a model as psi-complete, psi-supplemented, or psi-epistemic.");

    m.def("fidelity",
          [](const std::string& model, const py::object& psi, const py::object& phi,
             std::optional<std::pair<int, int>> grid, std::optional<long long> mc,
             unsigned long long seed, int threads) {
              const auto cfg = make_config(grid, mc, seed, threads);
              const auto mod = find_model(model);
              return classical_fidelity(mod->prepare(ray_from_object(psi)),
                                        mod->prepare(ray_from_object(phi)), cfg);
          },
          py::arg("model"), py::arg("psi"), py::arg("phi"), py::arg("grid") = std::nullopt,
          py::arg("mc") = std::nullopt, py::arg("seed") = 0, py::arg("threads") = 0,
          "Classical fidelity between the epistemic states of two preparations.");

    m.def("theorem1",
          [](const std::string& model, std::optional<std::pair<int, int>> grid,
             std::optional<long long> mc, unsigned long long seed, int threads) {
              const auto cfg = make_config(grid, mc, seed, threads);
              const auto v = theorem1_check(*find_model(model), cfg);
              py::dict out;
              out["model"] = model;
              out["verdict"] = locality_kind_name(v.kind);
              out["fidelity_plus_0"] = v.f_plus_0;
              out["fidelity_plus_1"] = v.f_plus_1;
              out["fidelity_minus_0"] = v.f_minus_0;
              out["fidelity_minus_1"] = v.f_minus_1;
              if (v.overlap_witness) {
                  py::dict w;
                  w["pair"] = v.overlap_witness->pair;
                  w["point"] = point_list(v.overlap_witness->point);
                  out["witness"] = w;
              } else {
                  out["witness"] = py::none();
              }
              return out;
          },
          py::arg("model"), py::arg("grid") = std::nullopt, py::arg("mc") = std::nullopt,
          py::arg("seed") = 0, py::arg("threads") = 0,
          "Steering certificate: nonlocal-by-theorem1 or escapes-theorem1.");

    m.def("einstein1927",
          [](const std::string& model, const std::optional<py::object>& state,
             std::optional<std::pair<int, int>> grid, std::optional<long long> mc,
             unsigned long long seed, int threads) {
              const auto cfg = make_config(grid, mc, seed, threads);
              std::optional<Ray> psi;
              if (state) psi = ray_from_object(*state);
              const auto r = einstein_1927_check(*find_model(model), cfg, psi);
              py::dict out;
              out["model"] = model;
              out["p_joint_factorized"] = r.p_joint_factorized;
              out["p_joint_quantum"] = r.p_joint_quantum;
              out["contradiction"] = r.contradiction;
              return out;
          },
          py::arg("model"), py::arg("state") = std::nullopt, py::arg("grid") = std::nullopt,
          py::arg("mc") = std::nullopt, py::arg("seed") = 0, py::arg("threads") = 0,
          "Einstein's 1927 argument; raises HypothesisRefusal unless the model is "
          "psi-complete.");

    m.def("residual",
          [](const std::string& model, std::optional<std::pair<int, int>> grid,
             std::optional<long long> mc, unsigned long long seed, int threads) {
              const auto cfg = make_config(grid, mc, seed, threads);
              return local_causality_residual(*find_model(model), cfg);
          },
          py::arg("model"), py::arg("grid") = std::nullopt, py::arg("mc") = std::nullopt,
          py::arg("seed") = 0, py::arg("threads") = 0,
          "Total-variation distance between the two steered mixture decompositions.");

    m.def("bm_conditional_indicator",
          [](const py::object& phi, const py::object& lambda_prime,
             std::optional<std::pair<int, int>> grid, std::optional<long long> mc,
             unsigned long long seed, int threads) {
              const auto cfg = make_config(grid, mc, seed, threads);
              auto v = lambda_prime.cast<std::vector<double>>();
              if (v.size() != 3) {
                  throw std::invalid_argument("lambda_prime must be a 3-sequence");
              }
              BlochVector lp{v[0], v[1], v[2]};
              const double n = norm(lp);
              if (n < 1e-12) throw std::invalid_argument("lambda_prime must be non-zero");
              return bm_conditional_indicator(ray_from_object(phi), (1.0 / n) * lp, cfg);
          },
          py::arg("outcome"), py::arg("lambda_prime"), py::arg("grid") = std::nullopt,
          py::arg("mc") = std::nullopt, py::arg("seed") = 0, py::arg("threads") = 0,
          "Second-sphere marginal of the two-sphere model's indicator function.");

    m.def("bm_to_ks_reduction",
          [](const py::object& psi, long long n_samples, unsigned long long seed, int bins,
             int threads) {
              const auto r = bm_to_ks_reduction(ray_from_object(psi), n_samples, seed, bins,
                                                threads);
              py::dict out;
              out["bins"] = r.bins;
              out["samples"] = r.samples;
              out["discarded"] = r.discarded;
              out["max_sigma_deviation"] = r.max_sigma_deviation;
              out["lower_hemisphere_counts"] = r.lower_hemisphere_counts;
              out["pass"] = r.pass;
              out["counts"] = r.counts;
              out["expected"] = r.expected;
              return out;
          },
          py::arg("psi") = "z+", py::arg("n_samples") = 1000000, py::arg("seed") = 0,
          py::arg("bins") = 64, py::arg("threads") = 0,
          "Histogram check that summed two-sphere coordinates reduce to the "
          "hemisphere-cone density.");
}
