// The ontological-model interface and the three concrete single-qubit models:
//   bb — ontic space is the Bloch sphere itself; preparations are point
//        masses at the state's own vector; responses are affine.
//   bm — two sphere factors; the first carries a point mass at the prepared
//        vector, the second is uniform; responses are half-space steps in the
//        sum of the two coordinates.
//   ks — one sphere; preparations are hemispherical cone densities
//        (1/pi) max(psi . lambda, 0); responses are half-space steps.
// Each model reproduces the quantum statistics exactly; verify_born checks
// that numerically over a deterministic family of state/measurement pairs.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "ontolab/bloch.hpp"
#include "ontolab/measures.hpp"

namespace ontolab {

class OntologicalModel {
  public:
    virtual ~OntologicalModel() = default;
    virtual std::string name() const = 0;
    virtual OnticSpace space() const = 0;
    virtual EpistemicState prepare(const Ray& psi) const = 0;
    virtual IndicatorFunction indicator(const ProjectiveMeasurement& m) const = 0;
};

using ModelPtr = std::shared_ptr<const OntologicalModel>;

ModelPtr bb_model();
ModelPtr bm_model();
ModelPtr ks_model();

// Registry keyed by short name ("bb", "bm", "ks").
const std::map<std::string, std::function<ModelPtr()>>& model_registry();
ModelPtr find_model(const std::string& name);  // throws std::out_of_range if unknown

// A model whose statistics deviate from the quantum prediction beyond
// tolerance is not a model of quantum theory; this carries the failing pair.
struct ModelContractError : std::runtime_error {
    Ray psi, phi;
    double deviation;
    ModelContractError(const Ray& psi_, const Ray& phi_, double dev, const std::string& msg)
        : std::runtime_error(msg), psi(psi_), phi(phi_), deviation(dev) {}
};

struct BornCheckReport {
    int pairs = 0;
    double max_deviation = 0.0;   // worst |model - born|
    double max_sigma_excess = 0.0;  // worst |model - born| / std_error (Monte Carlo only)
    Ray worst_psi, worst_phi;
    bool pass = false;
};

// Compares model statistics against the Born rule on `n_pairs` deterministic
// pseudo-random state/measurement pairs. Pass rule: deviation <= tol for grid
// quadrature, deviation <= 3 standard errors for Monte Carlo.
BornCheckReport verify_born(const OntologicalModel& model, const QuadratureConfig& cfg,
                            int n_pairs = 100, double tol = 1e-6);

}  // namespace ontolab
