// Executable nonlocality/incompleteness arguments built on the steering
// oracle: remote preparations of {|0>,|1>} and {|+>,|->} from the maximally
// entangled state, the disjointness certificate for the nonlocality theorem,
// a local-causality residual diagnostic, and the 1927 single-detection
// argument that needs the psi-complete hypothesis.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "ontolab/analysis.hpp"
#include "ontolab/bloch.hpp"
#include "ontolab/measures.hpp"
#include "ontolab/models.hpp"

namespace ontolab {

// Raised when an argument's hypothesis fails for the given model; the tool
// refuses rather than silently passing, because which hypotheses an argument
// needs is the entire point.
struct HypothesisRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RemotePreparations {
    EpistemicState P0, P1, Pplus, Pminus;  // preparations of |0>,|1>,|+>,|->
    EpistemicState P01, Ppm;               // the two half-half mixtures
    double prob0 = 0.0, prob1 = 0.0, prob_plus = 0.0, prob_minus = 0.0;  // steering probabilities
};

// Steers B's ensembles from the maximally entangled state by measuring A in
// the {|0>,|1>} and {|+>,|->} bases, maps the steered states through the
// model, and mixes them with the steering probabilities (1/2 each, from the
// projection oracle, not hardcoded).
RemotePreparations build_remote_preparations(const OntologicalModel& model);

struct LocalityVerdict {
    enum class Kind { NonlocalByTheorem1, EscapesTheorem1 };
    Kind kind = Kind::NonlocalByTheorem1;
    // fidelities F(P+,P0), F(P+,P1), F(P-,P0), F(P-,P1)
    double f_plus_0 = 0.0, f_plus_1 = 0.0, f_minus_0 = 0.0, f_minus_1 = 0.0;
    struct Witness {
        std::string pair;  // e.g. "plus,0"
        OnticPoint point;
    };
    std::optional<Witness> overlap_witness;
};
std::string locality_kind_name(LocalityVerdict::Kind k);

// Certificate checker: if all four steering-pair fidelities vanish (<= 1e-9),
// the model keeps the two remote mixtures disjoint componentwise, and local
// causality (which would equate them) cannot hold: NonlocalByTheorem1.
// Any overlap escapes the argument and is returned with a witness.
LocalityVerdict theorem1_check(const OntologicalModel& model, const QuadratureConfig& cfg);

// Total variation distance between the two unconditioned remote mixtures;
// zero means the model assigns one epistemic state no matter which
// measurement A chose.
double local_causality_residual(const OntologicalModel& model, const QuadratureConfig& cfg);

struct Diffraction1927Report {
    double p_joint_factorized = 0.0;
    double p_joint_quantum = 0.0;
    bool contradiction = false;
};

// Single-quantum two-detector argument: detection sites A/B are encoded as
// the qubit basis states, the incident state is psi (default (|A>+|B>)/sqrt2).
// Locality plus psi-completeness factorizes the joint detection probability
// into p(A)p(B), while quantum theory forbids a double detection outright.
// Models that are not psi-complete are refused: with supplementary ontic
// variables there is no reason to factorize through psi alone.
Diffraction1927Report einstein_1927_check(const OntologicalModel& model,
                                          const QuadratureConfig& cfg,
                                          std::optional<Ray> psi = std::nullopt);

}  // namespace ontolab
