// Classification of ontological models (psi-complete / psi-supplemented /
// psi-epistemic) over a deterministic family of state pairs, plus the two
// connection results linking the concrete models: the marginalized bm
// response reproduces the bb response, and the bm ontic space reduces to the
// ks epistemic state under the directional re-parameterization.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ontolab/bloch.hpp"
#include "ontolab/measures.hpp"
#include "ontolab/models.hpp"

namespace ontolab {

enum class Verdict { PsiComplete, PsiSupplemented, PsiEpistemic };
std::string verdict_name(Verdict v);  // "psi-complete" | "psi-supplemented" | "psi-epistemic"

struct ClassificationWitness {
    Ray psi, phi;
    double fidelity = 0.0;
    std::optional<OnticPoint> overlap_point;
};

struct ClassificationReport {
    std::string model_name;
    Verdict verdict = Verdict::PsiSupplemented;
    bool is_psi_ontic = false;
    int pairs_tested = 0;
    double max_fidelity = 0.0;
    std::optional<ClassificationWitness> witness;  // present for psi-epistemic
};

// Deterministic state-pair family: the canonical pairs (|0>,|+>) and
// (|0>,|1>) first, then a 32-direction Fibonacci sphere set paired
// exhaustively (unordered, distinct).
struct StatePairSampler {
    std::vector<std::pair<Ray, Ray>> pairs;
};
StatePairSampler make_default_sampler();

// Classifies a model over the sampler's pairs. The model's statistics are
// verified against the Born rule first; a failing model is rejected with
// ModelContractError. Verdict rules:
//   psi-complete:  single projective-sphere space and every preparation is a
//                  point mass at the state's own Bloch vector
//   psi-epistemic: some distinct pair has classical fidelity > 1e-9
//                  (witnessed in the report)
//   psi-supplemented: everything else
ClassificationReport classify(const OntologicalModel& model, const StatePairSampler& sampler,
                              const QuadratureConfig& cfg);

// lambda''-marginalized bm response for measurement direction phi given the
// first coordinate pinned at lambda'; equals (1 + phi . lambda')/2.
double bm_conditional_indicator(const Ray& phi, const BlochVector& lambda_prime,
                                const QuadratureConfig& cfg);

// Directional reduction: sample lambda'' uniformly, form the normalized
// direction u = (psi + lambda'')/|psi + lambda''|, and compare its
// distribution against the ks cone density (1/pi) max(psi . u, 0) over
// equal-area bands in cos(polar angle).
struct ReductionReport {
    int bins = 0;
    long long samples = 0;
    long long discarded = 0;             // |psi + lambda''| below threshold
    std::vector<long long> counts;       // per band, ascending cos(alpha)
    std::vector<double> expected;        // per-band probabilities from the cone density
    double max_sigma_deviation = 0.0;    // worst |observed - expected| in standard errors
    long long lower_hemisphere_counts = 0;
    bool pass = false;                   // max deviation <= 4 SE and empty lower hemisphere
};
ReductionReport bm_to_ks_reduction(const Ray& psi, long long n_samples, std::uint64_t seed,
                                   int bins = 64, int threads = 0);

}  // namespace ontolab
