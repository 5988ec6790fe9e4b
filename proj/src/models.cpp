#include "ontolab/models.hpp"

#include <cmath>

#include "ontolab/parallel.hpp"
#include "ontolab/rng.hpp"

namespace ontolab {

namespace {

class BBModel final : public OntologicalModel {
  public:
    std::string name() const override { return "bb"; }
    OnticSpace space() const override { return OnticSpace::projective_sphere(); }
    EpistemicState prepare(const Ray& psi) const override {
        return EpistemicState::point_mass(space(), OnticPoint(ray_to_bloch(psi)));
    }
    IndicatorFunction indicator(const ProjectiveMeasurement& m) const override {
        BlochVector ax = m.axis();
        // outcome probabilities (1 +- ax . lambda)/2
        return {space(), {ResponseFn::affine(0.5 * ax, 0.5), ResponseFn::affine(-0.5 * ax, 0.5)}};
    }
};

class BMModel final : public OntologicalModel {
  public:
    std::string name() const override { return "bm"; }
    OnticSpace space() const override { return OnticSpace::product_of_spheres(2); }
    EpistemicState prepare(const Ray& psi) const override {
        OnticSpace sphere = OnticSpace::sphere();
        return EpistemicState::product(
            {EpistemicState::point_mass(sphere, OnticPoint(ray_to_bloch(psi))),
             EpistemicState::uniform_density(sphere)});
    }
    IndicatorFunction indicator(const ProjectiveMeasurement& m) const override {
        BlochVector ax = m.axis();
        // step in ax . (lambda' + lambda''); complement defined as 1 - step so
        // the two outcomes sum to 1 even on the measure-zero tie
        return {space(), {ResponseFn::step(ax), ResponseFn::one_minus_step(ax)}};
    }
};

class KSModel final : public OntologicalModel {
  public:
    std::string name() const override { return "ks"; }
    OnticSpace space() const override { return OnticSpace::sphere(); }
    EpistemicState prepare(const Ray& psi) const override {
        return EpistemicState::cone_density(space(), ray_to_bloch(psi));
    }
    IndicatorFunction indicator(const ProjectiveMeasurement& m) const override {
        BlochVector ax = m.axis();
        return {space(), {ResponseFn::step(ax), ResponseFn::one_minus_step(ax)}};
    }
};

}  // namespace

ModelPtr bb_model() { return std::make_shared<BBModel>(); }
ModelPtr bm_model() { return std::make_shared<BMModel>(); }
ModelPtr ks_model() { return std::make_shared<KSModel>(); }

const std::map<std::string, std::function<ModelPtr()>>& model_registry() {
    static const std::map<std::string, std::function<ModelPtr()>> registry{
        {"bb", bb_model},
        {"bm", bm_model},
        {"ks", ks_model},
    };
    return registry;
}

ModelPtr find_model(const std::string& name) {
    const auto& reg = model_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw std::out_of_range("unknown model: " + name);
    return it->second();
}

BornCheckReport verify_born(const OntologicalModel& model, const QuadratureConfig& cfg,
                            int n_pairs, double tol) {
    // Fixed stream so the pair family is the same in every run and build.
    constexpr std::uint64_t PAIR_SEED = 0xb0817a1eULL;

    struct PairResult {
        double deviation = 0.0;
        double sigma_excess = 0.0;
        Ray psi, phi;
    };
    std::vector<PairResult> results(static_cast<std::size_t>(n_pairs));

    parallel_for_index(static_cast<std::size_t>(n_pairs), cfg.threads, [&](std::size_t i) {
        Ray psi = bloch_to_ray(counter_sphere(PAIR_SEED, i, 0));
        Ray phi = bloch_to_ray(counter_sphere(PAIR_SEED, i, 2));
        ProjectiveMeasurement m(phi, bloch_to_ray(-ray_to_bloch(phi)));
        EpistemicState prep = model.prepare(psi);
        IndicatorFunction ind = model.indicator(m);
        double target = born_probability(psi, phi);

        PairResult r;
        r.psi = psi;
        r.phi = phi;
        if (cfg.scheme == QuadratureConfig::Scheme::MonteCarlo) {
            // decorrelate the sample streams of different pairs
            QuadratureConfig pair_cfg = cfg;
            pair_cfg.seed = counter_hash(cfg.seed, 0xb0817a1e, i);
            pair_cfg.threads = 1;  // already parallel over pairs
            McEstimate est = mc_expectation(prep, ind.outcomes[0], pair_cfg);
            r.deviation = std::abs(est.value - target);
            // exact estimates (pure atoms) have zero standard error; allow a
            // rounding-level deviation there
            r.sigma_excess = est.std_error > 0.0 ? r.deviation / est.std_error
                                                 : (r.deviation > 1e-12 ? 1e300 : 0.0);
        } else {
            double got = expectation(prep, ind.outcomes[0], cfg);
            r.deviation = std::abs(got - target);
        }
        results[i] = r;
    });

    BornCheckReport rep;
    rep.pairs = n_pairs;
    for (const auto& r : results) {
        if (r.deviation >= rep.max_deviation) {
            rep.max_deviation = r.deviation;
            rep.worst_psi = r.psi;
            rep.worst_phi = r.phi;
        }
        rep.max_sigma_excess = std::max(rep.max_sigma_excess, r.sigma_excess);
    }
    rep.pass = (cfg.scheme == QuadratureConfig::Scheme::MonteCarlo)
                   ? rep.max_sigma_excess <= 3.0
                   : rep.max_deviation <= tol;
    return rep;
}

}  // namespace ontolab
