// Steered remote preparations, the nonlocality certificate, the
// local-causality residual, and the 1927 single-detection argument.
#include "doctest.h"

#include "ontolab/experiments.hpp"
#include "ontolab/rng.hpp"

#include <cmath>
#include <string>

using namespace ontolab;

namespace {
constexpr double kConeOverlap90 = 0.4236065423969898;
const double kSqrt2Minus1 = std::sqrt(2.0) - 1.0;

// A model that forgets the preparation entirely: every state maps to the
// uniform density. Useless as physics (it fails the statistics) but a clean
// probe for the residual diagnostic, which runs on the raw measures.
class AmnesicModel : public OntologicalModel {
  public:
    std::string name() const override { return "amnesic"; }
    OnticSpace space() const override { return OnticSpace::sphere(); }
    EpistemicState prepare(const Ray&) const override {
        return EpistemicState::uniform_density(space());
    }
    IndicatorFunction indicator(const ProjectiveMeasurement& m) const override {
        const BlochVector ax = m.axis();
        return {space(), {ResponseFn::step(ax), ResponseFn::one_minus_step(ax)}};
    }
};
}  // namespace

TEST_CASE("remote preparations steer to the advertised states with half-half weights") {
    for (const auto& name : {"bb", "bm", "ks"}) {
        const auto model = find_model(name);
        const auto remote = build_remote_preparations(*model);
        CHECK(std::abs(remote.prob0 - 0.5) <= 1e-12);
        CHECK(std::abs(remote.prob1 - 0.5) <= 1e-12);
        CHECK(std::abs(remote.prob_plus - 0.5) <= 1e-12);
        CHECK(std::abs(remote.prob_minus - 0.5) <= 1e-12);

        // Each labeled preparation is the model's own epistemic state for
        // that ray.
        const auto cfg = QuadratureConfig::gauss();
        CHECK(std::abs(classical_fidelity(remote.P0, model->prepare(ket0()), cfg) - 1.0) <=
              1e-12);
        CHECK(std::abs(classical_fidelity(remote.P1, model->prepare(ket1()), cfg) - 1.0) <=
              1e-12);
        CHECK(std::abs(classical_fidelity(remote.Pplus, model->prepare(ket_plus()), cfg) - 1.0) <=
              1e-12);
        CHECK(std::abs(classical_fidelity(remote.Pminus, model->prepare(ket_minus()), cfg) -
                       1.0) <= 1e-12);
    }
}

TEST_CASE("the remote mixtures carry two half-weight parts") {
    const auto remote = build_remote_preparations(*find_model("ks"));
    REQUIRE(remote.P01.form == EpistemicState::Form::Mixture);
    REQUIRE(remote.P01.parts.size() == 2);
    CHECK(std::abs(remote.P01.parts[0].first - 0.5) <= 1e-12);
    CHECK(std::abs(remote.P01.parts[1].first - 0.5) <= 1e-12);
    REQUIRE(remote.Ppm.form == EpistemicState::Form::Mixture);
    REQUIRE(remote.Ppm.parts.size() == 2);
}

TEST_CASE("the nonlocality certificate sorts the models as expected") {
    const auto cfg = QuadratureConfig::gauss();

    const auto bb = theorem1_check(*find_model("bb"), cfg);
    CHECK(bb.kind == LocalityVerdict::Kind::NonlocalByTheorem1);
    CHECK(locality_kind_name(bb.kind) == "nonlocal-by-theorem1");
    CHECK(bb.f_plus_0 <= 1e-9);
    CHECK(bb.f_plus_1 <= 1e-9);
    CHECK(bb.f_minus_0 <= 1e-9);
    CHECK(bb.f_minus_1 <= 1e-9);
    CHECK_FALSE(bb.overlap_witness.has_value());

    const auto bm = theorem1_check(*find_model("bm"), cfg);
    CHECK(bm.kind == LocalityVerdict::Kind::NonlocalByTheorem1);
    CHECK(bm.f_plus_0 <= 1e-9);
    CHECK(bm.f_plus_1 <= 1e-9);
    CHECK(bm.f_minus_0 <= 1e-9);
    CHECK(bm.f_minus_1 <= 1e-9);

    const auto ks = theorem1_check(*find_model("ks"), cfg);
    CHECK(ks.kind == LocalityVerdict::Kind::EscapesTheorem1);
    CHECK(locality_kind_name(ks.kind) == "escapes-theorem1");
    // All four steering pairs sit at right angles; the overlap is the frozen
    // regression constant, comfortably above the certificate threshold.
    CHECK(ks.f_plus_0 > 0.1);
    CHECK(std::abs(ks.f_plus_0 - kConeOverlap90) <= 1e-12);
    CHECK(std::abs(ks.f_plus_1 - kConeOverlap90) <= 1e-12);
    CHECK(std::abs(ks.f_minus_0 - kConeOverlap90) <= 1e-12);
    CHECK(std::abs(ks.f_minus_1 - kConeOverlap90) <= 1e-12);
}

TEST_CASE("the escaping model supplies a usable overlap witness") {
    const auto cfg = QuadratureConfig::gauss();
    const auto ks = theorem1_check(*find_model("ks"), cfg);
    REQUIRE(ks.overlap_witness.has_value());
    CHECK(ks.overlap_witness->pair == "plus,0");
    const BlochVector w = ks.overlap_witness->point.coords[0];
    CHECK(find_model("ks")->prepare(ket_plus()).continuous_density(w) > 0.0);
    CHECK(find_model("ks")->prepare(ket0()).continuous_density(w) > 0.0);
}

TEST_CASE("the certificate and the classifier agree on who escapes") {
    const auto cfg = QuadratureConfig::gauss();
    const auto sampler = make_default_sampler();
    for (const auto& name : {"bb", "bm", "ks"}) {
        const auto model = find_model(name);
        const bool epistemic =
            classify(*model, sampler, cfg).verdict == Verdict::PsiEpistemic;
        const bool escapes =
            theorem1_check(*model, cfg).kind == LocalityVerdict::Kind::EscapesTheorem1;
        CHECK(epistemic == escapes);
    }
}

TEST_CASE("a model failing the statistics cannot enter the certificate") {
    class Flat : public OntologicalModel {
      public:
        std::string name() const override { return "flat"; }
        OnticSpace space() const override { return OnticSpace::sphere(); }
        EpistemicState prepare(const Ray& psi) const override {
            return EpistemicState::cone_density(space(), ray_to_bloch(psi));
        }
        IndicatorFunction indicator(const ProjectiveMeasurement&) const override {
            return {space(), {ResponseFn::constant(0.5), ResponseFn::constant(0.5)}};
        }
    };
    const auto cfg = QuadratureConfig::gauss();
    const Flat flat;
    CHECK_THROWS_AS(theorem1_check(flat, cfg), ModelContractError);
}

TEST_CASE("local-causality residuals: disjoint models saturate, overlap shrinks it") {
    const auto cfg = QuadratureConfig::gauss();
    CHECK(std::abs(local_causality_residual(*find_model("bb"), cfg) - 1.0) <= 1e-12);
    CHECK(std::abs(local_causality_residual(*find_model("bm"), cfg) - 1.0) <= 1e-12);
    const double ks = local_causality_residual(*find_model("ks"), cfg);
    CHECK(std::abs(ks - kSqrt2Minus1) <= 1e-4);
    // A preparation-independent stub makes the two mixtures literally equal.
    const AmnesicModel amnesic;
    CHECK(local_causality_residual(amnesic, cfg) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("the 1927 argument convicts the complete model") {
    const auto cfg = QuadratureConfig::gauss();
    const auto report = einstein_1927_check(*find_model("bb"), cfg);
    // Locality + completeness factorize the joint count: (1/2)(1/2) = 1/4.
    CHECK(report.p_joint_factorized == 0.25);
    CHECK(report.p_joint_quantum == 0.0);
    CHECK(report.contradiction);
}

TEST_CASE("the 1927 argument with the quantum at one site raises no contradiction") {
    const auto cfg = QuadratureConfig::gauss();
    const auto report = einstein_1927_check(*find_model("bb"), cfg, ket0());
    CHECK(report.p_joint_factorized == 0.0);
    CHECK(report.p_joint_quantum == 0.0);
    CHECK_FALSE(report.contradiction);
}

TEST_CASE("the 1927 argument refuses models that are not psi-complete") {
    const auto cfg = QuadratureConfig::gauss();
    for (const auto& name : {"bm", "ks"}) {
        CHECK_THROWS_AS(einstein_1927_check(*find_model(name), cfg), HypothesisRefusal);
        try {
            einstein_1927_check(*find_model(name), cfg);
        } catch (const HypothesisRefusal& e) {
            const std::string msg = e.what();
            CHECK(msg.find("not psi-complete") != std::string::npos);
            CHECK(msg.find(name) != std::string::npos);
        }
    }
}

TEST_CASE("expectations are linear over the steered mixtures for every model") {
    const auto cfg = QuadratureConfig::gauss();
    for (const auto& name : {"bb", "bm", "ks"}) {
        const auto model = find_model(name);
        const auto remote = build_remote_preparations(*model);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const BlochVector a = counter_sphere(40, i, 0);
            const double b = counter_u01(40, i, 2);
            const ResponseFn f = (i % 2 == 0) ? ResponseFn::affine(0.5 * a, 0.5 * b)
                                              : ResponseFn::step(a, b - 0.5);
            const double lhs01 = expectation(remote.P01, f, cfg);
            const double rhs01 = remote.prob0 * expectation(remote.P0, f, cfg) +
                                 remote.prob1 * expectation(remote.P1, f, cfg);
            const double lhspm = expectation(remote.Ppm, f, cfg);
            const double rhspm = remote.prob_plus * expectation(remote.Pplus, f, cfg) +
                                 remote.prob_minus * expectation(remote.Pminus, f, cfg);
            worst = std::max({worst, std::abs(lhs01 - rhs01), std::abs(lhspm - rhspm)});
        }
        CHECK(worst <= 1e-9);
    }
}
