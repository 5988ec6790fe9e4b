// Acceptance harness: runs the eight headline checks end to end and prints
// one PASS/FAIL line each. Exit code is the number of failures.
//
// Usage: acceptance [path-to-cli-binary]
// The determinism check shells out to the CLI; without a path it is skipped
// (reported as FAIL so a misconfigured harness cannot pass silently).

#include "ontolab/analysis.hpp"
#include "ontolab/experiments.hpp"
#include "ontolab/models.hpp"
#include "ontolab/rng.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ontolab;

namespace {

int failures = 0;

void result(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- criterion 1: Born-rule reproduction -----------------------------------
void criterion_born() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = QuadratureConfig::gauss(128, 256);
    double worst = 0.0;
    bool all_pass = true;
    for (const auto& name : {"bb", "bm", "ks"}) {
        const auto report = verify_born(*find_model(name), cfg, 100, 1e-6);
        worst = std::max(worst, report.max_deviation);
        all_pass = all_pass && report.pass;
    }
    const double dt = seconds_since(t0);
    std::ostringstream detail;
    detail << "max deviation " << worst << " over 3x100 pairs in " << dt << "s";
    result(1, "Born-rule reproduction within 1e-6 in under 10s", all_pass && worst <= 1e-6 && dt < 10.0,
           detail.str());
}

// --- criterion 2: classification verdicts + no complete-and-epistemic ------
void criterion_classification() {
    const auto cfg = QuadratureConfig::gauss();
    const auto sampler = make_default_sampler();

    const bool bb_ok =
        classify(*find_model("bb"), sampler, cfg).verdict == Verdict::PsiComplete;
    const bool bm_ok =
        classify(*find_model("bm"), sampler, cfg).verdict == Verdict::PsiSupplemented;
    const bool ks_ok =
        classify(*find_model("ks"), sampler, cfg).verdict == Verdict::PsiEpistemic;

    // Property over randomized valid stubs: rotate each registry model by a
    // seeded random angle (statistics invariant) and demand that no report
    // ever claims complete and epistemic at once.
    struct Rotated : OntologicalModel {
        ModelPtr base;
        BlochVector axis;
        double angle;
        Rotated(ModelPtr b, const BlochVector& ax, double an) : base(std::move(b)), axis(ax), angle(an) {}
        std::string name() const override { return base->name() + "-rot"; }
        OnticSpace space() const override { return base->space(); }
        Ray rot(const Ray& r) const {
            const BlochVector v = ray_to_bloch(r);
            const double c = std::cos(angle), s = std::sin(angle);
            return bloch_to_ray(c * v + s * cross(axis, v) + ((1.0 - c) * dot(axis, v)) * axis);
        }
        EpistemicState prepare(const Ray& psi) const override { return base->prepare(rot(psi)); }
        IndicatorFunction indicator(const ProjectiveMeasurement& m) const override {
            return base->indicator(ProjectiveMeasurement(rot(m.outcome0), rot(m.outcome1)));
        }
    };

    bool property = true;
    int stubs = 0;
    for (const auto& name : {"bb", "bm", "ks"}) {
        for (int i = 0; i < 4; ++i) {
            const Rotated stub(find_model(name), counter_sphere(0xACC, i, 0),
                               6.283185307179586 * counter_u01(0xACC, i, 2));
            const auto report = classify(stub, sampler, cfg);
            ++stubs;
            const bool complete = report.verdict == Verdict::PsiComplete;
            const bool epistemic = report.verdict == Verdict::PsiEpistemic;
            if (complete && epistemic) property = false;
            if (complete && report.max_fidelity > 1e-9) property = false;
            if (epistemic && !(report.max_fidelity > 1e-9)) property = false;
        }
    }

    std::ostringstream detail;
    detail << "bb/bm/ks verdicts " << (bb_ok && bm_ok && ks_ok ? "correct" : "WRONG") << "; "
           << stubs << " rotated stubs consistent: " << (property ? "yes" : "no");
    result(2, "classification verdicts and exclusivity property", bb_ok && bm_ok && ks_ok && property,
           detail.str());
}

// --- criterion 3: marginalized two-sphere response -------------------------
void criterion_marginal() {
    const auto cfg = QuadratureConfig::gauss();
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const Ray phi = bloch_to_ray(counter_sphere(64, i, 0));
        const BlochVector lp = counter_sphere(64, i, 2);
        const double got = bm_conditional_indicator(phi, lp, cfg);
        worst = std::max(worst, std::abs(got - 0.5 * (1.0 + dot(ray_to_bloch(phi), lp))));
    }
    std::ostringstream detail;
    detail << "max |marginal - (1+phi.lambda')/2| = " << worst << " over 64 pairs";
    result(3, "marginalized response equals the affine weight within 1e-6", worst <= 1e-6,
           detail.str());
}

// --- criterion 4: directional reduction ------------------------------------
void criterion_reduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = bm_to_ks_reduction(ket0(), 1000000, 0, 64);
    const double dt = seconds_since(t0);
    std::ostringstream detail;
    detail << "max band deviation " << report.max_sigma_deviation << " SE, "
           << report.lower_hemisphere_counts << " lower-hemisphere counts, " << dt << "s";
    result(4, "10^6-sample reduction within 4 SE per band, empty lower hemisphere, under 30s",
           report.pass && report.max_sigma_deviation <= 4.0 &&
               report.lower_hemisphere_counts == 0 && dt < 30.0,
           detail.str());
}

// --- criterion 5: the nonlocality certificate ------------------------------
void criterion_theorem1() {
    const auto cfg = QuadratureConfig::gauss();
    const auto bb = theorem1_check(*find_model("bb"), cfg);
    const auto bm = theorem1_check(*find_model("bm"), cfg);
    const auto ks = theorem1_check(*find_model("ks"), cfg);

    const auto all_zero = [](const LocalityVerdict& v) {
        return v.f_plus_0 <= 1e-9 && v.f_plus_1 <= 1e-9 && v.f_minus_0 <= 1e-9 &&
               v.f_minus_1 <= 1e-9;
    };
    const bool bb_ok = bb.kind == LocalityVerdict::Kind::NonlocalByTheorem1 && all_zero(bb);
    const bool bm_ok = bm.kind == LocalityVerdict::Kind::NonlocalByTheorem1 && all_zero(bm);
    // Regression constant fixed from the quadrature oracle ahead of the build.
    const double frozen = 0.4236065423969898;
    const bool ks_ok = ks.kind == LocalityVerdict::Kind::EscapesTheorem1 && ks.f_plus_0 > 0.1 &&
                       std::abs(ks.f_plus_0 - frozen) <= 1e-9;

    std::ostringstream detail;
    detail << "bb/bm nonlocal with vanishing overlaps: " << (bb_ok && bm_ok ? "yes" : "no")
           << "; ks F(P+,P0) = " << ks.f_plus_0;
    result(5, "steering certificate: bb/bm nonlocal, ks escapes with the frozen overlap",
           bb_ok && bm_ok && ks_ok, detail.str());
}

// --- criterion 6: the 1927 argument ----------------------------------------
void criterion_einstein(const std::string& cli) {
    const auto cfg = QuadratureConfig::gauss();
    const auto report = einstein_1927_check(*find_model("bb"), cfg);
    const bool bb_ok = report.p_joint_factorized == 0.25 && report.p_joint_quantum == 0.0 &&
                       report.contradiction;

    bool bm_refused = false;
    try {
        einstein_1927_check(*find_model("bm"), cfg);
    } catch (const HypothesisRefusal&) {
        bm_refused = true;
    }

    // The refusal must surface as exit code 3 on the command line.
    bool exit3 = false;
    if (!cli.empty()) {
        const std::string cmd = cli + " experiment einstein1927 --model bm > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        exit3 = WIFEXITED(rc) && WEXITSTATUS(rc) == 3;
    }

    std::ostringstream detail;
    detail << "factorized " << report.p_joint_factorized << " vs quantum "
           << report.p_joint_quantum << "; bm refusal " << (bm_refused ? "raised" : "MISSING")
           << ", exit code 3 " << (exit3 ? "confirmed" : "MISSING");
    result(6, "1927 factorization 0.25 vs 0 with contradiction; bm refused with exit 3",
           bb_ok && bm_refused && exit3, detail.str());
}

// --- criterion 7: mixture linearity ----------------------------------------
void criterion_mixture() {
    const auto cfg = QuadratureConfig::gauss();
    double worst = 0.0;
    for (const auto& name : {"bb", "bm", "ks"}) {
        const auto model = find_model(name);
        const auto remote = build_remote_preparations(*model);
        for (int i = 0; i < 20; ++i) {
            const BlochVector a = counter_sphere(70, i, 0);
            const double b = counter_u01(70, i, 2);
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
    }
    std::ostringstream detail;
    detail << "max |E[mixture] - sum w E[part]| = " << worst
           << " over 20 functions x 2 mixtures x 3 models";
    result(7, "expectation linearity over the steered mixtures within 1e-9", worst <= 1e-9,
           detail.str());
}

// --- criterion 8: CLI determinism ------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism(const std::string& cli) {
    if (cli.empty()) {
        result(8, "CLI byte-determinism", false, "no CLI path supplied to the harness");
        return;
    }
    const std::string dir = "acceptance_tmp";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) {
        result(8, "CLI byte-determinism", false, "could not create scratch directory");
        return;
    }

    const std::vector<std::string> invocations = {
        "verify --model ks --format json",
        "classify --model ks",
        "classify --model bm --format csv",
        "experiment theorem1 --model ks --format json",
        "experiment residual --model ks",
        "verify --model bm --mc 200000 --seed 7 --format json",
        "plot --model ks --state x+ --grid 32x64",
        "plot --model bm --state z+ --grid 16x32",
    };

    bool all_ok = true;
    std::string first_diff;
    for (std::size_t i = 0; i < invocations.size(); ++i) {
        std::vector<std::string> outputs;
        // Repeat runs and divergent thread counts must agree byte for byte.
        for (const std::string threads : {"1", "1", "4", "3"}) {
            const std::string path =
                dir + "/out_" + std::to_string(i) + "_" + std::to_string(outputs.size());
            const std::string cmd = cli + " " + invocations[i] + " --threads " + threads +
                                    " --out " + path + " 2> /dev/null";
            const int rc = std::system(cmd.c_str());
            if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
                all_ok = false;
                if (first_diff.empty())
                    first_diff = "nonzero exit for '" + invocations[i] + "'";
            }
            outputs.push_back(slurp(path));
        }
        for (std::size_t k = 1; k < outputs.size(); ++k) {
            if (outputs[k] != outputs[0] || outputs[0].empty()) {
                all_ok = false;
                if (first_diff.empty()) first_diff = "byte mismatch in '" + invocations[i] + "'";
            }
        }
    }
    if (std::system(("rm -rf " + dir).c_str()) != 0) {
        // Leftover scratch files are harmless; determinism was already judged.
    }
    result(8, "CLI byte-determinism across repeats and thread counts", all_ok,
           all_ok ? "8 invocations x 4 runs identical" : first_diff);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    criterion_born();
    criterion_classification();
    criterion_marginal();
    criterion_reduction();
    criterion_theorem1();
    criterion_einstein(cli);
    criterion_mixture();
    criterion_determinism(cli);

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
