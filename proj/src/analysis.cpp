#include "ontolab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ontolab/parallel.hpp"
#include "ontolab/rng.hpp"

namespace ontolab {

namespace {
constexpr double PI = 3.14159265358979323846264338327950288;
constexpr double FIDELITY_THRESHOLD = 1e-9;
}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::PsiComplete: return "psi-complete";
        case Verdict::PsiSupplemented: return "psi-supplemented";
        case Verdict::PsiEpistemic: return "psi-epistemic";
    }
    return "unknown";
}

StatePairSampler make_default_sampler() {
    StatePairSampler s;
    // canonical pairs first so witnesses land on them deterministically
    s.pairs.emplace_back(ket0(), ket_plus());
    s.pairs.emplace_back(ket0(), ket1());

    // Fibonacci sphere: N points wound around the golden angle
    constexpr int N = 32;
    const double golden_angle = PI * (3.0 - std::sqrt(5.0));
    std::vector<Ray> dirs;
    dirs.reserve(N);
    for (int i = 0; i < N; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / N;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double ph = golden_angle * i;
        dirs.push_back(bloch_to_ray({r * std::cos(ph), r * std::sin(ph), z}));
    }
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) s.pairs.emplace_back(dirs[i], dirs[j]);
    return s;
}

ClassificationReport classify(const OntologicalModel& model, const StatePairSampler& sampler,
                              const QuadratureConfig& cfg) {
    // a model that fails to reproduce quantum statistics is rejected outright
    BornCheckReport born = verify_born(model, cfg);
    if (!born.pass) {
        std::ostringstream msg;
        msg << "model '" << model.name() << "' does not reproduce quantum statistics: "
            << "deviation " << born.max_deviation;
        throw ModelContractError(born.worst_psi, born.worst_phi, born.max_deviation, msg.str());
    }

    ClassificationReport rep;
    rep.model_name = model.name();

    // structural completeness: a single projective sphere whose preparations
    // are point masses at the state's own vector
    bool complete = model.space() == OnticSpace::projective_sphere();
    if (complete) {
        for (const auto& [psi, phi] : sampler.pairs) {
            for (const Ray* r : {&psi, &phi}) {
                EpistemicState e = model.prepare(*r);
                if (e.form != EpistemicState::Form::PointMass ||
                    distance(e.atom.coords[0], ray_to_bloch(*r)) > 1e-12) {
                    complete = false;
                    break;
                }
            }
            if (!complete) break;
        }
    }

    // fidelity sweep over all distinct pairs, evaluated concurrently; results
    // land in per-pair slots so the scan order below is deterministic
    std::vector<double> fid(sampler.pairs.size(), 0.0);
    std::vector<char> distinct(sampler.pairs.size(), 0);
    parallel_for_index(sampler.pairs.size(), cfg.threads, [&](std::size_t i) {
        const auto& [psi, phi] = sampler.pairs[i];
        if (same_ray(psi, phi)) return;
        distinct[i] = 1;
        fid[i] = classical_fidelity(model.prepare(psi), model.prepare(phi), cfg);
    });

    int tested = 0;
    for (std::size_t i = 0; i < sampler.pairs.size(); ++i) {
        if (!distinct[i]) continue;
        ++tested;
        rep.max_fidelity = std::max(rep.max_fidelity, fid[i]);
        if (fid[i] > FIDELITY_THRESHOLD && !rep.witness) {
            const auto& [psi, phi] = sampler.pairs[i];
            ClassificationWitness w;
            w.psi = psi;
            w.phi = phi;
            w.fidelity = fid[i];
            OverlapResult ov = support_overlap(model.prepare(psi), model.prepare(phi), cfg);
            if (ov.witness) w.overlap_point = ov.witness;
            rep.witness = std::move(w);
        }
    }
    rep.pairs_tested = tested;
    rep.is_psi_ontic = !rep.witness.has_value();

    if (rep.witness)
        rep.verdict = Verdict::PsiEpistemic;
    else if (complete)
        rep.verdict = Verdict::PsiComplete;
    else
        rep.verdict = Verdict::PsiSupplemented;
    return rep;
}

double bm_conditional_indicator(const Ray& phi, const BlochVector& lambda_prime,
                                const QuadratureConfig& cfg) {
    if (std::abs(norm(lambda_prime) - 1.0) > 1e-10)
        throw std::domain_error("bm_conditional_indicator needs a unit lambda'");
    BlochVector ax = ray_to_bloch(phi);
    // integrate the step over the uniform second factor with the first pinned
    OnticSpace sphere = OnticSpace::sphere();
    EpistemicState uniform = EpistemicState::uniform_density(sphere);
    ResponseFn step = ResponseFn::step(ax, dot(ax, lambda_prime));
    return expectation(uniform, step, cfg);
}

ReductionReport bm_to_ks_reduction(const Ray& psi, long long n_samples, std::uint64_t seed,
                                   int bins, int threads) {
    if (n_samples < 10000)
        throw std::domain_error("bm_to_ks_reduction needs at least 10^4 samples");
    if (bins < 2 || bins % 2 != 0)
        throw std::domain_error("bin count must be even and >= 2");

    const BlochVector pv = ray_to_bloch(psi);

    ReductionReport rep;
    rep.bins = bins;
    rep.samples = n_samples;
    rep.counts.assign(static_cast<std::size_t>(bins), 0);

    const long long block = 8192;
    const long long nblocks = (n_samples + block - 1) / block;
    std::vector<std::vector<long long>> block_counts(
        static_cast<std::size_t>(nblocks), std::vector<long long>(static_cast<std::size_t>(bins), 0));
    std::vector<long long> block_discarded(static_cast<std::size_t>(nblocks), 0);

    parallel_for_index(static_cast<std::size_t>(nblocks), threads, [&](std::size_t bi) {
        long long begin = static_cast<long long>(bi) * block;
        long long end = std::min(begin + block, n_samples);
        auto& counts = block_counts[bi];
        for (long long i = begin; i < end; ++i) {
            BlochVector lam = counter_sphere(seed, static_cast<std::uint64_t>(i));
            BlochVector u = pv + lam;
            double n = norm(u);
            if (n < 1e-12) {
                ++block_discarded[bi];
                continue;
            }
            double c = dot(pv, u) / n;
            int k = static_cast<int>((std::clamp(c, -1.0, 1.0) + 1.0) * 0.5 * bins);
            if (k >= bins) k = bins - 1;
            ++counts[static_cast<std::size_t>(k)];
        }
    });
    for (std::size_t bi = 0; bi < block_counts.size(); ++bi) {
        rep.discarded += block_discarded[bi];
        for (int k = 0; k < bins; ++k)
            rep.counts[static_cast<std::size_t>(k)] += block_counts[bi][static_cast<std::size_t>(k)];
    }

    // cone density mass of the band [c1, c2]: integral of (c/pi) over the band's
    // solid angle = c2^2 - c1^2 on the upper hemisphere, zero below
    rep.expected.assign(static_cast<std::size_t>(bins), 0.0);
    for (int k = 0; k < bins; ++k) {
        double c1 = -1.0 + 2.0 * k / bins;
        double c2 = -1.0 + 2.0 * (k + 1) / bins;
        if (c2 <= 0.0) continue;
        double lo = std::max(c1, 0.0);
        rep.expected[static_cast<std::size_t>(k)] = c2 * c2 - lo * lo;
    }

    const double n_eff = static_cast<double>(n_samples - rep.discarded);
    bool ok = true;
    for (int k = 0; k < bins; ++k) {
        double p = rep.expected[static_cast<std::size_t>(k)];
        long long obs = rep.counts[static_cast<std::size_t>(k)];
        double c2 = -1.0 + 2.0 * (k + 1) / bins;
        if (c2 <= 0.0) rep.lower_hemisphere_counts += obs;
        if (p <= 0.0) {
            if (obs != 0) ok = false;  // zero-probability band must stay empty
            continue;
        }
        double se = std::sqrt(p * (1.0 - p) / n_eff);
        double z = std::abs(static_cast<double>(obs) / n_eff - p) / se;
        rep.max_sigma_deviation = std::max(rep.max_sigma_deviation, z);
    }
    rep.pass = ok && rep.lower_hemisphere_counts == 0 && rep.max_sigma_deviation <= 4.0;
    return rep;
}

}  // namespace ontolab
