#include "ontolab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ontolab/parallel.hpp"
#include "ontolab/rng.hpp"

namespace ontolab {

namespace {
constexpr double PI = 3.14159265358979323846264338327950288;
constexpr double ATOM_TOL = 1e-12;
}  // namespace

// ---------------------------------------------------------------------------
// ResponseFn
// ---------------------------------------------------------------------------
ResponseFn ResponseFn::affine(const BlochVector& a, double b) {
    ResponseFn f;
    f.kind = Kind::AffineInSum;
    f.a = a;
    f.b = b;
    return f;
}
ResponseFn ResponseFn::step(const BlochVector& a, double b) {
    ResponseFn f;
    f.kind = Kind::StepOfSum;
    f.a = a;
    f.b = b;
    return f;
}
ResponseFn ResponseFn::one_minus_step(const BlochVector& a, double b) {
    ResponseFn f;
    f.kind = Kind::OneMinusStepOfSum;
    f.a = a;
    f.b = b;
    return f;
}
ResponseFn ResponseFn::opaque(std::function<double(const OnticPoint&)> f) {
    ResponseFn r;
    r.kind = Kind::Opaque;
    r.fn = std::move(f);
    return r;
}

double ResponseFn::operator()(const OnticPoint& p) const {
    if (kind == Kind::Opaque) return fn(p);
    double s = b;
    for (const auto& c : p.coords) s += dot(a, c);
    switch (kind) {
        case Kind::AffineInSum: return s;
        case Kind::StepOfSum: return s > 0.0 ? 1.0 : 0.0;
        case Kind::OneMinusStepOfSum: return s > 0.0 ? 0.0 : 1.0;
        default: return 0.0;
    }
}

ResponseFn ResponseFn::reduced_by(const BlochVector& v) const {
    if (!structured()) throw std::logic_error("cannot reduce an opaque response");
    ResponseFn f = *this;
    f.b += dot(a, v);
    return f;
}

// ---------------------------------------------------------------------------
// FactorDensity
// ---------------------------------------------------------------------------
double FactorDensity::value(const BlochVector& lambda) const {
    switch (kind) {
        case Kind::Uniform: return 1.0 / (4.0 * PI);
        case Kind::Cone: {
            double t = dot(axis, lambda);
            return t > 0.0 ? t / PI : 0.0;
        }
        case Kind::Opaque: return (*fn)(lambda);
    }
    return 0.0;
}

bool FactorDensity::same_density(const FactorDensity& other, double tol) const {
    if (kind != other.kind) return false;
    switch (kind) {
        case Kind::Uniform: return true;
        case Kind::Cone: return distance(axis, other.axis) <= tol;
        case Kind::Opaque: return fn.get() == other.fn.get();  // identity, not extensional
    }
    return false;
}

// ---------------------------------------------------------------------------
// EpistemicState construction
// ---------------------------------------------------------------------------
EpistemicState EpistemicState::point_mass(const OnticSpace& s, const OnticPoint& p) {
    if (static_cast<int>(p.coords.size()) != s.factors)
        throw std::domain_error("point has wrong number of factors for the space");
    EpistemicState e;
    e.form = Form::PointMass;
    e.space = s;
    e.atom = p;
    return e;
}

EpistemicState EpistemicState::uniform_density(const OnticSpace& s) {
    if (!s.single_sphere())
        throw std::domain_error("density states live on a single sphere factor");
    EpistemicState e;
    e.form = Form::Density;
    e.space = s;
    e.density = FactorDensity{FactorDensity::Kind::Uniform, {0, 0, 1},
                              FactorDensity::Support::FullSphere, nullptr};
    return e;
}

EpistemicState EpistemicState::cone_density(const OnticSpace& s, const BlochVector& axis) {
    if (!s.single_sphere())
        throw std::domain_error("density states live on a single sphere factor");
    EpistemicState e;
    e.form = Form::Density;
    e.space = s;
    e.density = FactorDensity{FactorDensity::Kind::Cone, normalized(axis),
                              FactorDensity::Support::Hemisphere, nullptr};
    return e;
}

EpistemicState EpistemicState::opaque_density(const OnticSpace& s,
                                              std::function<double(const BlochVector&)> f,
                                              FactorDensity::Support support,
                                              const BlochVector& frame_axis) {
    if (!s.single_sphere())
        throw std::domain_error("density states live on a single sphere factor");
    EpistemicState e;
    e.form = Form::Density;
    e.space = s;
    e.density = FactorDensity{
        FactorDensity::Kind::Opaque, normalized(frame_axis), support,
        std::make_shared<const std::function<double(const BlochVector&)>>(std::move(f))};
    return e;
}

EpistemicState EpistemicState::product(const std::vector<EpistemicState>& factor_states) {
    if (factor_states.empty()) throw std::domain_error("product needs at least one factor");
    for (const auto& f : factor_states)
        if (!f.space.single_sphere())
            throw std::domain_error("product factors must each live on a single sphere");
    EpistemicState e;
    e.form = Form::Product;
    e.space = OnticSpace::product_of_spheres(static_cast<int>(factor_states.size()));
    e.factors = factor_states;
    return e;
}

EpistemicState mix(const std::vector<std::pair<double, EpistemicState>>& components) {
    if (components.empty()) throw std::domain_error("mixture needs at least one component");
    double total = 0.0;
    for (const auto& [w, st] : components) {
        if (w < 0.0) throw std::domain_error("mixture weights must be nonnegative");
        if (!(st.space == components.front().second.space))
            throw std::domain_error("mixture components must share an ontic space");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::domain_error("mixture weights must sum to 1");
    if (components.size() == 1) return components.front().second;  // identity mixture
    EpistemicState e;
    e.form = EpistemicState::Form::Mixture;
    e.space = components.front().second.space;
    e.parts = components;
    return e;
}

double EpistemicState::continuous_density(const BlochVector& lambda) const {
    if (!space.single_sphere())
        throw std::domain_error("pointwise density is defined on single-sphere spaces");
    switch (form) {
        case Form::PointMass: return 0.0;
        case Form::Density: return density.value(lambda);
        case Form::Mixture: {
            double v = 0.0;
            for (const auto& [w, st] : parts) v += w * st.continuous_density(lambda);
            return v;
        }
        default: return 0.0;
    }
}

// ---------------------------------------------------------------------------
// Flattening
// ---------------------------------------------------------------------------
namespace {

bool same_part(const FactorPart& a, const FactorPart& b) {
    if (a.is_atom != b.is_atom) return false;
    if (a.is_atom) return distance(a.atom, b.atom) <= ATOM_TOL;
    return a.dens.same_density(b.dens);
}

bool same_signature(const MeasureComponent& a, const MeasureComponent& b) {
    if (a.parts.size() != b.parts.size()) return false;
    for (std::size_t i = 0; i < a.parts.size(); ++i)
        if (!same_part(a.parts[i], b.parts[i])) return false;
    return true;
}

void flatten_into(const EpistemicState& e, double weight, std::vector<MeasureComponent>& out) {
    switch (e.form) {
        case EpistemicState::Form::PointMass: {
            MeasureComponent c;
            c.weight = weight;
            for (const auto& v : e.atom.coords) c.parts.push_back({true, v, {}});
            out.push_back(std::move(c));
            return;
        }
        case EpistemicState::Form::Density: {
            MeasureComponent c;
            c.weight = weight;
            c.parts.push_back({false, {}, e.density});
            out.push_back(std::move(c));
            return;
        }
        case EpistemicState::Form::Mixture: {
            for (const auto& [w, st] : e.parts) flatten_into(st, weight * w, out);
            return;
        }
        case EpistemicState::Form::Product: {
            // cartesian product of the factors' own components
            std::vector<MeasureComponent> acc{{weight, {}}};
            for (const auto& f : e.factors) {
                std::vector<MeasureComponent> fcomps;
                flatten_into(f, 1.0, fcomps);
                std::vector<MeasureComponent> next;
                next.reserve(acc.size() * fcomps.size());
                for (const auto& base : acc) {
                    for (const auto& fc : fcomps) {
                        MeasureComponent c = base;
                        c.weight *= fc.weight;
                        c.parts.insert(c.parts.end(), fc.parts.begin(), fc.parts.end());
                        next.push_back(std::move(c));
                    }
                }
                acc = std::move(next);
            }
            for (auto& c : acc) out.push_back(std::move(c));
            return;
        }
    }
}

}  // namespace

std::vector<MeasureComponent> flatten(const EpistemicState& e) {
    std::vector<MeasureComponent> raw;
    flatten_into(e, 1.0, raw);
    // merge duplicates, drop zero-weight components
    std::vector<MeasureComponent> merged;
    for (auto& c : raw) {
        if (c.weight <= 0.0) continue;
        bool found = false;
        for (auto& m : merged) {
            if (same_signature(m, c)) {
                m.weight += c.weight;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(std::move(c));
    }
    return merged;
}

// ---------------------------------------------------------------------------
// expectation
// ---------------------------------------------------------------------------
namespace {

double evaluate_structured_closed(const ResponseFn& g) {
    // structured response with every coordinate pinned: s = g.b
    OnticPoint empty;
    return g(empty);
}

quad::Profile profile_of(const FactorDensity& d) {
    return d.kind == FactorDensity::Kind::Uniform ? quad::Profile::Uniform : quad::Profile::Cone;
}

// Plain-grid integration of an arbitrary response over one continuous factor,
// with the other factors pinned to their atoms.
double component_grid_opaque(const MeasureComponent& comp, std::size_t cont_idx,
                             const ResponseFn& f, const QuadratureConfig& cfg) {
    const FactorDensity& d = comp.parts[cont_idx].dens;
    double lo = 0.0, hi = 1.0;
    if (d.kind == FactorDensity::Kind::Uniform ||
        (d.kind == FactorDensity::Kind::Opaque && d.support == FactorDensity::Support::FullSphere)) {
        lo = -1.0;
        hi = 1.0;
    } else {
        lo = 0.0;
        hi = 1.0;  // hemisphere about the axis
    }
    quad::SphereGrid grid = quad::make_sphere_grid(d.axis, lo, hi, cfg.n_polar, cfg.n_azimuthal);

    OnticPoint pt;
    pt.coords.resize(comp.parts.size());
    for (std::size_t k = 0; k < comp.parts.size(); ++k)
        if (comp.parts[k].is_atom) pt.coords[k] = comp.parts[k].atom;

    double total = 0.0;
    for (std::size_t i = 0; i < grid.node.size(); ++i) {
        double dv = d.value(grid.node[i]);
        if (dv == 0.0) continue;
        pt.coords[cont_idx] = grid.node[i];
        total += grid.weight[i] * dv * f(pt);
    }
    return total;
}

double component_expectation_gauss(const MeasureComponent& comp, const ResponseFn& f,
                                   const QuadratureConfig& cfg) {
    std::vector<std::size_t> cont;
    for (std::size_t k = 0; k < comp.parts.size(); ++k)
        if (!comp.parts[k].is_atom) cont.push_back(k);

    if (f.structured()) {
        ResponseFn g = f;
        for (std::size_t k = 0; k < comp.parts.size(); ++k)
            if (comp.parts[k].is_atom) g = g.reduced_by(comp.parts[k].atom);
        if (cont.empty()) return evaluate_structured_closed(g);
        if (cont.size() == 1 && comp.parts[cont[0]].dens.kind != FactorDensity::Kind::Opaque) {
            const FactorDensity& d = comp.parts[cont[0]].dens;
            switch (g.kind) {
                case ResponseFn::Kind::AffineInSum:
                    return quad::integrate_affine(profile_of(d), d.axis, g.a, g.b, cfg.n_polar);
                case ResponseFn::Kind::StepOfSum:
                    return quad::integrate_step(profile_of(d), d.axis, g.a, g.b, cfg.n_polar);
                case ResponseFn::Kind::OneMinusStepOfSum:
                    return 1.0 - quad::integrate_step(profile_of(d), d.axis, g.a, g.b, cfg.n_polar);
                default: break;
            }
        }
        if (cont.size() == 1) return component_grid_opaque(comp, cont[0], f, cfg);
        throw std::domain_error(
            "grid integration of a structured response over several continuous factors "
            "is not supported; use the Monte Carlo scheme");
    }

    if (cont.empty()) {
        OnticPoint pt;
        for (const auto& part : comp.parts) pt.coords.push_back(part.atom);
        return f(pt);
    }
    if (cont.size() == 1) return component_grid_opaque(comp, cont[0], f, cfg);
    throw std::domain_error(
        "grid integration over several continuous factors is not supported; "
        "use the Monte Carlo scheme");
}

// Draw one point of a component's continuous factors; returns the importance
// weight (1 for direct sampling, density * proposal-area for opaque ones).
double sample_component_point(const MeasureComponent& comp, std::uint64_t seed, std::uint64_t i,
                              OnticPoint& pt) {
    double weight = 1.0;
    std::uint64_t sub = 0;
    for (std::size_t k = 0; k < comp.parts.size(); ++k) {
        const FactorPart& part = comp.parts[k];
        if (part.is_atom) {
            pt.coords[k] = part.atom;
            continue;
        }
        const FactorDensity& d = part.dens;
        switch (d.kind) {
            case FactorDensity::Kind::Uniform:
                pt.coords[k] = counter_sphere(seed, i, sub);
                sub += 2;
                break;
            case FactorDensity::Kind::Cone: {
                // polar marginal 2c on [0,1]  =>  c = sqrt(u)
                double c = std::sqrt(counter_u01(seed, i, sub));
                double ph = 2.0 * PI * counter_u01(seed, i, sub + 1);
                sub += 2;
                BlochVector ex, ey, ez;
                quad::frame_about(d.axis, ex, ey, ez);
                double s = std::sqrt(std::max(0.0, 1.0 - c * c));
                pt.coords[k] = (s * std::cos(ph)) * ex + (s * std::sin(ph)) * ey + c * ez;
                break;
            }
            case FactorDensity::Kind::Opaque: {
                bool hemi = d.support == FactorDensity::Support::Hemisphere;
                double c = hemi ? counter_u01(seed, i, sub)
                                : 2.0 * counter_u01(seed, i, sub) - 1.0;
                double ph = 2.0 * PI * counter_u01(seed, i, sub + 1);
                sub += 2;
                BlochVector ex, ey, ez;
                quad::frame_about(d.axis, ex, ey, ez);
                double s = std::sqrt(std::max(0.0, 1.0 - c * c));
                pt.coords[k] = (s * std::cos(ph)) * ex + (s * std::sin(ph)) * ey + c * ez;
                weight *= d.value(pt.coords[k]) * (hemi ? 2.0 * PI : 4.0 * PI);
                break;
            }
        }
    }
    return weight;
}

McEstimate component_mc(const MeasureComponent& comp, const ResponseFn& f,
                        const QuadratureConfig& cfg, std::uint64_t comp_seed) {
    bool any_cont = false;
    for (const auto& part : comp.parts)
        if (!part.is_atom) any_cont = true;
    if (!any_cont) {
        OnticPoint pt;
        for (const auto& part : comp.parts) pt.coords.push_back(part.atom);
        return {f(pt), 0.0};
    }

    const long long n = cfg.n_samples;
    const long long block = 4096;
    const long long nblocks = (n + block - 1) / block;
    std::vector<double> sum1(static_cast<std::size_t>(nblocks), 0.0);
    std::vector<double> sum2(static_cast<std::size_t>(nblocks), 0.0);

    parallel_for_index(static_cast<std::size_t>(nblocks), cfg.threads, [&](std::size_t bi) {
        long long begin = static_cast<long long>(bi) * block;
        long long end = std::min(begin + block, n);
        OnticPoint pt;
        pt.coords.resize(comp.parts.size());
        double s1 = 0.0, s2 = 0.0;
        for (long long i = begin; i < end; ++i) {
            double w = sample_component_point(comp, comp_seed, static_cast<std::uint64_t>(i), pt);
            double v = w * f(pt);
            s1 += v;
            s2 += v * v;
        }
        sum1[bi] = s1;
        sum2[bi] = s2;
    });

    // fixed-order reduction: identical bytes no matter the thread count
    double s1 = 0.0, s2 = 0.0;
    for (long long bi = 0; bi < nblocks; ++bi) {
        s1 += sum1[static_cast<std::size_t>(bi)];
        s2 += sum2[static_cast<std::size_t>(bi)];
    }
    double mean = s1 / static_cast<double>(n);
    double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
    if (n > 1) var *= static_cast<double>(n) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

void check_space(const EpistemicState& e, const OnticSpace& s, const char* what) {
    if (!(e.space == s)) throw std::domain_error(std::string(what) + ": ontic space mismatch");
}

}  // namespace

McEstimate mc_expectation(const EpistemicState& e, const ResponseFn& f,
                          const QuadratureConfig& cfg) {
    if (cfg.scheme != QuadratureConfig::Scheme::MonteCarlo)
        throw std::domain_error("mc_expectation needs a MonteCarlo config");
    std::vector<MeasureComponent> comps = flatten(e);
    double value = 0.0, var = 0.0;
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        std::uint64_t comp_seed = counter_hash(cfg.seed, 0x5eedc0de, ci);
        McEstimate est = component_mc(comps[ci], f, cfg, comp_seed);
        value += comps[ci].weight * est.value;
        var += comps[ci].weight * comps[ci].weight * est.std_error * est.std_error;
    }
    return {value, std::sqrt(var)};
}

double expectation(const EpistemicState& e, const ResponseFn& f, const QuadratureConfig& cfg) {
    if (cfg.scheme == QuadratureConfig::Scheme::MonteCarlo) return mc_expectation(e, f, cfg).value;
    // mixtures reduce to weighted sums of their components' expectations
    std::vector<MeasureComponent> comps = flatten(e);
    double total = 0.0;
    for (const auto& comp : comps)
        total += comp.weight * component_expectation_gauss(comp, f, cfg);
    return total;
}

// ---------------------------------------------------------------------------
// classical fidelity
// ---------------------------------------------------------------------------
namespace {

// Can the supports of two factor parts carry common mass?
bool parts_may_overlap(const FactorPart& a, const FactorPart& b) {
    if (a.is_atom && b.is_atom) return distance(a.atom, b.atom) <= ATOM_TOL;
    if (a.is_atom != b.is_atom) return false;  // atom vs continuous: mutually singular
    const FactorDensity& x = a.dens;
    const FactorDensity& y = b.dens;
    if (x.kind == FactorDensity::Kind::Cone && y.kind == FactorDensity::Kind::Cone)
        return distance(x.axis, -y.axis) > ATOM_TOL;  // antipodal cones: boundary only
    return true;  // uniform/opaque: assume overlap
}

bool components_may_overlap(const MeasureComponent& a, const MeasureComponent& b) {
    if (a.parts.size() != b.parts.size()) return false;
    for (std::size_t k = 0; k < a.parts.size(); ++k)
        if (!parts_may_overlap(a.parts[k], b.parts[k])) return false;
    return true;
}

bool mutually_singular_within(const std::vector<MeasureComponent>& comps) {
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (std::size_t j = i + 1; j < comps.size(); ++j)
            if (components_may_overlap(comps[i], comps[j])) return false;
    return true;
}

double grid_sqrt_integral(const FactorDensity& x, const FactorDensity& y,
                          const QuadratureConfig& cfg) {
    quad::SphereGrid grid = quad::make_sphere_grid(x.axis, -1.0, 1.0, cfg.n_polar, cfg.n_azimuthal);
    double total = 0.0;
    for (std::size_t i = 0; i < grid.node.size(); ++i) {
        double pv = x.value(grid.node[i]);
        if (pv <= 0.0) continue;
        double qv = y.value(grid.node[i]);
        if (qv <= 0.0) continue;
        total += grid.weight[i] * std::sqrt(pv * qv);
    }
    return total;
}

double factor_fidelity(const FactorPart& a, const FactorPart& b, const QuadratureConfig& cfg) {
    if (a.is_atom && b.is_atom) return distance(a.atom, b.atom) <= ATOM_TOL ? 1.0 : 0.0;
    if (a.is_atom != b.is_atom) return 0.0;  // atoms are singular w.r.t. densities
    const FactorDensity& x = a.dens;
    const FactorDensity& y = b.dens;
    if (x.same_density(y)) return 1.0;
    if (x.kind != FactorDensity::Kind::Opaque && y.kind != FactorDensity::Kind::Opaque)
        return quad::bhattacharyya_axial(profile_of(x), x.axis, profile_of(y), y.axis,
                                         cfg.n_polar, cfg.n_azimuthal);
    return grid_sqrt_integral(x, y, cfg);
}

double component_pair_fidelity(const MeasureComponent& a, const MeasureComponent& b,
                               const QuadratureConfig& cfg) {
    double f = std::sqrt(a.weight * b.weight);
    for (std::size_t k = 0; k < a.parts.size() && f > 0.0; ++k)
        f *= factor_fidelity(a.parts[k], b.parts[k], cfg);
    return f;
}

}  // namespace

double classical_fidelity(const EpistemicState& p, const EpistemicState& q,
                          const QuadratureConfig& cfg) {
    check_space(q, p.space, "classical_fidelity");
    std::vector<MeasureComponent> P = flatten(p);
    std::vector<MeasureComponent> Q = flatten(q);

    double total = 0.0;
    if (mutually_singular_within(P) && mutually_singular_within(Q)) {
        // sqrt distributes across mutually singular families, so the state
        // fidelity is the sum of component-pair fidelities
        for (const auto& a : P)
            for (const auto& b : Q) total += component_pair_fidelity(a, b, cfg);
    } else if (p.space.single_sphere()) {
        // atoms still pair off structurally; the continuous parts are summed
        // pointwise on the grid
        std::vector<const MeasureComponent*> pc, qc;
        for (const auto& a : P) {
            if (a.parts[0].is_atom) {
                for (const auto& b : Q)
                    if (b.parts[0].is_atom && distance(a.parts[0].atom, b.parts[0].atom) <= ATOM_TOL)
                        total += std::sqrt(a.weight * b.weight);
            } else {
                pc.push_back(&a);
            }
        }
        for (const auto& b : Q)
            if (!b.parts[0].is_atom) qc.push_back(&b);
        if (!pc.empty() && !qc.empty()) {
            quad::SphereGrid grid =
                quad::make_sphere_grid(z_axis(), -1.0, 1.0, cfg.n_polar, cfg.n_azimuthal);
            for (std::size_t i = 0; i < grid.node.size(); ++i) {
                double pv = 0.0, qv = 0.0;
                for (const auto* a : pc) pv += a->weight * a->parts[0].dens.value(grid.node[i]);
                for (const auto* b : qc) qv += b->weight * b->parts[0].dens.value(grid.node[i]);
                if (pv > 0.0 && qv > 0.0) total += grid.weight[i] * std::sqrt(pv * qv);
            }
        }
    } else {
        throw std::domain_error(
            "classical_fidelity: mixtures with internally overlapping continuous components "
            "on product spaces are not supported");
    }
    return std::clamp(total, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// support overlap
// ---------------------------------------------------------------------------
OverlapResult support_overlap(const EpistemicState& p, const EpistemicState& q,
                              const QuadratureConfig& cfg) {
    check_space(q, p.space, "support_overlap");
    OverlapResult res;
    res.fidelity = classical_fidelity(p, q, cfg);
    if (res.fidelity <= 1e-9) return res;  // measure-zero contact counts as disjoint
    res.overlapping = true;

    std::vector<MeasureComponent> P = flatten(p);
    std::vector<MeasureComponent> Q = flatten(q);
    for (const auto& a : P) {
        for (const auto& b : Q) {
            if (component_pair_fidelity(a, b, cfg) <= 1e-9) continue;
            OnticPoint w;
            w.coords.resize(a.parts.size());
            bool ok = true;
            for (std::size_t k = 0; k < a.parts.size() && ok; ++k) {
                const FactorPart& x = a.parts[k];
                const FactorPart& y = b.parts[k];
                if (x.is_atom && y.is_atom) {
                    w.coords[k] = x.atom;
                    ok = distance(x.atom, y.atom) <= ATOM_TOL;
                } else if (!x.is_atom && !y.is_atom) {
                    // argmax of the pointwise product over a coarse scan
                    quad::SphereGrid grid = quad::make_sphere_grid(x.dens.axis, -1.0, 1.0, 64, 64);
                    double best = 0.0;
                    for (std::size_t i = 0; i < grid.node.size(); ++i) {
                        double v = x.dens.value(grid.node[i]) * y.dens.value(grid.node[i]);
                        if (v > best) {
                            best = v;
                            w.coords[k] = grid.node[i];
                        }
                    }
                    ok = best > 0.0;
                } else {
                    ok = false;
                }
            }
            if (ok) {
                res.witness = std::move(w);
                return res;
            }
        }
    }
    return res;  // overlapping per fidelity, witness search failed (not expected)
}

// ---------------------------------------------------------------------------
// total variation distance
// ---------------------------------------------------------------------------
namespace {

bool atoms_and_layout_match(const MeasureComponent& a, const MeasureComponent& b) {
    if (a.parts.size() != b.parts.size()) return false;
    for (std::size_t k = 0; k < a.parts.size(); ++k) {
        if (a.parts[k].is_atom != b.parts[k].is_atom) return false;
        if (a.parts[k].is_atom && distance(a.parts[k].atom, b.parts[k].atom) > ATOM_TOL)
            return false;
    }
    return true;
}

double grid_abs_diff(const std::vector<std::pair<double, FactorDensity>>& ps,
                     const std::vector<std::pair<double, FactorDensity>>& qs,
                     const QuadratureConfig& cfg) {
    quad::SphereGrid grid = quad::make_sphere_grid(z_axis(), -1.0, 1.0, cfg.n_polar, cfg.n_azimuthal);
    double total = 0.0;
    for (std::size_t i = 0; i < grid.node.size(); ++i) {
        double pv = 0.0, qv = 0.0;
        for (const auto& [w, d] : ps) pv += w * d.value(grid.node[i]);
        for (const auto& [w, d] : qs) qv += w * d.value(grid.node[i]);
        total += grid.weight[i] * std::abs(pv - qv);
    }
    return 0.5 * total;
}

}  // namespace

double total_variation_distance(const EpistemicState& p, const EpistemicState& q,
                                const QuadratureConfig& cfg) {
    check_space(q, p.space, "total_variation_distance");
    std::vector<MeasureComponent> P = flatten(p);
    std::vector<MeasureComponent> Q = flatten(q);

    double tv = 0.0;

    // 1. fully atomic components pair off by location
    std::vector<bool> q_used(Q.size(), false);
    auto fully_atomic = [](const MeasureComponent& c) {
        for (const auto& part : c.parts)
            if (!part.is_atom) return false;
        return true;
    };
    for (const auto& a : P) {
        if (!fully_atomic(a)) continue;
        bool matched = false;
        for (std::size_t j = 0; j < Q.size(); ++j) {
            if (q_used[j] || !fully_atomic(Q[j])) continue;
            if (atoms_and_layout_match(a, Q[j])) {
                tv += 0.5 * std::abs(a.weight - Q[j].weight);
                q_used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) tv += 0.5 * a.weight;
    }
    for (std::size_t j = 0; j < Q.size(); ++j)
        if (!q_used[j] && fully_atomic(Q[j])) tv += 0.5 * Q[j].weight;

    // 2. continuous and hybrid components
    if (p.space.single_sphere()) {
        std::vector<std::pair<double, FactorDensity>> ps, qs;
        for (const auto& a : P)
            if (!a.parts[0].is_atom) ps.emplace_back(a.weight, a.parts[0].dens);
        for (const auto& b : Q)
            if (!b.parts[0].is_atom) qs.emplace_back(b.weight, b.parts[0].dens);
        if (!ps.empty() || !qs.empty()) tv += grid_abs_diff(ps, qs, cfg);
        return std::clamp(tv, 0.0, 1.0);
    }

    // product spaces: group hybrid components by their atomic layout
    std::vector<const MeasureComponent*> ph, qh;
    for (const auto& a : P)
        if (!fully_atomic(a)) ph.push_back(&a);
    for (const auto& b : Q)
        if (!fully_atomic(b)) qh.push_back(&b);

    std::vector<bool> qh_used(qh.size(), false);
    for (const auto* a : ph) {
        bool matched = false;
        for (std::size_t j = 0; j < qh.size(); ++j) {
            if (qh_used[j] || !atoms_and_layout_match(*a, *qh[j])) continue;
            qh_used[j] = true;
            matched = true;
            const MeasureComponent& b = *qh[j];
            // identical continuous parts: plain weight difference; a single
            // differing continuous factor integrates on that factor alone
            std::vector<std::size_t> differing;
            for (std::size_t k = 0; k < a->parts.size(); ++k)
                if (!a->parts[k].is_atom && !a->parts[k].dens.same_density(b.parts[k].dens))
                    differing.push_back(k);
            if (differing.empty()) {
                tv += 0.5 * std::abs(a->weight - b.weight);
            } else if (differing.size() == 1) {
                std::size_t k = differing[0];
                tv += grid_abs_diff({{a->weight, a->parts[k].dens}},
                                    {{b.weight, b.parts[k].dens}}, cfg);
            } else {
                throw std::domain_error(
                    "total_variation_distance: components differing in several continuous "
                    "factors are not supported");
            }
            break;
        }
        if (!matched) tv += 0.5 * a->weight;
    }
    for (std::size_t j = 0; j < qh.size(); ++j)
        if (!qh_used[j]) tv += 0.5 * qh[j]->weight;

    return std::clamp(tv, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// plot export
// ---------------------------------------------------------------------------
std::vector<PlotRow> plot_rows(const EpistemicState& e, int n_polar, int n_azimuthal) {
    std::vector<MeasureComponent> comps = flatten(e);
    std::vector<PlotRow> rows;

    for (const auto& comp : comps) {
        for (std::size_t k = 0; k < comp.parts.size(); ++k) {
            if (!comp.parts[k].is_atom) continue;
            const BlochVector& v = comp.parts[k].atom;
            PlotRow r;
            r.is_atom = true;
            r.factor = static_cast<int>(k) + 1;
            r.theta = std::acos(std::clamp(v.z, -1.0, 1.0));
            r.phi = std::atan2(v.y, v.x);
            if (r.phi < 0.0) r.phi += 2.0 * PI;
            r.pos = v;
            r.value = comp.weight;
            rows.push_back(r);
        }
    }

    int nfactors = e.space.factors;
    for (int k = 0; k < nfactors; ++k) {
        bool any = false;
        for (const auto& comp : comps)
            if (!comp.parts[static_cast<std::size_t>(k)].is_atom) any = true;
        if (!any) continue;
        quad::SphereGrid grid = quad::make_sphere_grid(z_axis(), -1.0, 1.0, n_polar, n_azimuthal);
        for (int i = 0; i < n_polar; ++i) {
            for (int j = 0; j < n_azimuthal; ++j) {
                std::size_t idx = static_cast<std::size_t>(i) * n_azimuthal + j;
                PlotRow r;
                r.factor = k + 1;
                r.theta = std::acos(std::clamp(grid.ctheta[static_cast<std::size_t>(i)], -1.0, 1.0));
                r.phi = grid.phi[static_cast<std::size_t>(j)];
                r.pos = grid.node[idx];
                double v = 0.0;
                for (const auto& comp : comps) {
                    const FactorPart& part = comp.parts[static_cast<std::size_t>(k)];
                    if (!part.is_atom) v += comp.weight * part.dens.value(grid.node[idx]);
                }
                r.value = v;
                rows.push_back(r);
            }
        }
    }
    return rows;
}

}  // namespace ontolab
