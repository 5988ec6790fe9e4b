// Structured probability measures on ontic state spaces: point masses,
// axially symmetric densities, products over sphere factors, and finite
// mixtures — plus integration, classical fidelity, overlap, and total
// variation. Atoms are symbolic and never smeared into densities; the
// classification logic depends on their exact disjointness.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ontolab/bloch.hpp"
#include "ontolab/quadrature.hpp"

namespace ontolab {

// ---------------------------------------------------------------------------
// Spaces and points
// ---------------------------------------------------------------------------
struct OnticSpace {
    enum class Structure { Sphere, ProductOfSpheres, ProjectiveHilbertAsSphere };
    Structure structure = Structure::Sphere;
    int factors = 1;

    static OnticSpace sphere() { return {Structure::Sphere, 1}; }
    static OnticSpace projective_sphere() { return {Structure::ProjectiveHilbertAsSphere, 1}; }
    static OnticSpace product_of_spheres(int n) { return {Structure::ProductOfSpheres, n}; }

    bool single_sphere() const { return factors == 1; }
    friend bool operator==(const OnticSpace&, const OnticSpace&) = default;
};

struct OnticPoint {
    std::vector<BlochVector> coords;  // one unit vector per factor

    OnticPoint() = default;
    explicit OnticPoint(std::vector<BlochVector> c) : coords(std::move(c)) {
        for (const auto& v : coords)
            if (std::abs(norm(v) - 1.0) > 1e-12)
                throw std::domain_error("ontic point coordinates must be unit vectors");
    }
    explicit OnticPoint(const BlochVector& v) : OnticPoint(std::vector<BlochVector>{v}) {}
};

// ---------------------------------------------------------------------------
// Response functions (indicator outcomes and test integrands)
// ---------------------------------------------------------------------------
// The structured kinds are functions of s = a . (sum of coordinates) + b:
//   AffineInSum       -> s
//   StepOfSum         -> 1 if s > 0 else 0   (exactly 0 at s = 0)
//   OneMinusStepOfSum -> the complement, so outcome pairs sum to 1 exactly
// Opaque wraps an arbitrary callable; it integrates on the plain grid.
struct ResponseFn {
    enum class Kind { AffineInSum, StepOfSum, OneMinusStepOfSum, Opaque };
    Kind kind = Kind::Opaque;
    BlochVector a{};
    double b = 0.0;
    std::function<double(const OnticPoint&)> fn;

    static ResponseFn affine(const BlochVector& a, double b);
    static ResponseFn step(const BlochVector& a, double b = 0.0);
    static ResponseFn one_minus_step(const BlochVector& a, double b = 0.0);
    static ResponseFn opaque(std::function<double(const OnticPoint&)> f);
    static ResponseFn constant(double value) { return affine({0, 0, 0}, value); }

    bool structured() const { return kind != Kind::Opaque; }
    double operator()(const OnticPoint& p) const;

    // Pin one summed coordinate to a fixed value (atom factor): b += a . v.
    ResponseFn reduced_by(const BlochVector& v) const;
};

struct IndicatorFunction {
    OnticSpace space;
    std::vector<ResponseFn> outcomes;
};

// ---------------------------------------------------------------------------
// Quadrature configuration
// ---------------------------------------------------------------------------
struct QuadratureConfig {
    enum class Scheme { GaussGrid, MonteCarlo };
    Scheme scheme = Scheme::GaussGrid;
    int n_polar = 128;
    int n_azimuthal = 256;
    long long n_samples = 1000000;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency

    static QuadratureConfig gauss(int n_polar = 128, int n_azimuthal = 256) {
        QuadratureConfig c;
        c.scheme = Scheme::GaussGrid;
        c.n_polar = n_polar;
        c.n_azimuthal = n_azimuthal;
        if (n_polar < 1 || n_azimuthal < 1)
            throw std::domain_error("grid resolution must be >= 1");
        return c;
    }
    static QuadratureConfig monte_carlo(long long n = 1000000, std::uint64_t seed = 0) {
        QuadratureConfig c;
        c.scheme = Scheme::MonteCarlo;
        c.n_samples = n;
        c.seed = seed;
        if (n < 1) throw std::domain_error("sample count must be >= 1");
        return c;
    }
};

// ---------------------------------------------------------------------------
// Epistemic states
// ---------------------------------------------------------------------------
// Continuous density on one sphere factor. Uniform and Cone cover every model
// in the registry and integrate semi-analytically; Opaque densities take the
// plain-grid path.
struct FactorDensity {
    enum class Kind { Uniform, Cone, Opaque };
    enum class Support { FullSphere, Hemisphere };  // Hemisphere: about `axis`

    Kind kind = Kind::Uniform;
    BlochVector axis{0, 0, 1};
    Support support = Support::FullSphere;
    std::shared_ptr<const std::function<double(const BlochVector&)>> fn;  // Opaque only

    double value(const BlochVector& lambda) const;
    bool same_density(const FactorDensity& other, double tol = 1e-12) const;
};

struct EpistemicState {
    enum class Form { PointMass, Density, Product, Mixture };

    Form form = Form::PointMass;
    OnticSpace space;
    OnticPoint atom;                                        // PointMass
    FactorDensity density;                                  // Density (single factor)
    std::vector<EpistemicState> factors;                    // Product
    std::vector<std::pair<double, EpistemicState>> parts;   // Mixture

    static EpistemicState point_mass(const OnticSpace& s, const OnticPoint& p);
    static EpistemicState uniform_density(const OnticSpace& s);
    static EpistemicState cone_density(const OnticSpace& s, const BlochVector& axis);
    static EpistemicState opaque_density(const OnticSpace& s,
                                         std::function<double(const BlochVector&)> f,
                                         FactorDensity::Support support,
                                         const BlochVector& frame_axis);
    static EpistemicState product(const std::vector<EpistemicState>& factor_states);

    // Pointwise value of the continuous part (atoms contribute nothing);
    // defined for single-sphere spaces.
    double continuous_density(const BlochVector& lambda) const;
};

// Finite mixture; weights must be nonnegative and sum to 1 within 1e-12.
EpistemicState mix(const std::vector<std::pair<double, EpistemicState>>& components);

// ---------------------------------------------------------------------------
// Flattened component view (used by fidelity / overlap / total variation and
// exposed for export code). A component is a product of per-factor parts with
// a scalar weight; flattening distributes mixtures and merges exact
// duplicates.
// ---------------------------------------------------------------------------
struct FactorPart {
    bool is_atom = false;
    BlochVector atom{};
    FactorDensity dens{};
};
struct MeasureComponent {
    double weight = 1.0;
    std::vector<FactorPart> parts;
};
std::vector<MeasureComponent> flatten(const EpistemicState& e);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------
double expectation(const EpistemicState& e, const ResponseFn& f, const QuadratureConfig& cfg);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};
// Monte Carlo estimate with standard error (cfg must be MonteCarlo).
McEstimate mc_expectation(const EpistemicState& e, const ResponseFn& f,
                          const QuadratureConfig& cfg);

double classical_fidelity(const EpistemicState& p, const EpistemicState& q,
                          const QuadratureConfig& cfg);

struct OverlapResult {
    bool overlapping = false;
    std::optional<OnticPoint> witness;  // point with p * q > 0 when overlapping
    double fidelity = 0.0;
};
OverlapResult support_overlap(const EpistemicState& p, const EpistemicState& q,
                              const QuadratureConfig& cfg);

double total_variation_distance(const EpistemicState& p, const EpistemicState& q,
                                const QuadratureConfig& cfg);

// ---------------------------------------------------------------------------
// Grid export for plotting
// ---------------------------------------------------------------------------
struct PlotRow {
    bool is_atom = false;
    int factor = 0;      // 1-based factor index
    double theta = 0.0;  // radians, world frame (+z polar axis)
    double phi = 0.0;
    BlochVector pos{};
    double value = 0.0;  // density value, or atom weight
};
// Atoms become single rows; continuous factors become (theta, phi, value) rows
// over the Gauss grid in the world frame, row-major (polar major).
std::vector<PlotRow> plot_rows(const EpistemicState& e, int n_polar, int n_azimuthal);

}  // namespace ontolab
