// Bloch-sphere geometry: rays, Bloch vectors, projective measurements, and the
// exact quantum oracles (Born rule, two-qubit steering) everything else is
// checked against.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace ontolab {

using complexd = std::complex<double>;

// ---------------------------------------------------------------------------
// BlochVector: a point of the unit ball; pure states live on the unit sphere.
// ---------------------------------------------------------------------------
struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;

    BlochVector() = default;
    BlochVector(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
};

inline BlochVector operator+(const BlochVector& a, const BlochVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline BlochVector operator-(const BlochVector& a) { return {-a.x, -a.y, -a.z}; }
inline BlochVector operator*(double s, const BlochVector& a) {
    return {s * a.x, s * a.y, s * a.z};
}
inline double dot(const BlochVector& a, const BlochVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline BlochVector cross(const BlochVector& a, const BlochVector& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const BlochVector& a) { return std::sqrt(dot(a, a)); }
inline BlochVector normalized(const BlochVector& a) {
    double n = norm(a);
    if (n < 1e-300) throw std::domain_error("cannot normalize zero vector");
    return (1.0 / n) * a;
}
inline double distance(const BlochVector& a, const BlochVector& b) { return norm(a - b); }

inline BlochVector x_axis() { return {1, 0, 0}; }
inline BlochVector y_axis() { return {0, 1, 0}; }
inline BlochVector z_axis() { return {0, 0, 1}; }

// ---------------------------------------------------------------------------
// Ray: a normalized qubit state (a0, a1) with unobservable global phase.
// Convention: sigma_z diagonal, |0> at the north pole (+z).
// ---------------------------------------------------------------------------
struct Ray {
    complexd a0{1.0, 0.0};
    complexd a1{0.0, 0.0};

    Ray() = default;
    Ray(complexd a0_, complexd a1_, bool check = true) : a0(a0_), a1(a1_) {
        if (check) {
            double n2 = std::norm(a0) + std::norm(a1);
            if (std::abs(n2 - 1.0) > 1e-12)
                throw std::domain_error("ray amplitudes are not normalized");
        }
    }

    // Fix the global phase: first amplitude above threshold made real positive.
    Ray canonicalized() const {
        complexd lead = (std::abs(a0) > 1e-12) ? a0 : a1;
        complexd phase = std::conj(lead) / std::abs(lead);
        return Ray(phase * a0, phase * a1, false);
    }
};

inline complexd inner(const Ray& a, const Ray& b) {
    // <a|b>
    return std::conj(a.a0) * b.a0 + std::conj(a.a1) * b.a1;
}

inline bool same_ray(const Ray& a, const Ray& b, double tol = 1e-10) {
    Ray ca = a.canonicalized(), cb = b.canonicalized();
    return std::abs(ca.a0 - cb.a0) <= tol && std::abs(ca.a1 - cb.a1) <= tol;
}

Ray ket0();
Ray ket1();
Ray ket_plus();
Ray ket_minus();

// Ray <-> Bloch conversions.
BlochVector ray_to_bloch(const Ray& r);
Ray bloch_to_ray(const BlochVector& v);

// |<phi|psi>|^2 = (1 + psi_vec . phi_vec)/2.
double born_probability(const Ray& psi, const Ray& phi);

// ---------------------------------------------------------------------------
// ProjectiveMeasurement: an orthonormal qubit basis; equivalently an axis with
// the two outcomes at +/- the axis direction.
// ---------------------------------------------------------------------------
struct ProjectiveMeasurement {
    Ray outcome0, outcome1;

    ProjectiveMeasurement(const Ray& b0, const Ray& b1) : outcome0(b0), outcome1(b1) {
        if (std::abs(inner(b0, b1)) > 1e-12)
            throw std::domain_error("measurement basis is not orthogonal");
    }
    explicit ProjectiveMeasurement(const BlochVector& axis_dir)
        : ProjectiveMeasurement(bloch_to_ray(normalized(axis_dir)),
                                bloch_to_ray(-normalized(axis_dir))) {}

    BlochVector axis() const { return ray_to_bloch(outcome0); }
};

// ---------------------------------------------------------------------------
// Two-qubit pure states and steering.
// ---------------------------------------------------------------------------
struct TwoQubitState {
    // amplitudes over |00>, |01>, |10>, |11>
    std::array<complexd, 4> amp{};

    TwoQubitState() = default;
    TwoQubitState(complexd c00, complexd c01, complexd c10, complexd c11, bool check = true)
        : amp{c00, c01, c10, c11} {
        if (check) {
            double n2 = 0;
            for (const auto& c : amp) n2 += std::norm(c);
            if (std::abs(n2 - 1.0) > 1e-12)
                throw std::domain_error("two-qubit state is not normalized");
        }
    }
};

// (|01> + |10>)/sqrt(2): the maximally entangled state used by the steering
// experiments.
TwoQubitState psi_plus();

struct SteeredOutcome {
    Ray state_b;         // conditional state of B given A's outcome
    double probability;  // probability of that outcome
};

struct SteeredEnsemble {
    std::vector<SteeredOutcome> outcomes;
    ProjectiveMeasurement measurement;  // the measurement applied on A
};

// Partial projection of a two-qubit state by a measurement on A; outcomes with
// probability below 1e-14 are dropped (B's conditional state is undefined there).
SteeredEnsemble steered_ensemble(const TwoQubitState& joint, const ProjectiveMeasurement& m);

// Parses a user-facing state spec: one of the named cardinal points
// (z+ z- x+ x- y+ y-) or "theta,phi" in radians.  Throws std::invalid_argument.
Ray parse_state_spec(const std::string& spec);

}  // namespace ontolab
