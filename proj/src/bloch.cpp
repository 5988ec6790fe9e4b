#include "ontolab/bloch.hpp"

#include <algorithm>

namespace ontolab {

namespace {
const double INV_SQRT2 = 1.0 / std::sqrt(2.0);
}

Ray ket0() { return Ray(1.0, 0.0, false); }
Ray ket1() { return Ray(0.0, 1.0, false); }
Ray ket_plus() { return Ray(INV_SQRT2, INV_SQRT2, false); }
Ray ket_minus() { return Ray(INV_SQRT2, -INV_SQRT2, false); }

BlochVector ray_to_bloch(const Ray& r) {
    double n2 = std::norm(r.a0) + std::norm(r.a1);
    if (std::abs(n2 - 1.0) > 1e-12) throw std::domain_error("ray is not normalized");
    complexd m = std::conj(r.a0) * r.a1;
    return {2.0 * m.real(), 2.0 * m.imag(), std::norm(r.a0) - std::norm(r.a1)};
}

Ray bloch_to_ray(const BlochVector& v) {
    if (std::abs(norm(v) - 1.0) > 1e-10)
        throw std::domain_error("bloch_to_ray needs a unit vector");
    double c = std::clamp(v.z, -1.0, 1.0);
    double a0 = std::sqrt(0.5 * (1.0 + c));
    double a1m = std::sqrt(0.5 * (1.0 - c));
    double az = (std::hypot(v.x, v.y) > 1e-300) ? std::atan2(v.y, v.x) : 0.0;
    return Ray(complexd(a0, 0.0), std::polar(a1m, az), false);
}

double born_probability(const Ray& psi, const Ray& phi) {
    double n2p = std::norm(psi.a0) + std::norm(psi.a1);
    double n2q = std::norm(phi.a0) + std::norm(phi.a1);
    if (std::abs(n2p - 1.0) > 1e-12 || std::abs(n2q - 1.0) > 1e-12)
        throw std::domain_error("born_probability needs normalized rays");
    return std::norm(inner(phi, psi));
}

TwoQubitState psi_plus() {
    return TwoQubitState(0.0, INV_SQRT2, INV_SQRT2, 0.0, false);
}

SteeredEnsemble steered_ensemble(const TwoQubitState& joint, const ProjectiveMeasurement& m) {
    double n2 = 0;
    for (const auto& c : joint.amp) n2 += std::norm(c);
    if (std::abs(n2 - 1.0) > 1e-12)
        throw std::domain_error("steered_ensemble needs a normalized joint state");

    SteeredEnsemble ens{{}, m};
    for (const Ray* outcome : {&m.outcome0, &m.outcome1}) {
        // Project A onto the outcome ray: b_j = sum_i conj(outcome_i) * c_ij.
        complexd b0 = std::conj(outcome->a0) * joint.amp[0] + std::conj(outcome->a1) * joint.amp[2];
        complexd b1 = std::conj(outcome->a0) * joint.amp[1] + std::conj(outcome->a1) * joint.amp[3];
        double p = std::norm(b0) + std::norm(b1);
        if (p < 1e-14) continue;  // B's conditional state undefined at probability zero
        double s = 1.0 / std::sqrt(p);
        ens.outcomes.push_back({Ray(s * b0, s * b1, false), p});
    }
    return ens;
}

Ray parse_state_spec(const std::string& spec) {
    if (spec == "z+") return ket0();
    if (spec == "z-") return ket1();
    if (spec == "x+") return ket_plus();
    if (spec == "x-") return ket_minus();
    if (spec == "y+") return bloch_to_ray(BlochVector{0.0, 1.0, 0.0});
    if (spec == "y-") return bloch_to_ray(BlochVector{0.0, -1.0, 0.0});
    const auto comma = spec.find(',');
    const char* const usage =
        "state spec must be one of z+ z- x+ x- y+ y- or \"theta,phi\" in radians";
    if (comma == std::string::npos) throw std::invalid_argument(usage);
    double theta = 0.0;
    double phi = 0.0;
    try {
        std::size_t used_t = 0;
        std::size_t used_p = 0;
        theta = std::stod(spec.substr(0, comma), &used_t);
        phi = std::stod(spec.substr(comma + 1), &used_p);
        if (used_t != comma || used_p != spec.size() - comma - 1)
            throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument(usage);
    }
    const BlochVector v{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                        std::cos(theta)};
    return bloch_to_ray(v);
}

}  // namespace ontolab
