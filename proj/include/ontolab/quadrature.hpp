// Spherical integration engine.
//
// The structured integrands that appear in this project (half-space step
// functions and affine functions of lambda, integrated against axially
// symmetric densities) admit a semi-analytic treatment: work in a frame
// aligned with the density's symmetry axis, integrate the azimuthal direction
// exactly (the set where a half-space indicator is 1 intersects each latitude
// ring in a circular arc of computable length), and use Gauss-Legendre panels
// in cos(theta) split at the latitudes where the ring/half-space tangency
// creates square-root kinks. Endpoint substitutions (c = end -+ t^p) remove
// the remaining root-type singularities, restoring spectral accuracy.
//
// A plain product grid (Gauss-Legendre x uniform azimuth) is also provided for
// opaque integrands; it converges slowly near discontinuities, which is
// exactly why the structured paths exist.
#pragma once

#include <vector>

#include "ontolab/bloch.hpp"

namespace ontolab::quad {

struct GaussNodes {
    std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

// Cached Gauss-Legendre rule (Newton iteration on the Legendre recurrence).
const GaussNodes& gauss_legendre(int n);

// Length of the azimuthal arc {phi in [0,2pi) : R cos(phi) + d > 0}.
double arc_measure(double R, double d);

// Orthonormal frame with ez = normalized axis.
void frame_about(const BlochVector& axis, BlochVector& ex, BlochVector& ey, BlochVector& ez);

// Axially symmetric densities on a single sphere.
//   Uniform: 1 / 4pi everywhere.
//   Cone:    (1/pi) * max(axis . lambda, 0)   (supported on a hemisphere).
enum class Profile { Uniform, Cone };

double profile_value(Profile p, const BlochVector& axis, const BlochVector& lambda);
void profile_range(Profile p, double& c_lo, double& c_hi);  // support in c = axis.lambda

// integral over the sphere of density * (a . lambda + b)
double integrate_affine(Profile p, const BlochVector& dens_axis,
                        const BlochVector& a, double b, int n_polar);

// integral over the sphere of density * [a . lambda + b > 0]
double integrate_step(Profile p, const BlochVector& dens_axis,
                      const BlochVector& a, double b, int n_polar);

// integral over the sphere of sqrt(density_p * density_q)
double bhattacharyya_axial(Profile p, const BlochVector& pa,
                           Profile q, const BlochVector& qa,
                           int n_polar, int n_azimuthal);

// Plain product grid over c in [c_lo, c_hi] x uniform azimuth in the frame of
// `axis`; weights sum to the band's solid angle.
struct SphereGrid {
    std::vector<BlochVector> node;  // row-major: polar major, azimuth minor
    std::vector<double> weight;
    std::vector<double> ctheta;     // one c per polar row
    std::vector<double> phi;        // one phi per azimuth column
    int n_polar = 0, n_azimuthal = 0;
};
SphereGrid make_sphere_grid(const BlochVector& axis, double c_lo, double c_hi,
                            int n_polar, int n_azimuthal);

}  // namespace ontolab::quad
