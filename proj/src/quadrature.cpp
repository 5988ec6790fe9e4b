#include "ontolab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ontolab::quad {

namespace {
constexpr double PI = 3.14159265358979323846264338327950288;
constexpr double TWO_PI = 2.0 * PI;
}  // namespace

const GaussNodes& gauss_legendre(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre needs n >= 1");
    static std::map<int, GaussNodes> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussNodes g;
    g.x.resize(n);
    g.w.resize(n);
    int half = (n + 1) / 2;
    for (int k = 0; k < half; ++k) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(PI * (k + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one polishing step after convergence
                p0 = 1.0;
                p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        g.x[k] = -x;
        g.x[n - 1 - k] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        g.w[k] = w;
        g.w[n - 1 - k] = w;
    }
    if (n % 2 == 1) g.x[n / 2] = 0.0;  // exact middle node
    return cache.emplace(n, std::move(g)).first->second;
}

double arc_measure(double R, double d) {
    if (R < 1e-15) return d > 0.0 ? TWO_PI : 0.0;
    double x = -d / R;
    if (x >= 1.0) return 0.0;
    if (x <= -1.0) return TWO_PI;
    return 2.0 * std::acos(x);
}

void frame_about(const BlochVector& axis, BlochVector& ex, BlochVector& ey, BlochVector& ez) {
    ez = normalized(axis);
    BlochVector h = (std::abs(ez.x) < 0.9) ? BlochVector{1, 0, 0} : BlochVector{0, 1, 0};
    ex = normalized(cross(h, ez));
    ey = cross(ez, ex);
}

double profile_value(Profile p, const BlochVector& axis, const BlochVector& lambda) {
    switch (p) {
        case Profile::Uniform:
            return 1.0 / (4.0 * PI);
        case Profile::Cone: {
            double t = dot(axis, lambda);
            return t > 0.0 ? t / PI : 0.0;
        }
    }
    return 0.0;
}

void profile_range(Profile p, double& c_lo, double& c_hi) {
    if (p == Profile::Cone) {
        c_lo = 0.0;
        c_hi = 1.0;
    } else {
        c_lo = -1.0;
        c_hi = 1.0;
    }
}

namespace {

// density weight per unit c on a full latitude ring (profile * circumference
// divided out: we fold the ring length into the azimuthal factor instead, so
// this is just the profile value as a function of c).
inline double profile_of_c(Profile p, double c) {
    return p == Profile::Cone ? (c > 0.0 ? c / PI : 0.0) : 1.0 / (4.0 * PI);
}

// One-dimensional panel integration with optional endpoint substitution
// c = end -+ t^pow to absorb root-type singularities (pow 1 = plain).
template <typename F>
double integrate_panel(F&& f, double ca, double cb, int n, int pow_a, int pow_b) {
    if (cb - ca < 1e-14) return 0.0;
    if (pow_a > 1 && pow_b > 1) {
        double mid = 0.5 * (ca + cb);
        return integrate_panel(f, ca, mid, n, pow_a, 1) + integrate_panel(f, mid, cb, n, 1, pow_b);
    }
    const GaussNodes& g = gauss_legendre(n);
    double total = 0.0;
    if (pow_b > 1) {
        double T = std::pow(cb - ca, 1.0 / pow_b);
        for (int i = 0; i < n; ++i) {
            double t = 0.5 * T * (g.x[i] + 1.0);
            double w = 0.5 * T * g.w[i];
            double tp = std::pow(t, pow_b - 1);
            total += w * pow_b * tp * f(cb - tp * t);
        }
    } else if (pow_a > 1) {
        double T = std::pow(cb - ca, 1.0 / pow_a);
        for (int i = 0; i < n; ++i) {
            double t = 0.5 * T * (g.x[i] + 1.0);
            double w = 0.5 * T * g.w[i];
            double tp = std::pow(t, pow_a - 1);
            total += w * pow_a * tp * f(ca + tp * t);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            double c = 0.5 * (ca + cb) + 0.5 * (cb - ca) * g.x[i];
            total += 0.5 * (cb - ca) * g.w[i] * f(c);
        }
    }
    return total;
}

// Latitudes in (lo, hi) where the half-space boundary circle a.lambda + b = 0
// is tangent to a ring, in the frame where az/as are a's components along and
// transverse to the polar axis: as^2 (1 - c^2) = (az c + b)^2.
void tangency_cuts(double az, double as, double b, double lo, double hi,
                   std::vector<double>& cuts) {
    double A = az * az + as * as;
    if (A < 1e-28) return;
    double B = 2.0 * az * b;
    double C = b * b - as * as;
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return;
    double sq = std::sqrt(disc);
    for (double root : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
        if (root > lo + 1e-13 && root < hi - 1e-13) cuts.push_back(root);
    }
}

}  // namespace

double integrate_affine(Profile p, const BlochVector& dens_axis,
                        const BlochVector& a, double b, int n_polar) {
    // In the density frame the transverse part of `a` averages to zero over
    // every full ring, leaving a polynomial in c that the rule integrates
    // exactly.
    BlochVector ex, ey, ez;
    frame_about(p == Profile::Cone ? dens_axis : (norm(a) > 1e-300 ? a : z_axis()), ex, ey, ez);
    double az = dot(a, ez);
    double lo, hi;
    profile_range(p, lo, hi);
    auto f = [&](double c) { return profile_of_c(p, c) * TWO_PI * (az * c + b); };
    return integrate_panel(f, lo, hi, n_polar, 1, 1);
}

double integrate_step(Profile p, const BlochVector& dens_axis,
                      const BlochVector& a, double b, int n_polar) {
    double amag = norm(a);
    if (amag < 1e-300) return b > 0.0 ? 1.0 : 0.0;  // constant step on a normalized density

    BlochVector ex, ey, ez;
    // Uniform densities are symmetric about any axis, so align the frame with
    // the step instead: the arc measure then becomes piecewise constant.
    frame_about(p == Profile::Cone ? dens_axis : a, ex, ey, ez);
    double az = dot(a, ez);
    double as = std::sqrt(std::max(0.0, amag * amag - az * az));

    double lo, hi;
    profile_range(p, lo, hi);

    std::vector<double> cuts{lo, hi};
    tangency_cuts(az, as, b, lo, hi, cuts);
    if (as < 1e-13 && std::abs(az) > 1e-300) {
        double c0 = -b / az;  // pure jump when the step is axis-aligned
        if (c0 > lo + 1e-13 && c0 < hi - 1e-13) cuts.push_back(c0);
    }
    std::sort(cuts.begin(), cuts.end());

    auto f = [&](double c) {
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        return profile_of_c(p, c) * arc_measure(as * s, az * c + b);
    };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        // interior cuts are tangency latitudes: sqrt kinks, removed by c = cut -+ t^2
        int pa = (k == 0) ? 1 : 2;
        int pb = (k + 2 == cuts.size()) ? 1 : 2;
        total += integrate_panel(f, cuts[k], cuts[k + 1], n_polar, pa, pb);
    }
    return total;
}

namespace {

// Azimuthal integral of sqrt(pc * q(phi)) where q is the Cone profile of the
// second density restricted to the ring: q = max(R cos(u) + d, 0) / pi.
// The integration variable is compressed toward the arc edges (u = ue sin(pi
// v / 2)) so the square-root vanishing of q there stays spectrally resolved.
double ring_sqrt_cone(double pc, double R, double d, int n_azimuthal) {
    if (pc <= 0.0) return 0.0;
    double mu = arc_measure(R, d);
    if (mu <= 0.0) return 0.0;
    const GaussNodes& g = gauss_legendre(n_azimuthal);
    double ue = (mu >= TWO_PI - 1e-14) ? PI : 0.5 * mu;
    double total = 0.0;
    for (int i = 0; i < n_azimuthal; ++i) {
        double v = g.x[i];
        double u = ue * std::sin(0.5 * PI * v);
        double du = ue * 0.5 * PI * std::cos(0.5 * PI * v);
        double q = (R * std::cos(u) + d) / PI;
        if (q > 0.0) total += g.w[i] * du * std::sqrt(pc * q);
    }
    return total;
}

}  // namespace

double bhattacharyya_axial(Profile p, const BlochVector& pa,
                           Profile q, const BlochVector& qa,
                           int n_polar, int n_azimuthal) {
    if (p == Profile::Uniform && q == Profile::Uniform) return 1.0;
    if (p == Profile::Uniform) return bhattacharyya_axial(q, qa, p, pa, n_polar, n_azimuthal);

    // From here p is a Cone; frame on its axis, c in [0, 1].
    BlochVector ex, ey, ez;
    frame_about(pa, ex, ey, ez);

    if (q == Profile::Uniform) {
        auto f = [&](double c) {
            // full ring: sqrt((c/pi) * (1/4pi)) * 2pi = sqrt(c)
            return c > 0.0 ? std::sqrt(c) : 0.0;
        };
        // sqrt kink at c = 0 handled by the quartic substitution
        return integrate_panel(f, 0.0, 1.0, n_polar, 4, 4);
    }

    // Cone vs Cone.
    BlochVector m{dot(qa, ex), dot(qa, ey), dot(qa, ez)};
    double mz = m.z;
    double ms = std::hypot(m.x, m.y);
    if (ms < 1e-14) {
        if (mz > 0.0) return 1.0;  // same cone
        return 0.0;                // antipodal cones share only the equator
    }

    std::vector<double> cuts{0.0, 1.0};
    if (ms > 1e-13 && ms < 1.0 - 1e-13) cuts.push_back(ms);  // tangency latitude
    std::sort(cuts.begin(), cuts.end());

    auto f = [&](double c) {
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        return ring_sqrt_cone(c / PI, ms * s, mz * c, n_azimuthal);
    };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        // every panel end can carry a root-type kink (support edges and
        // tangency latitudes); the quartic substitution absorbs them all
        total += integrate_panel(f, cuts[k], cuts[k + 1], n_polar, 4, 4);
    }
    return std::min(total, 1.0 + 1e-12);
}

SphereGrid make_sphere_grid(const BlochVector& axis, double c_lo, double c_hi,
                            int n_polar, int n_azimuthal) {
    BlochVector ex, ey, ez;
    frame_about(axis, ex, ey, ez);
    const GaussNodes& g = gauss_legendre(n_polar);

    SphereGrid grid;
    grid.n_polar = n_polar;
    grid.n_azimuthal = n_azimuthal;
    grid.node.reserve(static_cast<std::size_t>(n_polar) * n_azimuthal);
    grid.weight.reserve(grid.node.capacity());
    grid.ctheta.resize(n_polar);
    grid.phi.resize(n_azimuthal);
    for (int j = 0; j < n_azimuthal; ++j)
        grid.phi[j] = TWO_PI * (j + 0.5) / n_azimuthal;  // midpoint rule, periodic

    double half = 0.5 * (c_hi - c_lo);
    for (int i = 0; i < n_polar; ++i) {
        double c = 0.5 * (c_lo + c_hi) + half * g.x[i];
        grid.ctheta[i] = c;
        double wc = half * g.w[i] * (TWO_PI / n_azimuthal);
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < n_azimuthal; ++j) {
            double cp = std::cos(grid.phi[j]), sp = std::sin(grid.phi[j]);
            BlochVector v = (s * cp) * ex + (s * sp) * ey + c * ez;
            grid.node.push_back(v);
            grid.weight.push_back(wc);
        }
    }
    return grid;
}

}  // namespace ontolab::quad
