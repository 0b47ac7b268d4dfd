#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "valleyqed/lattice.hpp"
#include "valleyqed/sparse.hpp"

namespace vq {

// Off-diagonal structure of the Bloch Hamiltonian
// h(k) = [[Delta, J f(k)], [J f*(k), -Delta]].
cplx f_k(const Vec2& k, double a = 1.0);

// sqrt(Delta^2 + J^2 |f(k)|^2)
double band_energy(const Vec2& k, double delta, double J = 1.0, double a = 1.0);

// Eigenvector angles of h(k). varphi = arg f(k) is a gauge choice that is
// undefined where f vanishes; varphi_valid is false there.
struct BlochAngles {
    double theta = 0.0;
    double varphi = 0.0;
    bool varphi_valid = true;
};
BlochAngles bloch_angles(const Vec2& k, double delta, double J = 1.0, double a = 1.0);

struct BlochPoint {
    Vec2 k;
    cplx f;
    double omega;
    BlochAngles angles;
};
BlochPoint bloch_point(const Vec2& k, double delta, double J = 1.0, double a = 1.0);

Eigen::Matrix2cd bloch_hamiltonian(const Vec2& k, double delta, double J = 1.0, double a = 1.0);

// Dirac point K_tau = tau (2 pi / 3a, -2 pi / (3 sqrt3 a)), Dirac speed v = 3aJ/2.
struct ValleyFrame {
    int tau = 1;
    Vec2 K;
    double v = 1.5;
};
ValleyFrame valley_frame(int tau, double a = 1.0, double J = 1.0);
Vec2 dirac_point(int tau, double a = 1.0);
double dirac_speed(double a = 1.0, double J = 1.0);

// v (tau q_x sigma_x + q_y sigma_y) + Delta sigma_z
Eigen::Matrix2cd dirac_expansion(int tau, const Vec2& q, double delta, double v);

// z-component tau v^2 Delta / (2 (Delta^2 + v^2 q^2)^{3/2}).
// Throws DomainError when Delta = 0 and q = 0.
double berry_curvature_analytic(int tau, const Vec2& q, double delta, double v);

// Lattice Berry curvature by the plaquette (link-variable) method on the
// rhombic Brillouin zone spanned by b1, b2, sampled on grid x grid points.
// Plaquette centres are assigned to the valley whose Dirac-point image is
// nearest (the perpendicular bisector between K and K' images).
struct ValleyChern {
    double c_plus = 0.0;   // half zone around K
    double c_minus = 0.0;  // half zone around K'
    double total = 0.0;
};
ValleyChern valley_chern_numeric(double delta, double J, double a, int grid);
// Half-zone value for valley tau; requires Delta != 0 and grid >= 48.
double valley_chern_numeric(double delta, double J, double a, int tau, int grid);

// Per-plaquette lower-band Berry flux on the rhombic zone, flux(i, j) for the
// plaquette with corner k = (i b1 + j b2) / grid. Curvature = flux / area.
struct BerryFluxGrid {
    int grid = 0;
    double plaquette_area = 0.0;
    std::vector<double> flux;  // row-major (i, j)
    double at(int i, int j) const { return flux[static_cast<std::size_t>(i) * grid + j]; }
};
BerryFluxGrid lower_band_berry_flux(double delta, double J, double a, int grid);

// Which valley a momentum belongs to: +1 if nearest Dirac-point image is K,
// -1 if K'. Distance to that image returned through `distance`.
int nearest_valley(const Vec2& k, double a, double* distance = nullptr);

}  // namespace vq
