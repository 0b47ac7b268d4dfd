#include "valleyqed/csv.hpp"

#include <fstream>
#include <limits>

#include "valleyqed/errors.hpp"

namespace vq {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    out.precision(std::numeric_limits<double>::max_digits10);
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw ConfigError("failed while writing " + path.string());
}

}  // namespace

void write_bands_csv(const std::filesystem::path& path, const std::vector<BandSample>& samples) {
    auto out = open_output(path);
    out << "kx,ky,omega_plus,omega_minus,berry_lower\n";
    for (const auto& s : samples) {
        out << s.k.x() << ',' << s.k.y() << ',' << s.omega_plus << ',' << s.omega_minus << ',' << s.berry_lower
            << '\n';
    }
    finish(out, path);
}

void write_trajectory_csv(const std::filesystem::path& path, const EmissionTrajectory& trajectory) {
    auto out = open_output(path);
    out << "t,population\n";
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        out << trajectory.times[i] << ',' << trajectory.populations[i] << '\n';
    }
    finish(out, path);
}

void write_real_space_csv(const std::filesystem::path& path, const std::vector<SiteDensity>& density) {
    auto out = open_output(path);
    out << "x,y,sublattice,density\n";
    for (const auto& d : density) {
        out << d.position.x() << ',' << d.position.y() << ',' << (d.sublattice == Sublattice::A ? 'A' : 'B') << ','
            << d.density << '\n';
    }
    finish(out, path);
}

void write_momentum_csv(const std::filesystem::path& path, const MomentumDensity& density) {
    auto out = open_output(path);
    const double peak = density.max();
    out << "kx,ky,rho,rho_normalized\n";
    for (std::size_t i = 0; i < density.rho.size(); ++i) {
        out << density.k_folded[i].x() << ',' << density.k_folded[i].y() << ',' << density.rho[i] << ','
            << (peak > 0.0 ? density.rho[i] / peak : 0.0) << '\n';
    }
    finish(out, path);
}

void write_ribbon_csv(const std::filesystem::path& path, const RibbonSpectrum& spectrum) {
    auto out = open_output(path);
    out << "ky,band_index,omega,in_gap\n";
    for (std::size_t i = 0; i < spectrum.ky.size(); ++i) {
        const auto& w = spectrum.eigenvalues[i];
        for (Eigen::Index b = 0; b < w.size(); ++b) {
            out << spectrum.ky[i] << ',' << b << ',' << w[b] << ',' << (spectrum.in_gap(w[b]) ? 1 : 0) << '\n';
        }
    }
    finish(out, path);
}

void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileRow>& rows) {
    auto out = open_output(path);
    out << "x,psi_numeric,psi_analytic\n";
    for (const auto& r : rows) out << r.x << ',' << r.psi_numeric << ',' << r.psi_analytic << '\n';
    finish(out, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
    auto out = open_output(path);
    out << value.dump(2) << '\n';
    finish(out, path);
}

}  // namespace vq
