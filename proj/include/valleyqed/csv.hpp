#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "valleyqed/dynamics.hpp"
#include "valleyqed/edgemodes.hpp"
#include "valleyqed/observables.hpp"

namespace vq {

// Plain-text artifact writers. Every writer creates missing parent
// directories and throws ConfigError when the file cannot be written.

struct BandSample {
    Vec2 k;
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    double berry_lower = 0.0;  // plaquette curvature of the lower band
};

void write_bands_csv(const std::filesystem::path& path, const std::vector<BandSample>& samples);
void write_trajectory_csv(const std::filesystem::path& path, const EmissionTrajectory& trajectory);
void write_real_space_csv(const std::filesystem::path& path, const std::vector<SiteDensity>& density);
// Columns kx, ky (first-zone folded), rho (raw), rho_normalized (max 1).
void write_momentum_csv(const std::filesystem::path& path, const MomentumDensity& density);
void write_ribbon_csv(const std::filesystem::path& path, const RibbonSpectrum& spectrum);

struct ProfileRow {
    double x = 0.0;
    double psi_numeric = 0.0;
    double psi_analytic = 0.0;
};
void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileRow>& rows);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace vq
