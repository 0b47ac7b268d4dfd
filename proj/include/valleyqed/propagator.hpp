#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "valleyqed/sparse.hpp"

namespace vq {

struct PropagatorOptions {
    // Truncation threshold on the Chebyshev coefficients of one step.
    double tolerance = 1e-10;
    // Iteration budget per substep; exceeding it is a NumericalError.
    std::size_t max_terms = 4096;
    // Steps with (spectral half-width) * dt above this are split into substeps.
    double max_scaled_step = 40.0;
};

// exp(-i H dt) applied through a Chebyshev expansion in the rescaled operator
// (H - c) / r, with [c - r, c + r] enclosing the Gershgorin bounds of H.
class ChebyshevPropagator {
public:
    explicit ChebyshevPropagator(const SparseHermitian& h, PropagatorOptions options = {});

    // psi <- exp(-i H dt) psi
    void step(std::span<cplx> psi, double dt);

    double spectral_centre() const { return centre_; }
    double spectral_half_width() const { return half_width_; }
    // Number of Chebyshev terms used by the most recent substep.
    std::size_t last_term_count() const { return last_terms_; }
    std::size_t total_matvecs() const { return matvecs_; }

private:
    void substep(std::span<cplx> psi, double dt);
    const std::vector<cplx>& coefficients(double dt);

    const SparseHermitian& h_;
    PropagatorOptions options_;
    double centre_ = 0.0;
    double half_width_ = 1.0;

    double cached_dt_ = 0.0;
    std::vector<cplx> cached_coefficients_;

    std::vector<cplx> prev_, curr_, next_, acc_;
    std::size_t last_terms_ = 0;
    std::size_t matvecs_ = 0;
};

}  // namespace vq
