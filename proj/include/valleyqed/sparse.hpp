#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace vq {

using cplx = std::complex<double>;

// Hermitian operator in compressed-row storage. Both halves of every
// off-diagonal pair are stored; the lower one is generated as the exact
// conjugate of the upper one, so H == H^dagger bit for bit.
class SparseHermitian {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        cplx value;
    };

    class Builder {
    public:
        explicit Builder(std::size_t dimension);
        // Start from an existing operator, embedded in a (possibly) larger space.
        Builder(const SparseHermitian& base, std::size_t dimension);

        Builder& add_diagonal(std::size_t i, double value);
        // Adds value at (i, j) and conj(value) at (j, i). Requires i != j.
        Builder& add_coupling(std::size_t i, std::size_t j, cplx value);

        // Duplicate (row, col) contributions are summed.
        SparseHermitian build() const;

    private:
        std::size_t dimension_;
        std::vector<Entry> upper_;  // row <= col
    };

    SparseHermitian() = default;

    std::size_t dimension() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
    std::size_t nonzeros() const { return values_.size(); }
    std::size_t row_nonzeros(std::size_t row) const { return row_start_[row + 1] - row_start_[row]; }

    std::span<const std::size_t> row_columns(std::size_t row) const;
    std::span<const cplx> row_values(std::size_t row) const;
    cplx coefficient(std::size_t row, std::size_t col) const;

    // y = H x. Rows are independent, so a row-partitioned parallel loop gives
    // bit-identical results for any thread count.
    void apply(std::span<const cplx> x, std::span<cplx> y) const;
    // y = (H x - shift x) * scale
    void apply_shifted(std::span<const cplx> x, std::span<cplx> y, double shift, double scale) const;

    bool is_exactly_hermitian() const;
    // Lower/upper bound of the spectrum from Gershgorin discs.
    std::pair<double, double> gershgorin_bounds() const;

    double trace() const;
    std::vector<Entry> entries() const;
    Eigen::MatrixXcd to_dense() const;

    // Coordinate list "row col re im", one entry per line, row-major order.
    void write_coo(std::ostream& out) const;

private:
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> columns_;
    std::vector<cplx> values_;
};

// <x|H|x>
double expectation(const SparseHermitian& h, std::span<const cplx> x);

}  // namespace vq
