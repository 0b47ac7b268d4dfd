#include "valleyqed/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace vq {

SparseHermitian::Builder::Builder(std::size_t dimension) : dimension_(dimension) {}

SparseHermitian::Builder::Builder(const SparseHermitian& base, std::size_t dimension)
    : dimension_(dimension) {
    if (dimension < base.dimension()) {
        throw std::invalid_argument("SparseHermitian::Builder: cannot shrink an operator");
    }
    for (std::size_t r = 0; r < base.dimension(); ++r) {
        auto cols = base.row_columns(r);
        auto vals = base.row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] >= r) upper_.push_back({r, cols[k], vals[k]});
        }
    }
}

SparseHermitian::Builder& SparseHermitian::Builder::add_diagonal(std::size_t i, double value) {
    if (i >= dimension_) throw std::out_of_range("add_diagonal: index out of range");
    upper_.push_back({i, i, cplx(value, 0.0)});
    return *this;
}

SparseHermitian::Builder& SparseHermitian::Builder::add_coupling(std::size_t i, std::size_t j, cplx value) {
    if (i >= dimension_ || j >= dimension_) throw std::out_of_range("add_coupling: index out of range");
    if (i == j) throw std::invalid_argument("add_coupling: use add_diagonal for i == j");
    if (i < j) {
        upper_.push_back({i, j, value});
    } else {
        upper_.push_back({j, i, std::conj(value)});
    }
    return *this;
}

SparseHermitian SparseHermitian::Builder::build() const {
    std::vector<Entry> upper = upper_;
    std::sort(upper.begin(), upper.end(), [](const Entry& x, const Entry& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    std::vector<Entry> merged;
    merged.reserve(upper.size());
    for (const auto& e : upper) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
            merged.back().value += e.value;
        } else {
            merged.push_back(e);
        }
    }

    std::vector<Entry> all;
    all.reserve(2 * merged.size());
    for (const auto& e : merged) {
        all.push_back(e);
        if (e.row != e.col) all.push_back({e.col, e.row, std::conj(e.value)});
    }
    std::sort(all.begin(), all.end(), [](const Entry& x, const Entry& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });

    SparseHermitian h;
    h.row_start_.assign(dimension_ + 1, 0);
    h.columns_.reserve(all.size());
    h.values_.reserve(all.size());
    for (const auto& e : all) {
        ++h.row_start_[e.row + 1];
        h.columns_.push_back(e.col);
        h.values_.push_back(e.value);
    }
    for (std::size_t r = 0; r < dimension_; ++r) h.row_start_[r + 1] += h.row_start_[r];
    return h;
}

std::span<const std::size_t> SparseHermitian::row_columns(std::size_t row) const {
    return {columns_.data() + row_start_[row], row_nonzeros(row)};
}

std::span<const cplx> SparseHermitian::row_values(std::size_t row) const {
    return {values_.data() + row_start_[row], row_nonzeros(row)};
}

cplx SparseHermitian::coefficient(std::size_t row, std::size_t col) const {
    auto cols = row_columns(row);
    auto it = std::lower_bound(cols.begin(), cols.end(), col);
    if (it == cols.end() || *it != col) return {0.0, 0.0};
    return row_values(row)[static_cast<std::size_t>(it - cols.begin())];
}

void SparseHermitian::apply(std::span<const cplx> x, std::span<cplx> y) const {
    const auto n = static_cast<std::ptrdiff_t>(dimension());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        cplx acc = 0.0;
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) acc += values_[k] * x[columns_[k]];
        y[r] = acc;
    }
}

void SparseHermitian::apply_shifted(std::span<const cplx> x, std::span<cplx> y, double shift,
                                    double scale) const {
    const auto n = static_cast<std::ptrdiff_t>(dimension());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        cplx acc = -shift * x[r];
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) acc += values_[k] * x[columns_[k]];
        y[r] = acc * scale;
    }
}

bool SparseHermitian::is_exactly_hermitian() const {
    for (std::size_t r = 0; r < dimension(); ++r) {
        auto cols = row_columns(r);
        auto vals = row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (coefficient(cols[k], r) != std::conj(vals[k])) return false;
        }
    }
    return true;
}

std::pair<double, double> SparseHermitian::gershgorin_bounds() const {
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t r = 0; r < dimension(); ++r) {
        double centre = 0.0;
        double radius = 0.0;
        auto cols = row_columns(r);
        auto vals = row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == r) {
                centre = vals[k].real();
            } else {
                radius += std::abs(vals[k]);
            }
        }
        if (r == 0 || centre - radius < lo) lo = centre - radius;
        if (r == 0 || centre + radius > hi) hi = centre + radius;
    }
    return {lo, hi};
}

double SparseHermitian::trace() const {
    double t = 0.0;
    for (std::size_t r = 0; r < dimension(); ++r) t += coefficient(r, r).real();
    return t;
}

std::vector<SparseHermitian::Entry> SparseHermitian::entries() const {
    std::vector<Entry> out;
    out.reserve(nonzeros());
    for (std::size_t r = 0; r < dimension(); ++r) {
        auto cols = row_columns(r);
        auto vals = row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) out.push_back({r, cols[k], vals[k]});
    }
    return out;
}

Eigen::MatrixXcd SparseHermitian::to_dense() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& e : entries()) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    return m;
}

void SparseHermitian::write_coo(std::ostream& out) const {
    const auto old_precision = out.precision(17);
    for (const auto& e : entries()) {
        out << e.row << ' ' << e.col << ' ' << e.value.real() << ' ' << e.value.imag() << '\n';
    }
    out.precision(old_precision);
}

double expectation(const SparseHermitian& h, std::span<const cplx> x) {
    std::vector<cplx> hx(x.size());
    h.apply(x, hx);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * hx[i];
    return acc.real();
}

}  // namespace vq
