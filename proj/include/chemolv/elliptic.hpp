#pragma once

// Symmetric tridiagonal Neumann operators on the cell-centred grid and
// the quasi-static chemical solve  (lambda I - d3 Lap_h) w = k u + l v.
// Ghost cells mirror the boundary value, so the boundary rows drop one
// neighbour. Every row of  (c I - d Lap_h)  therefore sums to c.

#include <chemolv/model.hpp>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace chemolv {

/// c I - d Lap_h with homogeneous Neumann conditions.
class NeumannOperator {
public:
    NeumannOperator(const Grid1D& grid, double diffusion, double reaction)
        : n_(grid.n_cells()), diag_(n_), off_(-diffusion / (grid.dx() * grid.dx())) {
        const double s = diffusion / (grid.dx() * grid.dx());
        for (std::size_t i = 0; i < n_; ++i) diag_[i] = reaction + 2.0 * s;
        diag_.front() = reaction + s;
        diag_.back() = reaction + s;
        factorize();
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::span<const double> diagonal() const noexcept { return diag_; }
    /// The (constant) sub/super-diagonal entry.
    [[nodiscard]] double off_diagonal() const noexcept { return off_; }

    /// y = A x
    [[nodiscard]] Field apply(std::span<const double> x) const {
        check_size(x.size());
        Field y(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = diag_[i] * x[i];
            if (i > 0) s += off_ * x[i - 1];
            if (i + 1 < n_) s += off_ * x[i + 1];
            y[i] = s;
        }
        return y;
    }

    /// Solves A x = rhs by forward elimination / back substitution using the
    /// pivots precomputed at construction.
    [[nodiscard]] Field solve(std::span<const double> rhs) const {
        check_size(rhs.size());
        Field x(n_);
        x[0] = rhs[0] / pivot_[0];
        for (std::size_t i = 1; i < n_; ++i) x[i] = (rhs[i] - off_ * x[i - 1]) / pivot_[i];
        for (std::size_t i = n_ - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
        return x;
    }

private:
    void factorize() {
        pivot_.resize(n_);
        upper_.resize(n_);
        pivot_[0] = diag_[0];
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            upper_[i] = off_ / pivot_[i];
            pivot_[i + 1] = diag_[i + 1] - off_ * upper_[i];
        }
        upper_[n_ - 1] = 0.0;
    }

    void check_size(std::size_t m) const {
        if (m != n_) throw std::invalid_argument("NeumannOperator: field size does not match grid");
    }

    std::size_t n_;
    std::vector<double> diag_;
    double off_;
    std::vector<double> pivot_;
    std::vector<double> upper_;
};

/// The chemical equation's operator together with its production rates.
class EllipticOperator {
public:
    EllipticOperator(const ModelParams& p, const Grid1D& grid)
        : op_(grid, p.d3, p.lambda), k_(p.k), l_(p.l) {}

    [[nodiscard]] const NeumannOperator& matrix() const noexcept { return op_; }

    [[nodiscard]] Field solve_w(std::span<const double> u, std::span<const double> v) const {
        if (u.size() != v.size()) throw std::invalid_argument("solve_w: u and v differ in size");
        Field rhs(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = k_ * u[i] + l_ * v[i];
        return op_.solve(rhs);
    }

private:
    NeumannOperator op_;
    double k_;
    double l_;
};

[[nodiscard]] inline EllipticOperator assemble(const ModelParams& p, const Grid1D& grid) {
    return EllipticOperator(p, grid);
}

[[nodiscard]] inline Field solve_w(const EllipticOperator& op, std::span<const double> u,
                                   std::span<const double> v) {
    return op.solve_w(u, v);
}

}  // namespace chemolv
