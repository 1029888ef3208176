#include "hppsim/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hppsim {

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) {
        throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    }
    e_.assign(static_cast<size_t>(rows) * cols, cplx{0.0, 0.0});
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = static_cast<int>(rows.size());
    if (rows_ == 0) throw std::invalid_argument("ComplexMatrix: empty initializer");
    cols_ = static_cast<int>(rows.begin()->size());
    e_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols_) {
            throw std::invalid_argument("ComplexMatrix: ragged initializer");
        }
        e_.insert(e_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.at(c, r) = std::conj(at(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
}

ComplexMatrix ComplexMatrix::scaled(cplx factor) const {
    ComplexMatrix out = *this;
    for (auto& v : out.e_) v *= factor;
    return out;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& v : e_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("ComplexMatrix: shape mismatch in +=");
    }
    for (size_t i = 0; i < e_.size(); ++i) e_[i] += other.e_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("ComplexMatrix: shape mismatch in -=");
    }
    for (size_t i = 0; i < e_.size(); ++i) e_[i] -= other.e_[i];
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions differ (" +
                                    std::to_string(a.cols()) + " vs " +
                                    std::to_string(b.rows()) + ")");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int k = 0; k < a.cols(); ++k) {
            const cplx av = a.at(r, k);
            if (av == cplx{0.0, 0.0}) continue;
            for (int c = 0; c < b.cols(); ++c) out.at(r, c) += av * b.at(k, c);
        }
    }
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cplx av = a.at(i, j);
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l) {
                    out.at(i * b.rows() + k, j * b.cols() + l) = av * b.at(k, l);
                }
        }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    auto ae = a.entries(), be = b.entries();
    for (size_t i = 0; i < ae.size(); ++i) m = std::max(m, std::abs(ae[i] - be[i]));
    return m;
}

double max_abs(const ComplexMatrix& m) {
    double r = 0.0;
    for (const auto& v : m.entries()) r = std::max(r, std::abs(v));
    return r;
}

cplx trace(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("trace: matrix not square");
    cplx t{0.0, 0.0};
    for (int i = 0; i < m.rows(); ++i) t += m.at(i, i);
    return t;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    ComplexMatrix prod = matmul(m.dagger(), m);
    return max_abs_diff(prod, ComplexMatrix::identity(m.rows())) <= tol;
}

UnitaryGate::UnitaryGate(ComplexMatrix m, double tol) : matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("UnitaryGate: matrix not square");
    }
    if (!matrix.all_finite()) {
        throw std::invalid_argument("UnitaryGate: non-finite entries");
    }
    if (!is_unitary(matrix, tol)) {
        throw std::invalid_argument("UnitaryGate: matrix not unitary within tolerance");
    }
}

UnitaryGate pauli(char name) {
    switch (name) {
        case 'I':
            return UnitaryGate(ComplexMatrix::identity(2));
        case 'X':
            return UnitaryGate(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
        case 'Y':
            return UnitaryGate(ComplexMatrix{{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}});
        case 'Z':
            return UnitaryGate(ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}});
        default:
            throw std::invalid_argument(std::string("pauli: unknown name '") + name + "'");
    }
}

ComplexMatrix product_of_permutation(std::span<const UnitaryGate> gates,
                                     std::span<const int> order) {
    if (gates.empty()) throw std::invalid_argument("product_of_permutation: no gates");
    const int dim = gates[0].dim();
    for (const auto& g : gates) {
        if (g.dim() != dim) {
            throw std::invalid_argument("product_of_permutation: mixed gate dimensions");
        }
    }
    ComplexMatrix m = ComplexMatrix::identity(dim);
    for (int idx : order) {
        if (idx < 0 || idx >= static_cast<int>(gates.size())) {
            throw std::invalid_argument("product_of_permutation: gate index out of range");
        }
        // Applied later means multiplied from the left.
        m = matmul(gates[idx].matrix, m);
    }
    return m;
}

std::optional<int> proportionality_sign(const ComplexMatrix& a, const ComplexMatrix& b,
                                        double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("proportionality_sign: shape mismatch");
    }
    if (!is_unitary(b, std::max(tol, kDefaultTol))) {
        throw std::invalid_argument("proportionality_sign: reference matrix not unitary");
    }
    if (max_abs_diff(a, b) <= tol) return 1;
    if (max_abs_diff(a, b.scaled(-1.0)) <= tol) return -1;
    return std::nullopt;
}

}  // namespace hppsim
