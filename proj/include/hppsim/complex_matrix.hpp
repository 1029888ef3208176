#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace hppsim {

using cplx = std::complex<double>;

// Single entrywise tolerance shared by all equality / unitarity /
// proportionality checks in this project. Gate products chain at most a few
// dozen 2x2 factors, so double precision keeps errors far below this.
inline constexpr double kDefaultTol = 1e-9;

// Dense complex matrix, row-major. Sizes stay small (gates are 2x2, Hadamard
// unitaries up to a few thousand), so no sparse or blocked variants.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& at(int r, int c) { return e_[static_cast<size_t>(r) * cols_ + c]; }
    const cplx& at(int r, int c) const { return e_[static_cast<size_t>(r) * cols_ + c]; }

    std::span<const cplx> entries() const { return e_; }
    std::span<cplx> entries() { return e_; }

    ComplexMatrix dagger() const;
    ComplexMatrix transpose() const;
    ComplexMatrix scaled(cplx factor) const;

    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> e_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);

// Exact matrix product. Throws std::invalid_argument on a dimension mismatch.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// Kronecker product. Composite index convention: row (i, k) of the result is
// i * b.rows() + k, i.e. the left factor is the high digit.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Largest entrywise |a - b|. Shapes must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& m);

cplx trace(const ComplexMatrix& m);

bool is_unitary(const ComplexMatrix& m, double tol = kDefaultTol);

// A unitary gate of dimension dim (2 everywhere in this project). The
// constructor validates unitarity entrywise.
struct UnitaryGate {
    ComplexMatrix matrix;

    UnitaryGate() : matrix(ComplexMatrix::identity(2)) {}
    explicit UnitaryGate(ComplexMatrix m, double tol = kDefaultTol);

    int dim() const { return matrix.rows(); }
};

// Standard Pauli matrices; name is one of 'I', 'X', 'Y', 'Z'.
UnitaryGate pauli(char name);

// Matrix of the permuted gate product: `order` lists gate indices in
// application order (first applied first), so the first entry is the
// rightmost matrix factor.
ComplexMatrix product_of_permutation(std::span<const UnitaryGate> gates,
                                     std::span<const int> order);

// Decides whether a == +b or a == -b entrywise within tol. Returns +1, -1, or
// nullopt when a is not proportional to b by a sign. b must be unitary.
std::optional<int> proportionality_sign(const ComplexMatrix& a,
                                        const ComplexMatrix& b,
                                        double tol = kDefaultTol);

}  // namespace hppsim
