#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hppsim/complex_matrix.hpp"

namespace hppsim {

// Largest sign matrix we store densely (covers instances with up to 16 gates
// when every composition step doubles the permutation count).
inline constexpr int kMaxSignMatrixSize = 1 << 15;

// Largest size for which hadamard_unitary materialises the dense complex
// matrix; solvers apply the transform without building it.
inline constexpr int kMaxDenseUnitarySize = 2048;

// A +-1 matrix s(x, y) indexed by column x and row y. Row y holds the sign
// pattern of one promise solution.
class SignMatrix {
public:
    explicit SignMatrix(int size);

    int size() const { return size_; }

    int sign(int x, int y) const { return e_[static_cast<size_t>(y) * size_ + x]; }

    void set(int x, int y, int value);

    std::span<const int8_t> row(int y) const {
        return {e_.data() + static_cast<size_t>(y) * size_, static_cast<size_t>(size_)};
    }

    // True when this matrix is known to have entries (-1)^(popcount(x & y)).
    // Maintained by the constructors; set() clears it. Lets transforms take
    // the butterfly fast path.
    bool is_sylvester() const { return sylvester_; }
    void mark_sylvester(bool v) { sylvester_ = v; }

    bool operator==(const SignMatrix& other) const {
        return size_ == other.size_ && e_ == other.e_;
    }

private:
    int size_ = 0;
    bool sylvester_ = false;
    std::vector<int8_t> e_;
};

// The 2^k x 2^k matrix with s(x, y) = (-1)^(<x, y>), <.,.> the bitwise dot
// product of the binary expansions.
SignMatrix sylvester(int k);

// Exact row-orthogonality check: sum_x s(x,y) s(x,y') = n * delta(y, y').
bool is_hadamard(const SignMatrix& s);

// Composite of two sign matrices with s((x1,x2),(y1,y2)) = s2(x2,y2)*s1(x1,y1)
// under the fixed index convention x = x2 * size1 + x1 (and likewise for y):
// the outer index varies fastest. Both inputs must be Hadamard.
SignMatrix kron_sign(const SignMatrix& s1, const SignMatrix& s2);

// The unitary whose column y has entries s(x, y) / sqrt(n).
ComplexMatrix hadamard_unitary(const SignMatrix& s);

// Transpose of hadamard_unitary (entries are real, so this is the inverse).
ComplexMatrix inverse_hadamard_unitary(const SignMatrix& s);

// In-place unnormalised Walsh-Hadamard butterflies:
// out[x] = sum_y (-1)^(popcount(x & y)) in[y]. Length must be a power of two.
void fwht_inplace(std::span<cplx> data);

// Applies the (inverse) Hadamard transform associated with s to a column of
// amplitudes of length s.size(). inverse=false: out[x] = sum_y s(x,y) in[y] / sqrt(n);
// inverse=true: out[y] = sum_x s(x,y) in[x] / sqrt(n). Uses the butterfly
// fast path when the matrix is known Sylvester.
void apply_hadamard_transform(const SignMatrix& s, std::span<cplx> column, bool inverse);

}  // namespace hppsim
