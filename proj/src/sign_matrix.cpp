#include "hppsim/sign_matrix.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hppsim {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_size(int size) {
    if (size <= 0) throw std::invalid_argument("SignMatrix: size must be positive");
    if (size > kMaxSignMatrixSize) {
        throw std::length_error("SignMatrix: size " + std::to_string(size) +
                                " exceeds dense storage cap " +
                                std::to_string(kMaxSignMatrixSize));
    }
}

}  // namespace

SignMatrix::SignMatrix(int size) : size_(size) {
    check_size(size);
    e_.assign(static_cast<size_t>(size) * size, int8_t{1});
    sylvester_ = (size == 1);
}

void SignMatrix::set(int x, int y, int value) {
    if (value != 1 && value != -1) {
        throw std::invalid_argument("SignMatrix: entries must be +1 or -1");
    }
    e_[static_cast<size_t>(y) * size_ + x] = static_cast<int8_t>(value);
    sylvester_ = false;
}

SignMatrix sylvester(int k) {
    if (k < 0 || k > 20) throw std::invalid_argument("sylvester: k out of range [0, 20]");
    if (k > 15) {
        throw std::length_error("sylvester: 2^" + std::to_string(k) +
                                " exceeds the dense storage cap");
    }
    const int n = 1 << k;
    SignMatrix s(n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (std::popcount(static_cast<unsigned>(x & y)) & 1) s.set(x, y, -1);
        }
    }
    s.mark_sylvester(true);
    return s;
}

bool is_hadamard(const SignMatrix& s) {
    const int n = s.size();
    if (n == 1) return true;
    if (n % 2 != 0) return false;
    // Pack rows into bitsets (bit = 1 for a -1 entry). Two rows are orthogonal
    // iff they disagree in exactly n/2 positions.
    const int words = (n + 63) / 64;
    std::vector<uint64_t> bits(static_cast<size_t>(n) * words, 0);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (s.sign(x, y) < 0) {
                bits[static_cast<size_t>(y) * words + x / 64] |= uint64_t{1} << (x % 64);
            }
        }
    }
    for (int y = 0; y < n; ++y) {
        for (int y2 = y + 1; y2 < n; ++y2) {
            int disagree = 0;
            const uint64_t* a = &bits[static_cast<size_t>(y) * words];
            const uint64_t* b = &bits[static_cast<size_t>(y2) * words];
            for (int w = 0; w < words; ++w) disagree += std::popcount(a[w] ^ b[w]);
            if (disagree * 2 != n) return false;
        }
    }
    return true;
}

SignMatrix kron_sign(const SignMatrix& s1, const SignMatrix& s2) {
    // Full Hadamard verification is cubic; skip it above this size. Every
    // matrix this project composes at larger sizes came out of this very
    // function or sylvester(), and the closure property is covered by tests.
    constexpr int kVerifyLimit = 4096;
    if (s1.size() <= kVerifyLimit && !is_hadamard(s1)) {
        throw std::invalid_argument("kron_sign: first factor is not Hadamard");
    }
    if (s2.size() <= kVerifyLimit && !is_hadamard(s2)) {
        throw std::invalid_argument("kron_sign: second factor is not Hadamard");
    }
    const int m = s1.size(), n = s2.size();
    check_size(m > kMaxSignMatrixSize / n ? kMaxSignMatrixSize + 1 : m * n);
    SignMatrix out(m * n);
    for (int y2 = 0; y2 < n; ++y2)
        for (int y1 = 0; y1 < m; ++y1) {
            const int y = y2 * m + y1;
            for (int x2 = 0; x2 < n; ++x2) {
                const int s2v = s2.sign(x2, y2);
                for (int x1 = 0; x1 < m; ++x1) {
                    out.set(x2 * m + x1, y, s2v * s1.sign(x1, y1));
                }
            }
        }
    out.mark_sylvester(s1.is_sylvester() && s2.is_sylvester());
    return out;
}

ComplexMatrix hadamard_unitary(const SignMatrix& s) {
    const int n = s.size();
    if (n > kMaxDenseUnitarySize) {
        throw std::length_error("hadamard_unitary: size too large to materialise");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexMatrix h(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) h.at(x, y) = s.sign(x, y) * scale;
    return h;
}

ComplexMatrix inverse_hadamard_unitary(const SignMatrix& s) {
    return hadamard_unitary(s).transpose();
}

void fwht_inplace(std::span<cplx> data) {
    const size_t n = data.size();
    if (!power_of_two(static_cast<int>(n))) {
        throw std::invalid_argument("fwht_inplace: length must be a power of two");
    }
    for (size_t h = 1; h < n; h *= 2) {
        for (size_t i = 0; i < n; i += 2 * h) {
            for (size_t j = i; j < i + h; ++j) {
                const cplx a = data[j];
                const cplx b = data[j + h];
                data[j] = a + b;
                data[j + h] = a - b;
            }
        }
    }
}

void apply_hadamard_transform(const SignMatrix& s, std::span<cplx> column, bool inverse) {
    const int n = s.size();
    if (static_cast<int>(column.size()) != n) {
        throw std::invalid_argument("apply_hadamard_transform: column length mismatch");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    if (s.is_sylvester()) {
        // Symmetric, so forward and inverse coincide.
        fwht_inplace(column);
        for (auto& v : column) v *= scale;
        return;
    }
    std::vector<cplx> out(static_cast<size_t>(n), cplx{0.0, 0.0});
    if (inverse) {
        for (int y = 0; y < n; ++y) {
            cplx acc{0.0, 0.0};
            auto r = s.row(y);
            for (int x = 0; x < n; ++x) acc += static_cast<double>(r[x]) * column[x];
            out[y] = acc * scale;
        }
    } else {
        for (int y = 0; y < n; ++y) {
            auto r = s.row(y);
            const cplx v = column[y];
            for (int x = 0; x < n; ++x) out[x] += static_cast<double>(r[x]) * v;
        }
        for (auto& v : out) v *= scale;
    }
    std::copy(out.begin(), out.end(), column.begin());
}

}  // namespace hppsim
