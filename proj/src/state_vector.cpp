#include "hppsim/state_vector.hpp"

#include <cmath>
#include <stdexcept>

namespace hppsim {

std::vector<long long> register_strides(const std::vector<int>& dims) {
    std::vector<long long> strides(dims.size(), 1);
    for (size_t i = dims.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * dims[i];
    }
    return strides;
}

StateVector StateVector::basis(std::vector<int> dims, const std::vector<int>& digits) {
    if (digits.size() != dims.size()) {
        throw std::invalid_argument("StateVector::basis: digit count mismatch");
    }
    StateVector s;
    s.dims = std::move(dims);
    long long idx = 0;
    for (size_t i = 0; i < s.dims.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= s.dims[i]) {
            throw std::invalid_argument("StateVector::basis: digit out of range");
        }
        idx = idx * s.dims[i] + digits[i];
    }
    s.amps.assign(static_cast<size_t>(s.total_dim()), cplx{0.0, 0.0});
    s.amps[static_cast<size_t>(idx)] = 1.0;
    return s;
}

StateVector StateVector::zeros_basis(std::vector<int> dims) {
    std::vector<int> digits(dims.size(), 0);
    return basis(std::move(dims), digits);
}

long long StateVector::total_dim() const {
    long long d = 1;
    for (int v : dims) d *= v;
    return d;
}

double StateVector::norm() const {
    double sq = 0.0;
    for (const auto& a : amps) sq += std::norm(a);
    return std::sqrt(sq);
}

void StateVector::validate() const {
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("StateVector: register dims must be >= 1");
    }
    if (static_cast<long long>(amps.size()) != total_dim()) {
        throw std::invalid_argument("StateVector: amplitude count mismatch");
    }
    if (std::abs(norm() - 1.0) > kDefaultTol) {
        throw std::invalid_argument("StateVector: not normalised");
    }
}

double overlap_abs(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("overlap_abs: length mismatch");
    cplx acc{0.0, 0.0};
    for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return std::abs(acc);
}

}  // namespace hppsim
