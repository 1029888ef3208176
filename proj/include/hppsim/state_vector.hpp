#pragma once

#include <vector>

#include "hppsim/complex_matrix.hpp"

namespace hppsim {

// Dense amplitudes over an ordered list of registers. The first register is
// the most significant digit of the flat index.
struct StateVector {
    std::vector<int> dims;
    std::vector<cplx> amps;

    static StateVector basis(std::vector<int> dims, const std::vector<int>& digits);
    static StateVector zeros_basis(std::vector<int> dims);  // |0...0>

    long long total_dim() const;
    double norm() const;

    void validate() const;  // dims consistent with amplitude count, norm ~ 1
};

std::vector<long long> register_strides(const std::vector<int>& dims);

// |<a|b>| for equal-length amplitude vectors.
double overlap_abs(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace hppsim
