#include <random>

#include "doctest.h"

#include "hppsim/sign_matrix.hpp"
#include "test_support.hpp"

using namespace hppsim;

namespace {

SignMatrix random_sign_flipped(std::mt19937_64& rng, int k) {
    // Row/column sign flips preserve the Hadamard property.
    SignMatrix s = sylvester(k);
    const int n = s.size();
    std::bernoulli_distribution flip(0.5);
    std::vector<int> row_flip(static_cast<size_t>(n)), col_flip(static_cast<size_t>(n));
    for (auto& f : row_flip) f = flip(rng) ? -1 : 1;
    for (auto& f : col_flip) f = flip(rng) ? -1 : 1;
    SignMatrix out(n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            out.set(x, y, s.sign(x, y) * row_flip[static_cast<size_t>(y)] *
                              col_flip[static_cast<size_t>(x)]);
        }
    return out;
}

}  // namespace

TEST_CASE("sylvester small cases") {
    const SignMatrix s0 = sylvester(0);
    CHECK(s0.size() == 1);
    CHECK(s0.sign(0, 0) == 1);

    const SignMatrix s1 = sylvester(1);
    CHECK(s1.sign(0, 0) == 1);
    CHECK(s1.sign(1, 0) == 1);
    CHECK(s1.sign(0, 1) == 1);
    CHECK(s1.sign(1, 1) == -1);

    // The four rows of the two-level instance's sign matrix, as a set.
    const SignMatrix s2 = sylvester(2);
    auto row = [&](int y) {
        std::vector<int> r;
        for (int x = 0; x < 4; ++x) r.push_back(s2.sign(x, y));
        return r;
    };
    std::vector<std::vector<int>> rows = {row(0), row(1), row(2), row(3)};
    std::vector<std::vector<int>> expected = {{1, 1, 1, 1},
                                              {1, 1, -1, -1},
                                              {1, -1, 1, -1},
                                              {1, -1, -1, 1}};
    for (const auto& e : expected) {
        CHECK(std::count(rows.begin(), rows.end(), e) == 1);
    }

    CHECK_THROWS_AS(sylvester(21), std::invalid_argument);
    CHECK_THROWS_AS(sylvester(16), std::length_error);
}

TEST_CASE("sylvester matrices are Hadamard up to k = 10") {
    for (int k = 0; k <= 10; ++k) {
        CHECK(is_hadamard(sylvester(k)));
        CHECK(sylvester(k).is_sylvester());
    }
}

TEST_CASE("is_hadamard rejects broken matrices") {
    SignMatrix bad = sylvester(2);
    bad.set(0, 0, -1);
    CHECK(!is_hadamard(bad));
    SignMatrix allplus(4);
    CHECK(!is_hadamard(allplus));
}

TEST_CASE("kron_sign neutral element and doubling") {
    const SignMatrix s1 = sylvester(1);
    CHECK(kron_sign(s1, sylvester(0)) == s1);
    CHECK(kron_sign(sylvester(0), s1) == s1);
    CHECK(kron_sign(s1, s1) == sylvester(2));
    CHECK(kron_sign(kron_sign(s1, s1), s1) == sylvester(3));
    CHECK(kron_sign(s1, s1).is_sylvester());
}

TEST_CASE("kron_sign output stays Hadamard") {
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
            CHECK(is_hadamard(kron_sign(sylvester(a), sylvester(b))));
        }
    }
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> pick(0, 3);
        const SignMatrix a = random_sign_flipped(rng, pick(rng));
        const SignMatrix b = random_sign_flipped(rng, pick(rng));
        REQUIRE(is_hadamard(a));
        REQUIRE(is_hadamard(b));
        CHECK(is_hadamard(kron_sign(a, b)));
    }
    SignMatrix bad(2);
    CHECK_THROWS_AS(kron_sign(bad, sylvester(1)), std::invalid_argument);
}

TEST_CASE("kron_sign index convention: outer index varies fastest") {
    std::mt19937_64 rng(37);
    const SignMatrix a = random_sign_flipped(rng, 1);
    const SignMatrix b = random_sign_flipped(rng, 2);
    const SignMatrix k = kron_sign(a, b);
    for (int y2 = 0; y2 < b.size(); ++y2)
        for (int y1 = 0; y1 < a.size(); ++y1)
            for (int x2 = 0; x2 < b.size(); ++x2)
                for (int x1 = 0; x1 < a.size(); ++x1) {
                    CHECK(k.sign(x2 * a.size() + x1, y2 * a.size() + y1) ==
                          b.sign(x2, y2) * a.sign(x1, y1));
                }
}

TEST_CASE("hadamard_unitary values and unitarity") {
    CHECK(max_abs_diff(hadamard_unitary(sylvester(0)), ComplexMatrix::identity(1)) == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    CHECK(max_abs_diff(hadamard_unitary(sylvester(1)), ComplexMatrix{{r, r}, {r, -r}}) <
          1e-15);

    for (int k = 0; k <= 9; ++k) {  // sizes up to 512
        const ComplexMatrix h = hadamard_unitary(sylvester(k));
        CHECK(max_abs_diff(matmul(h.dagger(), h), ComplexMatrix::identity(1 << k)) <= 1e-12);
    }
    std::mt19937_64 rng(41);
    const ComplexMatrix h = hadamard_unitary(random_sign_flipped(rng, 3));
    CHECK(max_abs_diff(matmul(h.dagger(), h), ComplexMatrix::identity(8)) <= 1e-12);
}

TEST_CASE("inverse_hadamard_unitary inverts the forward transform") {
    for (int k : {0, 1, 2, 9}) {
        const SignMatrix s = sylvester(k);
        const ComplexMatrix prod = matmul(inverse_hadamard_unitary(s), hadamard_unitary(s));
        CHECK(max_abs_diff(prod, ComplexMatrix::identity(s.size())) <= 1e-12);
    }
}

TEST_CASE("the inverse transform maps a sign column back to its basis state") {
    const SignMatrix s = sylvester(3);
    const int n = s.size();
    for (int y = 0; y < n; ++y) {
        std::vector<cplx> col(static_cast<size_t>(n));
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int x = 0; x < n; ++x) col[static_cast<size_t>(x)] = scale * s.sign(x, y);
        apply_hadamard_transform(s, col, /*inverse=*/true);
        for (int v = 0; v < n; ++v) {
            CHECK(std::abs(col[static_cast<size_t>(v)] - (v == y ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("butterfly transform matches the dense sign multiply") {
    std::mt19937_64 rng(43);
    for (int k = 0; k <= 8; ++k) {
        const SignMatrix s = sylvester(k);
        SignMatrix dense_copy = s;
        dense_copy.mark_sylvester(false);  // force the dense path
        auto v = hppsim::testing::random_state(rng, s.size());
        auto fast = v;
        auto slow = v;
        apply_hadamard_transform(s, fast, true);
        apply_hadamard_transform(dense_copy, slow, true);
        for (size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) < 1e-12);
        fast = v;
        slow = v;
        apply_hadamard_transform(s, fast, false);
        apply_hadamard_transform(dense_copy, slow, false);
        for (size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) < 1e-12);
    }
}
