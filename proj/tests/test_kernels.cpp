#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "gossip/kernels.hpp"

using namespace gossip::kernels;

namespace {

std::vector<const KernelTable*> variants() {
    std::vector<const KernelTable*> out;
    if (const auto* t = avx2_table()) out.push_back(t);
    if (const auto* t = neon_table()) out.push_back(t);
    return out;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t count, bool with_ties) {
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    std::vector<double> v(count);
    for (auto& x : v) x = with_ties ? std::floor(dist(rng)) : dist(rng);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar reference kernels") {
    const auto& s = scalar_table();
    const std::vector<double> v{3.0, 1.0, 2.0, 1.0};
    CHECK(s.argmin(v.data(), v.size()) == 1);
    CHECK(s.argmin(v.data(), 0) == 0);
    CHECK(s.sum(v.data(), v.size()) == 7.0);
    std::vector<double> y{1.0, 1.0, 1.0, 1.0};
    s.axpy(y.data(), v.data(), 2.0, y.size());
    CHECK(y == std::vector<double>{7.0, 3.0, 5.0, 3.0});
    s.add_scalar(y.data(), -1.0, y.size());
    CHECK(y == std::vector<double>{6.0, 2.0, 4.0, 2.0});

    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> clocks{inf, inf, 4.0, inf};
    CHECK(s.argmin(clocks.data(), clocks.size()) == 2);
}

TEST_CASE("active table is one of the compiled variants") {
    const auto& t = active();
    CHECK(t.argmin != nullptr);
    MESSAGE("active kernel ISA: " << to_string(t.isa));
}

TEST_CASE("property: SIMD variants agree with the scalar reference") {
    const auto& ref = scalar_table();
    std::mt19937_64 rng(2024);
    for (const KernelTable* simd : variants()) {
        for (std::size_t count = 0; count < 80; ++count) {
            for (int rep = 0; rep < 20; ++rep) {
                const bool ties = rep % 2 == 1;
                const auto v = random_values(rng, count, ties);
                CHECK(simd->argmin(v.data(), count) == ref.argmin(v.data(), count));

                const auto x = random_values(rng, count, false);
                auto y_ref = random_values(rng, count, false);
                auto y_simd = y_ref;
                ref.axpy(y_ref.data(), x.data(), 0.37, count);
                simd->axpy(y_simd.data(), x.data(), 0.37, count);
                CHECK(bitwise_equal(y_ref, y_simd));

                ref.add_scalar(y_ref.data(), 1.0, count);
                simd->add_scalar(y_simd.data(), 1.0, count);
                CHECK(bitwise_equal(y_ref, y_simd));

                const double a = ref.sum(v.data(), count);
                const double b = simd->sum(v.data(), count);
                CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)) * static_cast<double>(count + 1));
            }
        }
    }
}

TEST_CASE("argmin keeps the first of several equal minima") {
    for (const KernelTable* t : variants()) {
        std::vector<double> v(37, 9.0);
        v[29] = 1.0;
        v[6] = 1.0;
        v[13] = 1.0;
        CHECK(t->argmin(v.data(), v.size()) == 6);
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> clocks(21, inf);
        clocks[20] = 3.0;
        CHECK(t->argmin(clocks.data(), clocks.size()) == 20);
    }
}
