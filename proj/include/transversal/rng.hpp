#pragma once

#include <cstdint>

#include "transversal/vec.hpp"

namespace trv {

// Counter-based generator: every value is a stateless mix of
// (seed, stream, counter), so parallel and serial runs produce identical
// streams and sub-streams can be derived by index without coordination.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return mix(key_ + 0x632be59bd9b4e019ull * ++counter_); }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    // standard normal (Box-Muller, no rejection, deterministic)
    double normal() {
        double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    Vec3 unit_vec3() {
        for (;;) {
            Vec3 v{normal(), normal(), normal()};
            double n = v.norm();
            if (n > 1e-12) return v * (1.0 / n);
        }
    }

    Vec4 unit_vec4() {
        for (;;) {
            Vec4 v{normal(), normal(), normal(), normal()};
            double n = norm4(v);
            if (n > 1e-12) return {v[0] / n, v[1] / n, v[2] / n, v[3] / n};
        }
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace trv
