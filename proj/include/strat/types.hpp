#ifndef STRAT_TYPES_HPP
#define STRAT_TYPES_HPP

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace strat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream for task `stream` under a user seed. Workers must never
// share a generator, so results stay identical at any thread count.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// Deterministic splitmix64 generator. std:: distributions are
// implementation-defined, so all randomness in the library goes through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix64(seed ^ 0xd1b54a32d192ed03ULL)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Vec gaussian_vec(Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  Vec unit_vec(Index n) {
    for (;;) {
      Vec v = gaussian_vec(n);
      const double norm = v.norm();
      if (norm > 1e-12) return v / norm;
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Radical-inverse (Halton) sequence. Prefix-stable: the first k points are
// the same for every budget, which keeps search results monotone in budget.
inline double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  for (std::uint64_t i = index + 1; i > 0; i /= base) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
  }
  return r;
}

// Acklam's inverse normal CDF, |error| < 1.2e-9; plenty for direction sets.
double inverse_normal_cdf(double p);

// Low-discrepancy point on the unit sphere in R^n, prefix-stable in `index`.
Vec sphere_direction(std::uint64_t index, Index n);

// 17-significant-digit, locale-independent formatting (CSV contract).
std::string format_double(double v);

// Run fn(0..n-1) on `threads` workers. Each index is an independent task;
// callers write results by index so the reduction order is fixed.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// --threads flag fallback chain: explicit value > STRATCHECK_THREADS > cores.
int resolve_thread_count(int requested);

}  // namespace strat

#endif
