#include "aqec/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace aqec {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed)
    : seed_(seed), gen_(splitmix64(seed)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(splitmix64(seed_ ^ splitmix64(index + 1)));
}

double RandomStream::uniform() {
  return double(gen_() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  cached_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

Complex RandomStream::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) * M_SQRT1_2;
}

std::uint64_t RandomStream::next_u64() { return gen_(); }

CMat haar_unitary(int dim, RandomStream& rng) {
  if (dim < 1) throw InputError("haar_unitary: dim must be positive");
  CMat g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_gaussian();
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(dim, dim);
  const CMat r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

CVec random_pure_state(int dim, RandomStream& rng) {
  if (dim < 1) throw InputError("random_pure_state: dim must be positive");
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  const double n = v.norm();
  if (n == 0.0) return random_pure_state(dim, rng);
  return v / n;
}

}  // namespace aqec
