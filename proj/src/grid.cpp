#include "chslab/grid.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "chslab/stats.hpp"

namespace chslab::grid {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

class FftContext {
 public:
  explicit FftContext(int points) : m_(points) {
    buf_ = Eigen::ArrayXXcd::Zero(m_, m_);
    auto* raw = reinterpret_cast<fftw_complex*>(buf_.data());
    std::lock_guard<std::mutex> lock(plan_mutex());
    forward_ = fftw_plan_dft_2d(m_, m_, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ =
        fftw_plan_dft_2d(m_, m_, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward_ || !backward_) throw std::runtime_error("fftw plan failed");
  }

  ~FftContext() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  FftContext(const FftContext&) = delete;
  FftContext& operator=(const FftContext&) = delete;

  Eigen::ArrayXXcd& buffer() { return buf_; }
  void run_forward() { fftw_execute(forward_); }
  void run_backward() { fftw_execute(backward_); }

 private:
  int m_;
  Eigen::ArrayXXcd buf_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

FftContext& context_for(int points) {
  thread_local std::map<int, std::unique_ptr<FftContext>> cache;
  auto& slot = cache[points];
  if (!slot) slot = std::make_unique<FftContext>(points);
  return *slot;
}

inline int wrap(int k, int m) { return ((k % m) + m) % m; }

}  // namespace

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

int dealias_points(int cutoff) { return next_pow2(4 * cutoff + 4); }

int two_thirds_points(int cutoff) { return next_pow2(3 * cutoff + 3); }

spectral::SpectralField truncate(const spectral::SpectralField& u, int cutoff) {
  spectral::SpectralField out(cutoff, u.side());
  const int keep = std::min(cutoff, u.cutoff());
  for (int k1 = -keep; k1 <= keep; ++k1)
    for (int k2 = -keep; k2 <= keep; ++k2) out.c(k1, k2) = u.c(k1, k2);
  return out;
}

TorusGrid to_grid(const spectral::SpectralField& u, int points) {
  const int n = u.cutoff();
  if (points < 2 * n + 1)
    throw std::invalid_argument(
        "grid too small for the cutoff; coefficients would alias");
  auto& ctx = context_for(points);
  auto& buf = ctx.buffer();
  buf.setZero();
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2)
      buf(wrap(k1, points), wrap(k2, points)) = u.c(k1, k2);
  ctx.run_backward();
  TorusGrid g{points, u.side(), Eigen::ArrayXXd()};
  g.values = buf.real() / u.side();
  return g;
}

spectral::SpectralField from_grid(const TorusGrid& g, int cutoff) {
  const int m = g.points;
  if (m < 2 * cutoff + 1)
    throw std::invalid_argument(
        "grid too small for the cutoff; coefficients would alias");
  auto& ctx = context_for(m);
  auto& buf = ctx.buffer();
  buf = g.values.cast<std::complex<double>>();
  ctx.run_forward();
  spectral::SpectralField u(cutoff, g.side);
  const double scale = g.side / (static_cast<double>(m) * m);
  for (int k1 = -cutoff; k1 <= cutoff; ++k1)
    for (int k2 = -cutoff; k2 <= cutoff; ++k2)
      u.c(k1, k2) = buf(wrap(k1, m), wrap(k2, m)) * scale;
  return u;
}

double integral(const Eigen::ArrayXXd& values, int points, double side) {
  stats::KahanSum s;
  const double* p = values.data();
  const std::ptrdiff_t count = values.size();
  for (std::ptrdiff_t i = 0; i < count; ++i) s.add(p[i]);
  const double h = side / points;
  return s.value() * h * h;
}

double integral(const TorusGrid& g) {
  return integral(g.values, g.points, g.side);
}

}  // namespace chslab::grid
