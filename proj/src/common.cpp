#include "common.hpp"

#include <cstdlib>

namespace qtb {

const char* err_name(Err code) {
  switch (code) {
    case Err::Ok: return "Ok";
    case Err::Config: return "ConfigInvalid";
    case Err::OutOfGrid: return "OutOfGrid";
    case Err::UnsupportedDim: return "UnsupportedDim";
    case Err::GridTooCoarse: return "GridTooCoarse";
    case Err::NumericallyUnstable: return "NumericallyUnstable";
    case Err::DimMismatch: return "DimMismatch";
    case Err::GridAliasing: return "GridAliasing";
    case Err::ExponentRangeExceeded: return "ExponentRangeExceeded";
    case Err::NonIntegrable: return "NonIntegrable";
    case Err::Degenerate: return "Degenerate";
    case Err::TruncationDominated: return "TruncationDominated";
    case Err::ZeroAdmissibility: return "ZeroAdmissibility";
    case Err::AllZeroSheet: return "AllZeroSheet";
    case Err::NoStableSlope: return "NoStableSlope";
    case Err::InsufficientRange: return "InsufficientRange";
    case Err::SlowDecay: return "SlowDecay";
    case Err::NotStabilized: return "NotStabilized";
    case Err::IllConditioned: return "IllConditioned";
    case Err::DegenerateKernel: return "DegenerateKernel";
    case Err::Precondition: return "PreconditionViolated";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

std::vector<double> geomspace(double first, double last, int count) {
  if (count < 2 || first <= 0.0 || last <= 0.0) fail(Err::Config, "geomspace needs count >= 2 and positive endpoints");
  std::vector<double> v(static_cast<size_t>(count));
  const double step = std::log(last / first) / (count - 1);
  for (int i = 0; i < count; ++i) v[static_cast<size_t>(i)] = first * std::exp(step * i);
  v.back() = last;
  return v;
}

std::vector<double> linspace(double first, double last, int count) {
  if (count < 1) fail(Err::Config, "linspace needs count >= 1");
  std::vector<double> v(static_cast<size_t>(count));
  if (count == 1) {
    v[0] = first;
    return v;
  }
  const double step = (last - first) / (count - 1);
  for (int i = 0; i < count; ++i) v[static_cast<size_t>(i)] = first + step * i;
  v.back() = last;
  return v;
}

double smooth_cutoff(double r, double lo, double hi) {
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  auto bump = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double a = bump((hi - r) / (hi - lo));
  const double b = bump((r - lo) / (hi - lo));
  return a / (a + b);
}

int thread_cap() {
  if (const char* env = std::getenv("QUASITAUB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

}  // namespace qtb
