#ifndef QTB_COMMON_HPP
#define QTB_COMMON_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtb {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// Error codes shared with the C API (values are part of the ABI).
enum class Err : int {
  Ok = 0,
  Config = 1,
  OutOfGrid = 2,
  UnsupportedDim = 3,
  GridTooCoarse = 4,
  NumericallyUnstable = 5,
  DimMismatch = 6,
  GridAliasing = 7,
  ExponentRangeExceeded = 8,
  NonIntegrable = 9,
  Degenerate = 10,
  TruncationDominated = 11,
  ZeroAdmissibility = 12,
  AllZeroSheet = 13,
  NoStableSlope = 14,
  InsufficientRange = 15,
  SlowDecay = 16,
  NotStabilized = 17,
  IllConditioned = 18,
  DegenerateKernel = 19,
  Precondition = 20,
  Internal = 21,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

const char* err_name(Err code);

// Point in R^n, n <= 2. For n = 1 only x[0] is meaningful.
using Pt = std::array<double, 2>;

inline double dot(const Pt& a, const Pt& b, int dim) {
  double s = a[0] * b[0];
  if (dim > 1) s += a[1] * b[1];
  return s;
}

inline double norm(const Pt& a, int dim) { return std::sqrt(dot(a, a, dim)); }

inline double norm2(const CVec& v) {
  double s = 0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline CVec& operator+=(CVec& a, const CVec& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline CVec operator*(const cplx& s, CVec v) {
  for (auto& z : v) z *= s;
  return v;
}

inline CVec zeros(int d) { return CVec(static_cast<size_t>(d), cplx(0.0, 0.0)); }

std::vector<double> geomspace(double first, double last, int count);
std::vector<double> linspace(double first, double last, int count);

// Compensated (Kahan) accumulator for complex sums.
struct KahanSum {
  cplx s{0.0, 0.0};
  cplx c{0.0, 0.0};
  void add(const cplx& x) {
    cplx y = x - c;
    cplx t = s + y;
    c = (t - s) - y;
    s = t;
  }
  cplx value() const { return s; }
};

// Smooth cutoff: 1 on [0, lo], 0 on [hi, inf), C^inf monotone between.
double smooth_cutoff(double r, double lo, double hi);

int thread_cap();

}  // namespace qtb

#endif
