// core.hpp — Shared aliases, dimension bookkeeping, tolerances, error types.

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace opssa {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// ------------------------------------------------------------------ errors --

// Shape or subsystem-index mismatch.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid parameters: ranks, trial counts, unknown names, malformed files.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Anti-Hermitian residue above tolerance where a Hermitian result is required.
struct HermiticityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigenvalue below the allowed negative slack.
struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mass escapes the support a formal logarithm is restricted to; the quantity
// being computed is infinite in exact arithmetic.
struct SupportViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Density-matrix invariant (unit trace) broken.
struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense eigensolver did not converge.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------- formatting --

// Shortest round-trip-safe decimal form; used for state files and reports.
inline std::string format_real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Compact form for diagnostics in error messages.
inline std::string short_str(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ------------------------------------------------------------- tolerances --

struct ToleranceConfig {
  double support_cutoff_rel = 1e-12;  // spectral support cutoff, relative to the largest eigenvalue
  double psd_tol = 1e-9;              // slack for ">= 0" verdicts and off-support mass
  double match_tol = 1e-9;            // identity / cross-route agreement
  double convexity_tol = 1e-9;        // allowed negative convexity margin
  double hermiticity_tol = 1e-8;      // hermitization defect treated as an anomaly

  void validate() const {
    if (support_cutoff_rel <= 0 || psd_tol <= 0 || match_tol <= 0 ||
        convexity_tol <= 0 || hermiticity_tol <= 0)
      throw ConfigError("ToleranceConfig: all tolerances must be strictly positive");
  }

  // Negative slack scaled with the operator norm, so the verdict tracks
  // conditioning instead of sharpening artificially for large operators.
  double psd_slack(double norm_scale) const {
    return psd_tol * std::max(1.0, norm_scale);
  }
};

// ---------------------------------------------------------------- DimList --

// Ordered subsystem dimensions. Index 0 is A, 1 is B, 2 is C; flat matrix
// indices are lexicographic over the factors with the last one varying
// fastest.
class DimList {
 public:
  DimList() = default;
  DimList(std::initializer_list<int> dims) : dims_(dims) { validate(); }
  explicit DimList(std::vector<int> dims) : dims_(std::move(dims)) { validate(); }

  int count() const { return static_cast<int>(dims_.size()); }
  int operator[](int k) const { return dims_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& entries() const { return dims_; }

  Index total() const {
    Index t = 1;
    for (int d : dims_) t *= d;
    return t;
  }

  // Product of the dimensions selected by `subsystems`.
  Index total_of(const std::vector<int>& subsystems) const {
    Index t = 1;
    for (int s : subsystems) t *= (*this)[s];
    return t;
  }

  DimList sublist(const std::vector<int>& subsystems) const {
    std::vector<int> out;
    out.reserve(subsystems.size());
    for (int s : subsystems) out.push_back((*this)[s]);
    return DimList(std::move(out));
  }

  bool operator==(const DimList& o) const { return dims_ == o.dims_; }
  bool operator!=(const DimList& o) const { return !(*this == o); }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += 'x';
      s += std::to_string(dims_[i]);
    }
    return s.empty() ? "scalar" : s;
  }

 private:
  void validate() const {
    for (int d : dims_)
      if (d < 1) throw DimensionError("DimList: subsystem dimensions must be >= 1");
  }

  std::vector<int> dims_;
};

}  // namespace opssa
