#pragma once

// Three-valued mixability verdicts and the certificates that back them.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mix/rational.hpp"

namespace mix {

/// perms[j][i] is the row of column j placed in output row i.
/// Canonical form has perms[0] equal to the identity.
struct Arrangement {
  std::vector<std::vector<std::size_t>> perms;

  friend bool operator==(const Arrangement&, const Arrangement&) = default;
  friend auto operator<=>(const Arrangement&, const Arrangement&) = default;
};

/// Matrix values (column-major, `columns[j][i]`) plus an arrangement whose
/// row sums are all equal to `center`.
struct ArrangementCertificate {
  std::vector<std::vector<Rational>> columns;
  Arrangement arrangement;
  Rational center;
};

/// Joint law on the hyperplane x_1 + ... + x_n = center.
struct JointPmf {
  Rational center;
  std::vector<std::vector<Rational>> points;
  std::vector<Rational> masses;
};

/// f_i tabulated over supp(F_i).
struct FunctionTable {
  std::vector<Rational> points;
  std::vector<Rational> values;
};

/// Separating functions: sum_i f_i(x_i) >= 1 on every support point of the
/// hyperplane, while sum_i E f_i(X_i) < 1.
struct DualCertificate {
  Rational center;
  std::vector<FunctionTable> functions;
};

/// Finite mixture of n-point discrete uniform laws sharing the mean `center`.
struct UniformBlockMixture {
  Rational center;
  std::vector<std::vector<Rational>> blocks;
  std::vector<Rational> weights;
};

/// Gaussian joint mix: X_i = mu_i + sigma_i Z_i with corr(Z) = `corr`.
struct GaussianMixCertificate {
  std::vector<double> mus;
  std::vector<double> sigmas;
  std::vector<std::vector<double>> corr;

  double center() const;
};

/// One failed law-determined norm inequality.
struct NormViolation {
  /// Marginal index for the joint form; empty for the complete-mix form.
  std::optional<std::size_t> index;
  double p = 1;
  std::vector<double> split;
  std::optional<double> t;
  /// 1: positive-part inequality, 2: negative-part inequality.
  int inequality = 1;
  double lhs = 0;
  double rhs = 0;
};

using Certificate = std::variant<std::monostate, ArrangementCertificate, JointPmf, DualCertificate,
                                 UniformBlockMixture, GaussianMixCertificate, NormViolation>;

enum class Status { Mixable, NotMixable, Unknown };

std::string to_string(Status status);

struct Verdict {
  Status status = Status::Unknown;
  /// Identifier of the condition that decided the verdict.
  std::string reason;
  std::string diagnostic;
  Certificate certificate;

  static Verdict mixable(std::string reason, Certificate cert = {}, std::string diagnostic = {});
  static Verdict not_mixable(std::string reason, Certificate cert = {}, std::string diagnostic = {});
  static Verdict unknown(std::string reason, std::string diagnostic = {});

  bool decisive() const noexcept { return status != Status::Unknown; }
};

/// Result of re-validating a certificate; `reason` is set on failure.
struct Validation {
  bool ok = true;
  std::string reason;

  explicit operator bool() const noexcept { return ok; }
  static Validation pass() { return {}; }
  static Validation fail(std::string why) { return {false, std::move(why)}; }
};

}  // namespace mix
