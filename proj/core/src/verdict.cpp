#include "mix/verdict.hpp"

namespace mix {

double GaussianMixCertificate::center() const {
  double total = 0;
  for (const double m : mus) total += m;
  return total;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Mixable:
      return "mixable";
    case Status::NotMixable:
      return "not_mixable";
    case Status::Unknown:
      return "unknown";
  }
  return "unknown";
}

Verdict Verdict::mixable(std::string reason, Certificate cert, std::string diagnostic) {
  return {Status::Mixable, std::move(reason), std::move(diagnostic), std::move(cert)};
}

Verdict Verdict::not_mixable(std::string reason, Certificate cert, std::string diagnostic) {
  return {Status::NotMixable, std::move(reason), std::move(diagnostic), std::move(cert)};
}

Verdict Verdict::unknown(std::string reason, std::string diagnostic) {
  return {Status::Unknown, std::move(reason), std::move(diagnostic), {}};
}

}  // namespace mix
