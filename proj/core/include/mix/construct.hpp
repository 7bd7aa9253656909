#pragma once

// Constructive side of mixability: uniform-block decompositions, binary
// multinomial layers, Gaussian joint mixes and sampling from certificates.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "mix/distributions.hpp"
#include "mix/rearrange.hpp"
#include "mix/verdict.hpp"

namespace mix {

/// Verdict carrying a UniformBlockMixture when the law is n-CM. Blocks are the
/// rows of an exact complete mix of the weight-expanded law, sorted and merged.
Verdict discrete_cm_decompose(const DiscreteDistribution& law, std::size_t n, const MatrixMixOptions& options = {});

/// Blocks average to the center, weights sum to 1 and the mixture of
/// n-point uniforms reproduces `target` exactly.
Validation verify_block_mixture(const DiscreteDistribution& target, const UniformBlockMixture& mixture);

using IntTable = std::vector<std::vector<std::int64_t>>;

/// layers[r][k] is the k-th binary multinomial vector of realization r.
struct BinaryLayerList {
  std::size_t dims = 0;
  std::size_t count = 0;
  std::vector<std::vector<std::vector<std::uint8_t>>> layers;
};

/// Splits each realization (nonnegative integers, common sum N) into N
/// vectors with exactly one coordinate equal to 1:
///   Y_{k,i} = 1{x_1 + ... + x_i >= k} - 1{x_1 + ... + x_{i-1} >= k}.
BinaryLayerList binary_decompose(const IntTable& realizations);

/// Coordinate-wise sum of the layers. Throws InvalidInput on bad layers.
IntTable binary_compose(const BinaryLayerList& layers);

/// Exact joint law of the sum of `layers` independent binary multinomial
/// vectors in dimension n, each uniform on the n unit vectors, obtained by
/// enumerating all n^layers draws and composing them.
JointPmf uniform_layer_law(std::size_t n, std::size_t layers);

/// Mixable with a GaussianMixCertificate iff sum(sigma) >= 2 max(sigma).
Verdict gaussian_joint_mix(std::span<const Rational> mus, std::span<const Rational> sigmas);

/// Unit diagonal, symmetry, min eigenvalue >= -1e-10 and
/// sigma^T R sigma <= 1e-10 (sum sigma)^2.
Validation verify_gaussian(const GaussianMixCertificate& cert);

/// Rows of a sampled joint mix: exact for discrete certificates.
struct SampleTable {
  std::variant<std::vector<std::vector<Rational>>, std::vector<std::vector<double>>> rows;
  /// Kolmogorov-Smirnov distance of each empirical marginal to its target.
  std::vector<double> ks_distance;
  /// Set when some distance exceeds 2 / sqrt(count).
  bool ks_flagged = false;

  std::size_t size() const;
};

/// i.i.d. rows from a certificate, row r drawing from a stream seeded by
/// (seed, r). Uniform blocks are shuffled by an independent random
/// permutation so the resulting complete mix is exchangeable.
SampleTable sample_joint_mix(const Certificate& certificate, std::size_t count, std::uint64_t seed);

}  // namespace mix
