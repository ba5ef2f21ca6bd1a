#pragma once

#include <span>

#include "ouq/core/types.hpp"

namespace ouq {

inline constexpr double kDefaultLogBase = 2.0;

/// Largest negative mutual-information estimate treated as float noise and
/// clamped to zero. Anything more negative throws NumericalError.
inline constexpr double kClampTolerance = 1e-9;

/// Base measure applied to each binary sub-problem of a reduction.
enum class BaseMeasure { Entropy, Variance };

/// -sum p_k log(p_k) in the given base, with 0 log 0 = 0.
double shannon_entropy(const ProbabilityVector& p, double log_base = kDefaultLogBase);

/// Variance of the label under the integer encoding 1..K.
double ordinal_variance(const ProbabilityVector& p);

/// Uniformly weighted mixture of the ensemble members.
ProbabilityVector posterior_mean(const EnsemblePrediction& e);

/// TU = H(mean), AU = mean of member entropies, EU = TU - AU (mutual
/// information between member index and label).
UncertaintyTriple decompose_entropy(const EnsemblePrediction& e, double log_base = kDefaultLogBase);

/// Law-of-total-variance split on the integer-encoded scale: AU is the mean
/// member variance, EU the variance of member means.
UncertaintyTriple decompose_variance(const EnsemblePrediction& e);

/// Class k (1-based) against the rest: p1 = p_k, p0 = sum of all others.
BinaryDistribution one_vs_rest_reduce(const ProbabilityVector& p, int k);

/// Order-consistent split after class k (1 <= k <= K-1):
/// p0 = P(y <= k), p1 = P(y > k).
BinaryDistribution ocs_reduce(const ProbabilityVector& p, int k);

/// TU/AU/EU of an ensemble of Bernoulli predictions under `base`.
/// The returned triple's measure field is left at its default.
UncertaintyTriple decompose_binary(std::span<const BinaryDistribution> members, BaseMeasure base,
                                   double log_base = kDefaultLogBase);

/// Sum of the one-vs-rest triples over k = 1..K (bin-ent / bin-var).
UncertaintyTriple aggregate_labelwise(const EnsemblePrediction& e, BaseMeasure base,
                                      double log_base = kDefaultLogBase);

/// Sum of the order-consistent-split triples over k = 1..K-1 (ord-ent / ord-var).
UncertaintyTriple aggregate_ordinal(const EnsemblePrediction& e, BaseMeasure base,
                                    double log_base = kDefaultLogBase);

UncertaintyTriple compute_uncertainty(const EnsemblePrediction& e, MeasureKind m,
                                      double log_base = kDefaultLogBase);

} // namespace ouq
