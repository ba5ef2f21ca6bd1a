#pragma once

#include <span>

#include "ouq/eval/record.hpp"

namespace ouq {

/// How 1-OFF accuracy counts a hit.
///   AdjacentArgmax: |argmax - y| <= 1 (default).
///   Top2:           y is one of the two most probable classes.
enum class OneOffMode { AdjacentArgmax, Top2 };

struct PointMetrics {
    double mcr = 0.0;
    double mae = 0.0;
    double mse = 0.0;
    double qwk = 0.0;
    bool qwk_degenerate = false;
    double one_off = 0.0;
};

struct ProbMetrics {
    double nll = 0.0;
    double brier = 0.0;
    double rps = 0.0;
    double ece = 0.0;
    bool nll_clamped = false;  // some p(y_true) hit the 1e-12 floor
};

struct QwkResult {
    double value;
    bool degenerate;  // expected weighted disagreement is zero; value reported as 0
};

/// Cohen's kappa with weights (i - j)^2 / (K - 1)^2 over labels 1..K.
QwkResult quadratic_weighted_kappa(std::span<const int> truth, std::span<const int> predicted, int k_count);

/// mcr/qwk use argmax, mae the lowest median (l1), mse the rounded mean (l2).
PointMetrics point_metrics(std::span<const PredictionRecord> records,
                           OneOffMode one_off = OneOffMode::AdjacentArgmax);

inline constexpr double kNllFloor = 1e-12;
inline constexpr int kEceBins = 10;

/// NLL in nats, Brier, RPS and ECE (kEceBins equal-width bins on the
/// max-probability confidence) of the posterior means.
ProbMetrics prob_metrics(std::span<const PredictionRecord> records);

/// Squared earth mover's distance sum_{k<K} (F_k(p) - F_k(y))^2, the
/// per-instance ranked probability score.
double emd_loss(const ProbabilityVector& p, int y);

} // namespace ouq
