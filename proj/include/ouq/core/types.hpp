#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ouq {

/// Tolerance on |sum - 1| accepted by distribution validation.
inline constexpr double kSumTolerance = 1e-9;

/// An ordered label scale y_1 < ... < y_K, encoded by the integers 1..K.
class ClassScale {
public:
    explicit ClassScale(int k_count);

    int k_count() const noexcept { return k_; }
    bool contains(int label) const noexcept { return label >= 1 && label <= k_; }

    bool operator==(const ClassScale&) const = default;

private:
    int k_;
};

/// A first-order prediction over K ordered classes. Always valid: entries are
/// finite, non-negative and sum to one within kSumTolerance. Construction
/// never rescales; use renormalized() for near-valid input.
class ProbabilityVector {
public:
    explicit ProbabilityVector(std::vector<double> probs);
    ProbabilityVector(std::initializer_list<double> probs);

    /// Divides by the sum when |sum - 1| <= tolerance, rejects otherwise.
    static ProbabilityVector renormalized(std::vector<double> probs, double tolerance);

    /// One-hot vector at 1-based class `label`.
    static ProbabilityVector one_hot(int label, int k_count);
    static ProbabilityVector uniform(int k_count);

    std::size_t size() const noexcept { return probs_.size(); }
    int k_count() const noexcept { return static_cast<int>(probs_.size()); }
    ClassScale scale() const { return ClassScale(k_count()); }

    /// 0-based access.
    double operator[](std::size_t i) const noexcept { return probs_[i]; }
    /// 1-based access by class label; throws IndexError.
    double of_class(int label) const;

    std::span<const double> values() const noexcept { return probs_; }

private:
    struct Unchecked {};
    ProbabilityVector(std::vector<double> probs, Unchecked) : probs_(std::move(probs)) {}

    std::vector<double> probs_;
};

/// Bernoulli distribution produced by a binary reduction of a K-class
/// prediction: p0 is the "negative" mass, p1 the "positive" mass.
struct BinaryDistribution {
    double p0;
    double p1;

    BinaryDistribution(double p0, double p1);
};

/// M member predictions approximating the second-order posterior with
/// uniform weights 1/M.
class EnsemblePrediction {
public:
    explicit EnsemblePrediction(std::vector<ProbabilityVector> members);

    std::size_t member_count() const noexcept { return members_.size(); }
    int k_count() const noexcept { return members_.front().k_count(); }
    const ProbabilityVector& member(std::size_t m) const { return members_.at(m); }
    const std::vector<ProbabilityVector>& members() const noexcept { return members_; }

private:
    std::vector<ProbabilityVector> members_;
};

enum class MeasureKind { Ent, Var, BinEnt, BinVar, OrdEnt, OrdVar };

inline constexpr std::array<MeasureKind, 6> kAllMeasures = {
    MeasureKind::Ent,    MeasureKind::Var,    MeasureKind::BinEnt,
    MeasureKind::BinVar, MeasureKind::OrdEnt, MeasureKind::OrdVar};

std::string_view to_string(MeasureKind m) noexcept;
/// Parses "ent", "var", "bin-ent", "bin-var", "ord-ent", "ord-var".
MeasureKind parse_measure(std::string_view name);
/// Parses a comma-separated list; "all" expands to every measure.
std::vector<MeasureKind> parse_measure_list(std::string_view list);

/// Which component of a triple is used as a score.
enum class UncertaintyKind { Total, Aleatoric, Epistemic };

inline constexpr std::array<UncertaintyKind, 3> kAllUncertaintyKinds = {
    UncertaintyKind::Total, UncertaintyKind::Aleatoric, UncertaintyKind::Epistemic};

std::string_view to_string(UncertaintyKind u) noexcept;
/// Parses "tu", "au", "eu".
UncertaintyKind parse_uncertainty_kind(std::string_view name);

struct UncertaintyTriple {
    double tu = 0.0;
    double au = 0.0;
    double eu = 0.0;
    MeasureKind measure = MeasureKind::Ent;

    double get(UncertaintyKind kind) const noexcept;
};

} // namespace ouq
