#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tlcrf/core.hpp"

namespace tlcrf {

/// Rows are reference classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes);

  std::size_t num_classes() const { return num_classes_; }
  std::uint64_t count(std::size_t reference, std::size_t predicted) const {
    return counts_[reference * num_classes_ + predicted];
  }
  std::uint64_t total() const { return total_; }
  std::uint64_t row_sum(std::size_t reference) const;
  std::uint64_t col_sum(std::size_t predicted) const;
  std::span<const std::uint64_t> counts() const { return counts_; }

  void add(std::size_t reference, std::size_t predicted, std::uint64_t n = 1);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

 private:
  std::size_t num_classes_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Reference entries equal to kUnlabeled are skipped. Throws ShapeMismatch
/// for unequal lengths and LabelOutOfRange for labels >= num_classes.
ConfusionMatrix confusion(std::span<const Label> reference, std::span<const Label> predicted,
                          std::size_t num_classes);
ConfusionMatrix confusion(const LabelMap& reference, const LabelMap& predicted);

/// Throw EmptyMatrix when nothing was counted.
double oa(const ConfusionMatrix& cm);
double aa(const ConfusionMatrix& cm);
double kappa(const ConfusionMatrix& cm);

struct Scores {
  double oa = 0.0;
  double aa = 0.0;
  double kappa = 0.0;
};

Scores scores(const ConfusionMatrix& cm);

struct Aggregate {
  Scores pooled;    // metrics of the summed matrix
  Scores averaged;  // unweighted mean of per-tile metrics
};

Aggregate aggregate(std::span<const ConfusionMatrix> tiles);

}  // namespace tlcrf
