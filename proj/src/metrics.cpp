#include "tlcrf/metrics.hpp"

#include <algorithm>
#include <string>

#include "tlcrf/error.hpp"

namespace tlcrf {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : num_classes_(num_classes), counts_(num_classes * num_classes, 0) {
  if (num_classes_ == 0) throw Error(ErrorCode::InvalidArgument, "confusion matrix needs at least one class");
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t reference) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < num_classes_; ++p) s += count(reference, p);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (std::size_t r = 0; r < num_classes_; ++r) s += count(r, predicted);
  return s;
}

void ConfusionMatrix::add(std::size_t reference, std::size_t predicted, std::uint64_t n) {
  if (reference >= num_classes_ || predicted >= num_classes_) {
    throw Error(ErrorCode::LabelOutOfRange, "class index outside the confusion matrix");
  }
  counts_[reference * num_classes_ + predicted] += n;
  total_ += n;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.num_classes_ != num_classes_) {
    throw Error(ErrorCode::ShapeMismatch, "cannot add confusion matrices of different size");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
  return *this;
}

ConfusionMatrix confusion(std::span<const Label> reference, std::span<const Label> predicted,
                          std::size_t num_classes) {
  if (reference.size() != predicted.size()) {
    throw Error(ErrorCode::ShapeMismatch, "reference has " + std::to_string(reference.size()) +
                                              " entries, prediction " + std::to_string(predicted.size()));
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference[i] == kUnlabeled) continue;
    cm.add(reference[i], predicted[i]);
  }
  return cm;
}

ConfusionMatrix confusion(const LabelMap& reference, const LabelMap& predicted) {
  if (reference.height() != predicted.height() || reference.width() != predicted.width()) {
    throw Error(ErrorCode::ShapeMismatch, "reference and prediction differ in size");
  }
  return confusion(reference.labels(), predicted.labels(),
                   std::max(reference.num_classes(), predicted.num_classes()));
}

double oa(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::EmptyMatrix, "overall accuracy of an empty matrix");
  std::uint64_t trace = 0;
  for (std::size_t c = 0; c < cm.num_classes(); ++c) trace += cm.count(c, c);
  return static_cast<double>(trace) / static_cast<double>(cm.total());
}

double aa(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::EmptyMatrix, "average accuracy of an empty matrix");
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < cm.num_classes(); ++c) {
    const std::uint64_t row = cm.row_sum(c);
    if (row == 0) continue;
    sum += static_cast<double>(cm.count(c, c)) / static_cast<double>(row);
    ++present;
  }
  return sum / static_cast<double>(present);
}

double kappa(const ConfusionMatrix& cm) {
  const double observed = oa(cm);
  const double total = static_cast<double>(cm.total());
  double chance = 0.0;
  for (std::size_t c = 0; c < cm.num_classes(); ++c) {
    chance += static_cast<double>(cm.row_sum(c)) * static_cast<double>(cm.col_sum(c));
  }
  chance /= total * total;
  // Chance agreement of one is only possible for a single-class diagonal matrix.
  if (chance >= 1.0) return observed >= 1.0 ? 1.0 : 0.0;
  return (observed - chance) / (1.0 - chance);
}

Scores scores(const ConfusionMatrix& cm) {
  return {oa(cm), aa(cm), kappa(cm)};
}

Aggregate aggregate(std::span<const ConfusionMatrix> tiles) {
  if (tiles.empty()) throw Error(ErrorCode::InvalidArgument, "aggregate needs at least one tile");
  ConfusionMatrix pooled(tiles.front().num_classes());
  Scores mean;
  for (const auto& tile : tiles) {
    pooled += tile;
    const Scores s = scores(tile);
    mean.oa += s.oa;
    mean.aa += s.aa;
    mean.kappa += s.kappa;
  }
  const auto n = static_cast<double>(tiles.size());
  mean.oa /= n;
  mean.aa /= n;
  mean.kappa /= n;
  return {scores(pooled), mean};
}

}  // namespace tlcrf
