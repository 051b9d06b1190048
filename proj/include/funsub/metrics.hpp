#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace funsub
{

struct confusion_counts
{
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
  friend bool operator==( confusion_counts const&, confusion_counts const& ) = default;
};

struct classification_scores
{
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  /// Set when the denominator was zero and the value was reported as 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
};

/// Throws `error` on all-zero counts.
classification_scores classification_metrics( confusion_counts const& c );

/// Adds one (predicted, actual) outcome.
void tally( confusion_counts& c, bool predicted, bool actual ) noexcept;

struct segmentation_scores
{
  double iou = 0;
  double dice = 0;
};

/// Throws `error("undefined")` when both sets are empty.
segmentation_scores segmentation_metrics( std::set<std::uint32_t> const& predicted,
                                          std::set<std::uint32_t> const& ground_truth );

/// One probability per line; blank lines are not allowed except a final
/// newline.
std::vector<double> parse_predictions( std::string_view text );

struct eval_report
{
  int stage = 1;
  double threshold = 0.5;
  std::size_t records = 0;
  /// Stage 1.
  confusion_counts counts;
  classification_scores classification;
  /// Stage 2: cell count and per-record means.
  std::size_t cells = 0;
  segmentation_scores segmentation;
};

/// Predictions align with records (stage 1) or with the concatenated cell
/// label vectors (stage 2); a count mismatch throws `error`.
eval_report evaluate_stage1( std::vector<double> const& preds, std::vector<int> const& labels, double threshold );
eval_report evaluate_stage2( std::vector<double> const& preds, std::vector<std::vector<int>> const& labels,
                             double threshold );

/// Canonical JSON text (fixed key order, trailing newline).
std::string write_report( eval_report const& r );

} // namespace funsub
