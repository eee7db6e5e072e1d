#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "docbin/raster.hpp"

namespace docbin {

/// Pixel confusion counts with text (foreground) as the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Scores for one prediction/GT pair. `psnr` is +infinity for identical
/// masks, in which case `avg` is withheld.
struct MetricsReport {
  double fm = 0.0;
  double pfm = 0.0;
  double psnr = 0.0;
  double drd = 0.0;
  std::optional<double> avg;
  ConfusionCounts counts;
};

/// Arithmetic means over a set of reports.
struct DatasetMean {
  std::size_t count = 0;
  double fm = 0.0;
  double pfm = 0.0;
  double psnr = 0.0;  // +infinity if any member is infinite
  double drd = 0.0;
  std::optional<double> avg;  // over members that carry an avg
};

/// 5x5 DRD weights indexed by offsets in [-2,2]^2: reciprocal Euclidean
/// distance, zero at the center, normalized to sum to one.
class WeightMatrix5x5 {
 public:
  static WeightMatrix5x5 reciprocal_distance();

  double at(int di, int dj) const { return w_[(dj + 2) * 5 + (di + 2)]; }
  double sum() const;

 private:
  std::array<double, 25> w_{};
};

enum class PseudoWeighting {
  /// Recall weights 1/(1+Dc), Dc = Chebyshev distance to the GT text contour;
  /// precision weights 2 - 1/(1+Df), Df = Chebyshev distance to GT text.
  contour_distance,
  /// All weights 1; reduces to the plain F-measure.
  uniform,
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

/// 100 * 2PR / (P + R); 0 when tp = 0.
double f_measure(const ConfusionCounts& c);

/// Distance-weighted F-measure. Throws UndefinedMetric if GT has no text.
double pseudo_f_measure(const BinaryMask& pred, const BinaryMask& gt,
                        PseudoWeighting weighting = PseudoWeighting::contour_distance);

/// Masks embedded as {0,1}.
double mean_squared_error(const BinaryMask& pred, const BinaryMask& gt);

/// 10 log10(1 / MSE) with V = 1; +infinity when the masks agree.
double psnr(const BinaryMask& pred, const BinaryMask& gt);

/// Number of 8x8 GT blocks (partial border blocks included) holding both
/// classes.
std::size_t nubn(const BinaryMask& gt);

/// Distance-reciprocal distortion. GT neighborhoods are edge-replicated.
/// Throws UndefinedMetric when flips exist but NUBN is zero.
double drd(const BinaryMask& pred, const BinaryMask& gt,
           const WeightMatrix5x5& weights = WeightMatrix5x5::reciprocal_distance());

/// (fm + pfm + psnr + (100 - drd)) / 4. Throws UndefinedMetric on infinite psnr.
double avg_score(double fm, double pfm, double psnr, double drd);

/// All metrics for one pair.
MetricsReport evaluate(const BinaryMask& pred, const BinaryMask& gt);

DatasetMean mean_report(std::span<const MetricsReport> reports);

/// Chebyshev (chessboard) distance from every pixel to the nearest pixel in
/// `sources`; -1 everywhere if `sources` is empty.
std::vector<int> chessboard_distance(const BinaryMask& sources);

}  // namespace docbin
