#include "docbin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace docbin {
namespace {

void require_same_shape(const BinaryMask& a, const BinaryMask& b, const char* what) {
  if (!a.same_shape(b)) {
    throw StructuralError(std::string(what) + ": prediction and GT dimensions differ");
  }
}

double harmonic_percent(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 100.0 * 2.0 * precision * recall / (precision + recall);
}

// GT text pixels with at least one 4-neighbor inside the image that is background.
BinaryMask contour_of(const BinaryMask& gt) {
  BinaryMask out(gt.width(), gt.height());
  const int w = gt.width();
  const int h = gt.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!gt.foreground(x, y)) continue;
      const bool edge = (x > 0 && !gt.foreground(x - 1, y)) ||
                        (x + 1 < w && !gt.foreground(x + 1, y)) ||
                        (y > 0 && !gt.foreground(x, y - 1)) ||
                        (y + 1 < h && !gt.foreground(x, y + 1));
      out.set(x, y, edge);
    }
  }
  return out;
}

}  // namespace

WeightMatrix5x5 WeightMatrix5x5::reciprocal_distance() {
  WeightMatrix5x5 m;
  double total = 0.0;
  for (int dj = -2; dj <= 2; ++dj) {
    for (int di = -2; di <= 2; ++di) {
      const double v = (di == 0 && dj == 0) ? 0.0 : 1.0 / std::sqrt(double(di * di + dj * dj));
      m.w_[(dj + 2) * 5 + (di + 2)] = v;
      total += v;
    }
  }
  for (double& v : m.w_) v /= total;
  return m;
}

double WeightMatrix5x5::sum() const {
  double s = 0.0;
  for (double v : w_) s += v;
  return s;
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "confusion");
  ConfusionCounts c;
  auto p = pred.data();
  auto g = gt.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      g[i] ? ++c.tp : ++c.fp;
    } else {
      g[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

double f_measure(const ConfusionCounts& c) {
  if (c.tp == 0) return 0.0;
  const double precision = double(c.tp) / double(c.tp + c.fp);
  const double recall = double(c.tp) / double(c.tp + c.fn);
  return harmonic_percent(precision, recall);
}

std::vector<int> chessboard_distance(const BinaryMask& sources) {
  const int w = sources.width();
  const int h = sources.height();
  const int inf = std::numeric_limits<int>::max() / 2;
  std::vector<int> d(static_cast<std::size_t>(w) * h, inf);
  auto at = [&](int x, int y) -> int& { return d[static_cast<std::size_t>(y) * w + x]; };
  bool any = false;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (sources.foreground(x, y)) {
        at(x, y) = 0;
        any = true;
      }
    }
  }
  if (!any) {
    std::fill(d.begin(), d.end(), -1);
    return d;
  }
  // Two-pass chamfer with unit 8-neighbor steps is exact for L-infinity.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int v = at(x, y);
      if (x > 0) v = std::min(v, at(x - 1, y) + 1);
      if (y > 0) {
        v = std::min(v, at(x, y - 1) + 1);
        if (x > 0) v = std::min(v, at(x - 1, y - 1) + 1);
        if (x + 1 < w) v = std::min(v, at(x + 1, y - 1) + 1);
      }
      at(x, y) = v;
    }
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      int v = at(x, y);
      if (x + 1 < w) v = std::min(v, at(x + 1, y) + 1);
      if (y + 1 < h) {
        v = std::min(v, at(x, y + 1) + 1);
        if (x + 1 < w) v = std::min(v, at(x + 1, y + 1) + 1);
        if (x > 0) v = std::min(v, at(x - 1, y + 1) + 1);
      }
      at(x, y) = v;
    }
  }
  return d;
}

double pseudo_f_measure(const BinaryMask& pred, const BinaryMask& gt,
                        PseudoWeighting weighting) {
  require_same_shape(pred, gt, "pseudo_f_measure");
  if (gt.count_foreground() == 0) {
    throw UndefinedMetric("undefined pseudo-recall: GT has no foreground");
  }
  auto p = pred.data();
  auto g = gt.data();

  std::vector<int> contour_dist;
  std::vector<int> text_dist;
  if (weighting == PseudoWeighting::contour_distance) {
    contour_dist = chessboard_distance(contour_of(gt));
    text_dist = chessboard_distance(gt);
  }
  auto recall_weight = [&](std::size_t i) {
    if (weighting == PseudoWeighting::uniform) return 1.0;
    const int dc = std::max(contour_dist[i], 0);  // no contour: weight 1
    return 1.0 / (1.0 + dc);
  };
  auto precision_weight = [&](std::size_t i) {
    if (weighting == PseudoWeighting::uniform) return 1.0;
    return 2.0 - 1.0 / (1.0 + text_dist[i]);
  };

  double recall_num = 0.0, recall_den = 0.0;
  double precision_num = 0.0, precision_den = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (g[i]) {
      const double wr = recall_weight(i);
      recall_den += wr;
      if (p[i]) recall_num += wr;
    }
    if (p[i]) {
      const double wp = precision_weight(i);
      precision_den += wp;
      if (g[i]) precision_num += wp;
    }
  }
  if (recall_num == 0.0 || precision_den == 0.0) return 0.0;
  return harmonic_percent(precision_num / precision_den, recall_num / recall_den);
}

double mean_squared_error(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "mse");
  if (pred.size() == 0) throw InvalidArgument("mse: empty masks");
  const ConfusionCounts c = confusion(pred, gt);
  return double(c.fp + c.fn) / double(c.total());
}

double psnr(const BinaryMask& pred, const BinaryMask& gt) {
  const double mse = mean_squared_error(pred, gt);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

std::size_t nubn(const BinaryMask& gt) {
  constexpr int kBlock = 8;
  std::size_t count = 0;
  for (int by = 0; by < gt.height(); by += kBlock) {
    for (int bx = 0; bx < gt.width(); bx += kBlock) {
      bool fg = false, bg = false;
      const int ye = std::min(by + kBlock, gt.height());
      const int xe = std::min(bx + kBlock, gt.width());
      for (int y = by; y < ye && !(fg && bg); ++y) {
        for (int x = bx; x < xe; ++x) {
          (gt.foreground(x, y) ? fg : bg) = true;
        }
      }
      if (fg && bg) ++count;
    }
  }
  return count;
}

double drd(const BinaryMask& pred, const BinaryMask& gt, const WeightMatrix5x5& weights) {
  require_same_shape(pred, gt, "drd");
  const int w = gt.width();
  const int h = gt.height();
  double total = 0.0;
  std::size_t flips = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool b = pred.foreground(x, y);
      if (b == gt.foreground(x, y)) continue;
      ++flips;
      double drd_k = 0.0;
      for (int dj = -2; dj <= 2; ++dj) {
        const int yy = std::clamp(y + dj, 0, h - 1);
        for (int di = -2; di <= 2; ++di) {
          const int xx = std::clamp(x + di, 0, w - 1);
          if (gt.foreground(xx, yy) != b) drd_k += weights.at(di, dj);
        }
      }
      total += drd_k;
    }
  }
  if (flips == 0) return 0.0;
  const std::size_t blocks = nubn(gt);
  if (blocks == 0) throw UndefinedMetric("DRD undefined on uniform GT");
  return total / double(blocks);
}

double avg_score(double fm, double pfm, double psnr_db, double drd_value) {
  if (!std::isfinite(psnr_db)) {
    throw UndefinedMetric("avg_score needs a finite PSNR; report raw metrics instead");
  }
  return (fm + pfm + psnr_db + (100.0 - drd_value)) / 4.0;
}

MetricsReport evaluate(const BinaryMask& pred, const BinaryMask& gt) {
  MetricsReport r;
  r.counts = confusion(pred, gt);
  r.fm = f_measure(r.counts);
  r.pfm = pseudo_f_measure(pred, gt);
  r.psnr = psnr(pred, gt);
  r.drd = drd(pred, gt);
  if (std::isfinite(r.psnr)) r.avg = avg_score(r.fm, r.pfm, r.psnr, r.drd);
  return r;
}

DatasetMean mean_report(std::span<const MetricsReport> reports) {
  DatasetMean m;
  m.count = reports.size();
  if (reports.empty()) return m;
  double avg_sum = 0.0;
  std::size_t avg_count = 0;
  for (const MetricsReport& r : reports) {
    m.fm += r.fm;
    m.pfm += r.pfm;
    m.psnr += r.psnr;
    m.drd += r.drd;
    if (r.avg) {
      avg_sum += *r.avg;
      ++avg_count;
    }
  }
  const double n = double(reports.size());
  m.fm /= n;
  m.pfm /= n;
  m.psnr /= n;
  m.drd /= n;
  if (avg_count > 0) m.avg = avg_sum / double(avg_count);
  return m;
}

}  // namespace docbin
