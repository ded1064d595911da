#include "dboost/bins.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dboost {

BinGrid::BinGrid(std::vector<AttributeRange> ranges, std::size_t bins)
    : ranges_(std::move(ranges)), bins_(bins) {
  if (bins_ == 0) throw std::invalid_argument("bin count must be at least 1");
  widths_.reserve(ranges_.size());
  for (const auto& r : ranges_) {
    if (!(r.min <= r.max) || !std::isfinite(r.min) || !std::isfinite(r.max)) {
      throw std::invalid_argument("attribute range must be finite with min <= max");
    }
    widths_.push_back((r.max - r.min) / static_cast<double>(bins_));
  }
}

double BinGrid::center(std::size_t j, std::size_t b) const {
  if (degenerate(j)) return ranges_[j].min;
  return ranges_[j].min + (static_cast<double>(b) + 0.5) * widths_[j];
}

std::vector<double> BinGrid::centers(std::size_t j) const {
  if (degenerate(j)) return {ranges_[j].min};
  std::vector<double> c(bins_);
  for (std::size_t b = 0; b < bins_; ++b) c[b] = center(j, b);
  return c;
}

std::size_t BinGrid::bin_index(std::size_t j, double value) const {
  if (degenerate(j) || !(value > ranges_[j].min)) return 0;  // also catches NaN
  if (value >= ranges_[j].max) return bins_ - 1;

  // Bin b owns (min + b*w, min + (b+1)*w]; refine against the actual centers
  // so rounding in the division cannot disagree with a nearest-center scan.
  const double t = (value - ranges_[j].min) / widths_[j];
  const auto last = static_cast<double>(bins_ - 1);
  std::size_t best = static_cast<std::size_t>(std::clamp(std::ceil(t) - 1.0, 0.0, last));
  double best_dist = std::abs(value - center(j, best));
  if (best > 0) {
    const double d = std::abs(value - center(j, best - 1));
    if (d <= best_dist) {
      best_dist = d;
      --best;
    }
  }
  if (best + 1 < bins_ && std::abs(value - center(j, best + 1)) < best_dist) ++best;
  return best;
}

void BinGrid::assign(std::span<const double> x, std::span<std::size_t> out) const {
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = bin_index(j, x[j]);
}

std::vector<std::size_t> BinGrid::assign(std::span<const double> x) const {
  std::vector<std::size_t> out(x.size());
  assign(x, out);
  return out;
}

TagTable::TagTable(std::size_t classes, std::size_t attributes, std::size_t bins)
    : classes_(classes),
      attributes_(attributes),
      bins_(bins),
      occupied_(classes * attributes * bins, 0),
      lo_(classes * attributes * bins * attributes, 0.0),
      hi_(classes * attributes * bins * attributes, 0.0) {}

TagTable TagTable::build(const Dataset& train, const BinGrid& grid) {
  TagTable tags(train.class_count(), train.attribute_count(), grid.bins());
  std::vector<std::size_t> bins(train.attribute_count());
  for (const auto& e : train) {
    grid.assign(e.attributes, bins);
    for (std::size_t m = 0; m < bins.size(); ++m) tags.observe(e.label, m, bins[m], e.attributes);
  }
  return tags;
}

void TagTable::observe(std::size_t k, std::size_t m, std::size_t b, std::span<const double> x) {
  const auto c = cell(k, m, b);
  const auto base = c * attributes_;
  if (!occupied_[c]) {
    occupied_[c] = 1;
    std::copy(x.begin(), x.end(), lo_.begin() + static_cast<std::ptrdiff_t>(base));
    std::copy(x.begin(), x.end(), hi_.begin() + static_cast<std::ptrdiff_t>(base));
    return;
  }
  for (std::size_t j = 0; j < attributes_; ++j) {
    lo_[base + j] = std::min(lo_[base + j], x[j]);
    hi_[base + j] = std::max(hi_[base + j], x[j]);
  }
}

std::size_t TagTable::violations(std::size_t k, std::size_t m, std::size_t b,
                                 std::span<const double> x) const {
  const auto c = cell(k, m, b);
  if (!occupied_[c]) return 0;
  const double* lo = lo_.data() + c * attributes_;
  const double* hi = hi_.data() + c * attributes_;
  std::size_t n = 0;
  for (std::size_t j = 0; j < attributes_; ++j) {
    if (j != m && (x[j] < lo[j] || x[j] > hi[j])) ++n;
  }
  return n;
}

TagTable TagTable::from_arrays(std::size_t classes, std::size_t attributes, std::size_t bins,
                               std::vector<unsigned char> occupied, std::vector<double> lo,
                               std::vector<double> hi) {
  TagTable t;
  t.classes_ = classes;
  t.attributes_ = attributes;
  t.bins_ = bins;
  const auto cells = classes * attributes * bins;
  if (occupied.size() != cells || lo.size() != cells * attributes ||
      hi.size() != cells * attributes) {
    throw std::invalid_argument("tag arrays do not match the table shape");
  }
  t.occupied_ = std::move(occupied);
  t.lo_ = std::move(lo);
  t.hi_ = std::move(hi);
  return t;
}

double window_gain(const TagTable& tags, const TagPolicy& policy, std::size_t k, std::size_t m,
                   std::size_t b, std::span<const double> x) {
  if (!policy.enabled) return 1.0;
  if (!tags.occupied(k, m, b)) return policy.gain;
  const auto n = tags.violations(k, m, b, x);
  if (n == 0) return 1.0;
  return policy.compound ? std::pow(policy.gain, static_cast<double>(n)) : policy.gain;
}

}  // namespace dboost
