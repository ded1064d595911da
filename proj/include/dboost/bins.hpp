#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dboost/dataset.hpp"

namespace dboost {

/// Equal-width bins over each attribute's range, the same bin count for
/// every attribute. Bin `b` of attribute `j` is centered at
/// `min_j + (b + 0.5) * width_j` with `width_j = (max_j - min_j) / bins`.
/// A constant attribute (min == max) has a single degenerate bin at index 0.
class BinGrid {
 public:
  BinGrid() = default;
  /// Throws std::invalid_argument for `bins == 0` or a range with min > max.
  BinGrid(std::vector<AttributeRange> ranges, std::size_t bins);

  std::size_t bins() const noexcept { return bins_; }
  std::size_t attribute_count() const noexcept { return ranges_.size(); }
  const std::vector<AttributeRange>& ranges() const noexcept { return ranges_; }
  const AttributeRange& range(std::size_t j) const { return ranges_[j]; }
  double width(std::size_t j) const { return widths_[j]; }
  bool degenerate(std::size_t j) const { return widths_[j] == 0.0; }

  double center(std::size_t j, std::size_t b) const;
  /// All centers of attribute `j`; a degenerate attribute has exactly one.
  std::vector<double> centers(std::size_t j) const;

  /// Nearest center; equidistant values take the lower index and values
  /// outside the range clamp to the first or last bin. NaN maps to bin 0.
  std::size_t bin_index(std::size_t j, double value) const;

  /// Bin index of every attribute of `x` into `out` (same length as `x`).
  void assign(std::span<const double> x, std::span<std::size_t> out) const;
  std::vector<std::size_t> assign(std::span<const double> x) const;

  bool operator==(const BinGrid&) const = default;

 private:
  std::vector<AttributeRange> ranges_;
  std::vector<double> widths_;
  std::size_t bins_ = 0;
};

/// How window-tag violations scale a likelihood.
struct TagPolicy {
  bool enabled = true;
  double gain = 0.25;
  /// Apply the gain once per violating attribute instead of once per lookup.
  bool compound = false;

  bool operator==(const TagPolicy&) const = default;
};

/// For every (class k, attribute m, bin b): whether any training example of
/// class k had attribute m in bin b, and the min/max of each attribute over
/// those examples. Dense layout: ((k * M + m) * B + b) * M + j.
class TagTable {
 public:
  TagTable() = default;
  TagTable(std::size_t classes, std::size_t attributes, std::size_t bins);

  static TagTable build(const Dataset& train, const BinGrid& grid);

  std::size_t class_count() const noexcept { return classes_; }
  std::size_t attribute_count() const noexcept { return attributes_; }
  std::size_t bins() const noexcept { return bins_; }

  bool occupied(std::size_t k, std::size_t m, std::size_t b) const {
    return occupied_[cell(k, m, b)] != 0;
  }
  AttributeRange interval(std::size_t k, std::size_t m, std::size_t b, std::size_t j) const {
    const auto i = cell(k, m, b) * attributes_ + j;
    return {lo_[i], hi_[i]};
  }

  /// Number of attributes j != m of `x` outside the tag's interval. Zero for
  /// an unoccupied cell; callers check `occupied` first.
  std::size_t violations(std::size_t k, std::size_t m, std::size_t b,
                         std::span<const double> x) const;

  /// Merges `x`, observed with attribute m in bin b for class k, into the tag.
  void observe(std::size_t k, std::size_t m, std::size_t b, std::span<const double> x);

  const std::vector<double>& lo() const noexcept { return lo_; }
  const std::vector<double>& hi() const noexcept { return hi_; }
  const std::vector<unsigned char>& occupancy() const noexcept { return occupied_; }

  /// Rebuilds a table from raw arrays, as read from a model file.
  static TagTable from_arrays(std::size_t classes, std::size_t attributes, std::size_t bins,
                              std::vector<unsigned char> occupied, std::vector<double> lo,
                              std::vector<double> hi);

  bool operator==(const TagTable&) const = default;

 private:
  std::size_t cell(std::size_t k, std::size_t m, std::size_t b) const {
    return (k * attributes_ + m) * bins_ + b;
  }

  std::size_t classes_ = 0;
  std::size_t attributes_ = 0;
  std::size_t bins_ = 0;
  std::vector<unsigned char> occupied_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Multiplier for the likelihood of (k, m, b) given query `x`: 1 when tags
/// are disabled or `x` sits inside every interval of an occupied tag,
/// otherwise `policy.gain` (raised to the violation count when compounding).
/// An unoccupied cell always gets `policy.gain` once.
double window_gain(const TagTable& tags, const TagPolicy& policy, std::size_t k, std::size_t m,
                   std::size_t b, std::span<const double> x);

}  // namespace dboost
