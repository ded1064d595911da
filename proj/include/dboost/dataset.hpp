#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dboost {

/// One labeled observation. `label` indexes the owning dataset's class inventory.
struct Example {
  std::size_t label = 0;
  std::vector<double> attributes;

  bool operator==(const Example&) const = default;
};

struct AttributeRange {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const AttributeRange&) const = default;
};

/// Raised for malformed input text. `line()` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a model and a dataset disagree on attribute count or classes.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable labeled dataset. The class inventory is sorted lexicographically
/// and duplicate-free; every example's label indexes into it.
class Dataset {
 public:
  Dataset() = default;

  /// Throws std::invalid_argument if an example has the wrong attribute count,
  /// a label is out of range, or `classes` is not strictly increasing.
  Dataset(std::vector<std::string> classes, std::size_t attribute_count,
          std::vector<Example> examples);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t class_count() const noexcept { return classes_.size(); }
  std::size_t attribute_count() const noexcept { return attribute_count_; }
  std::size_t size() const noexcept { return examples_.size(); }
  bool empty() const noexcept { return examples_.empty(); }

  const Example& operator[](std::size_t i) const { return examples_[i]; }
  const std::vector<Example>& examples() const noexcept { return examples_; }
  auto begin() const noexcept { return examples_.begin(); }
  auto end() const noexcept { return examples_.end(); }

  std::optional<std::size_t> class_index(std::string_view label) const;
  const std::string& label_name(const Example& e) const { return classes_[e.label]; }

  /// Rows `[first, last)` in order; the class inventory is kept.
  Dataset rows(std::size_t first, std::size_t last) const;
  /// The listed rows in the listed order; the class inventory is kept.
  Dataset subset(std::span<const std::size_t> rows) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> classes_;
  std::size_t attribute_count_ = 0;
  std::vector<Example> examples_;
};

inline constexpr std::size_t kLettersAttributeCount = 16;

/// UCI letter-recognition text: `LABEL,v1,...,v16`, LABEL in A-Z, integer
/// attributes, no header. Blank lines are skipped. The inventory is always A-Z.
Dataset parse_letters(std::istream& in);

struct CsvOptions {
  bool header = false;
};

/// Generic CSV with the label in the first column. The attribute count is
/// taken from the first record; the inventory is the sorted set of labels seen.
Dataset parse_csv(std::istream& in, const CsvOptions& options = {});

/// Writes label-first CSV. For letters data the output is the UCI layout.
void write_csv(std::ostream& out, const Dataset& ds);

/// A record that may or may not carry a label, as read for prediction.
struct Record {
  std::optional<std::string> label;
  std::vector<double> attributes;
  std::size_t line = 0;
};

/// Each non-blank line holds either `attribute_count` numbers (unlabeled) or
/// a label followed by `attribute_count` numbers.
std::vector<Record> parse_records(std::istream& in, std::size_t attribute_count);

/// First `n_train` examples and the remainder, both in file order.
std::pair<Dataset, Dataset> split(const Dataset& ds, std::size_t n_train);

/// Elementwise min/max over all examples. Throws std::invalid_argument when empty.
std::vector<AttributeRange> attribute_ranges(const Dataset& ds);

/// SHA-256 (hex) of the dataset's canonical CSV rendering.
std::string digest(const Dataset& ds);

}  // namespace dboost
