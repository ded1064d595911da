#include "dboost/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace dboost {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> to_real(std::string_view field) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<int> to_int(std::string_view field) {
  int value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::string format_real(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

Dataset::Dataset(std::vector<std::string> classes, std::size_t attribute_count,
                 std::vector<Example> examples)
    : classes_(std::move(classes)),
      attribute_count_(attribute_count),
      examples_(std::move(examples)) {
  for (std::size_t i = 1; i < classes_.size(); ++i) {
    if (!(classes_[i - 1] < classes_[i])) {
      throw std::invalid_argument("class inventory must be sorted and duplicate-free");
    }
  }
  for (const auto& e : examples_) {
    if (e.attributes.size() != attribute_count_) {
      throw std::invalid_argument("example has " + std::to_string(e.attributes.size()) +
                                  " attributes, expected " + std::to_string(attribute_count_));
    }
    if (e.label >= classes_.size()) throw std::invalid_argument("example label out of range");
  }
}

std::optional<std::size_t> Dataset::class_index(std::string_view label) const {
  auto it = std::lower_bound(classes_.begin(), classes_.end(), label);
  if (it == classes_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - classes_.begin());
}

Dataset Dataset::rows(std::size_t first, std::size_t last) const {
  if (first > last || last > examples_.size()) throw std::out_of_range("row range out of bounds");
  return Dataset(classes_, attribute_count_,
                 std::vector<Example>(examples_.begin() + static_cast<std::ptrdiff_t>(first),
                                      examples_.begin() + static_cast<std::ptrdiff_t>(last)));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<Example> picked;
  picked.reserve(rows.size());
  for (auto r : rows) picked.push_back(examples_.at(r));
  return Dataset(classes_, attribute_count_, std::move(picked));
}

Dataset parse_letters(std::istream& in) {
  std::vector<std::string> classes;
  for (char c = 'A'; c <= 'Z'; ++c) classes.emplace_back(1, c);

  std::vector<Example> examples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    if (fields.size() != kLettersAttributeCount + 1) {
      throw ParseError(line_no, "expected 17 fields, got " + std::to_string(fields.size()));
    }
    const auto label = fields[0];
    if (label.size() != 1 || label[0] < 'A' || label[0] > 'Z') {
      throw ParseError(line_no, "label must be a single uppercase letter, got '" +
                                    std::string(label) + "'");
    }
    Example e;
    e.label = static_cast<std::size_t>(label[0] - 'A');
    e.attributes.reserve(kLettersAttributeCount);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const auto v = to_int(fields[f]);
      if (!v) {
        throw ParseError(line_no, "attribute " + std::to_string(f) + " is not an integer: '" +
                                      std::string(fields[f]) + "'");
      }
      e.attributes.push_back(*v);
    }
    examples.push_back(std::move(e));
  }
  return Dataset(std::move(classes), kLettersAttributeCount, std::move(examples));
}

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::pair<std::string, std::vector<double>>> raw;
  std::optional<std::size_t> arity;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = options.header;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    if (header_pending) {
      header_pending = false;
      arity = fields.size();
      continue;
    }
    if (!arity) arity = fields.size();
    if (fields.size() != *arity) {
      throw ParseError(line_no, "expected " + std::to_string(*arity) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    if (fields.size() < 2) throw ParseError(line_no, "need a label and at least one attribute");
    if (fields[0].empty()) throw ParseError(line_no, "empty label");
    std::vector<double> attrs;
    attrs.reserve(fields.size() - 1);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const auto v = to_real(fields[f]);
      if (!v) {
        throw ParseError(line_no, "attribute " + std::to_string(f) + " is not a number: '" +
                                      std::string(fields[f]) + "'");
      }
      attrs.push_back(*v);
    }
    raw.emplace_back(std::string(fields[0]), std::move(attrs));
  }

  std::map<std::string, std::size_t> index;
  for (const auto& [label, _] : raw) index.emplace(label, 0);
  std::vector<std::string> classes;
  for (auto& [label, idx] : index) {
    idx = classes.size();
    classes.push_back(label);
  }
  std::vector<Example> examples;
  examples.reserve(raw.size());
  for (auto& [label, attrs] : raw) examples.push_back({index.at(label), std::move(attrs)});
  const std::size_t m = arity && *arity > 0 ? *arity - 1 : 0;
  return Dataset(std::move(classes), m, std::move(examples));
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (const auto& e : ds) {
    out << ds.label_name(e);
    for (double v : e.attributes) out << ',' << format_real(v);
    out << '\n';
  }
}

std::vector<Record> parse_records(std::istream& in, std::size_t attribute_count) {
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    Record r;
    r.line = line_no;
    std::size_t first = 0;
    if (fields.size() == attribute_count + 1) {
      if (fields[0].empty()) throw ParseError(line_no, "empty label");
      r.label = std::string(fields[0]);
      first = 1;
    } else if (fields.size() != attribute_count) {
      throw ParseError(line_no, "expected " + std::to_string(attribute_count) + " or " +
                                    std::to_string(attribute_count + 1) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    for (std::size_t f = first; f < fields.size(); ++f) {
      const auto v = to_real(fields[f]);
      if (!v) {
        throw ParseError(line_no, "field " + std::to_string(f + 1) + " is not a number: '" +
                                      std::string(fields[f]) + "'");
      }
      r.attributes.push_back(*v);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, std::size_t n_train) {
  if (n_train > ds.size()) {
    throw std::invalid_argument("split point " + std::to_string(n_train) + " exceeds dataset size " +
                                std::to_string(ds.size()));
  }
  return {ds.rows(0, n_train), ds.rows(n_train, ds.size())};
}

std::vector<AttributeRange> attribute_ranges(const Dataset& ds) {
  if (ds.empty()) throw std::invalid_argument("attribute ranges of an empty dataset");
  std::vector<AttributeRange> ranges(ds.attribute_count());
  for (std::size_t j = 0; j < ranges.size(); ++j) {
    ranges[j] = {ds[0].attributes[j], ds[0].attributes[j]};
  }
  for (const auto& e : ds) {
    for (std::size_t j = 0; j < ranges.size(); ++j) {
      ranges[j].min = std::min(ranges[j].min, e.attributes[j]);
      ranges[j].max = std::max(ranges[j].max, e.attributes[j]);
    }
  }
  return ranges;
}

std::string digest(const Dataset& ds) {
  std::ostringstream canon;
  canon << "classes";
  for (const auto& c : ds.classes()) canon << ',' << c;
  canon << "\nattributes," << ds.attribute_count() << '\n';
  write_csv(canon, ds);
  const std::string text = canon.str();

  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

}  // namespace dboost
