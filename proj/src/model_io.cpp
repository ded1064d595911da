#include "dboost/model_io.hpp"

#include <array>
#include <fstream>
#include <ostream>

namespace dboost {

using json = nlohmann::ordered_json;

void save_model(std::ostream& out, const CountModel& model, const ModelInfo& info) {
  const auto& grid = model.grid();
  json ranges = json::array();
  json centers = json::array();
  for (std::size_t j = 0; j < grid.attribute_count(); ++j) {
    ranges.push_back({grid.range(j).min, grid.range(j).max});
    centers.push_back(grid.centers(j));
  }

  json doc;
  doc["format"] = kModelFormatName;
  doc["version"] = kModelFormatVersion;
  doc["classes"] = model.classes();
  doc["attributes"] = model.attribute_count();
  doc["bins"] = model.bins();
  doc["ranges"] = std::move(ranges);
  doc["centers"] = std::move(centers);
  doc["total"] = model.total();
  doc["epsilon"] = model.epsilon();
  doc["counts"] = model.counts().counts;
  doc["weights"] = model.weights();
  doc["tags"] = {
      {"enabled", model.policy().enabled},
      {"gain", model.policy().gain},
      {"compound", model.policy().compound},
      {"occupied", model.tags().occupancy()},
      {"lo", model.tags().lo()},
      {"hi", model.tags().hi()},
  };
  doc["training"] = info.training;
  doc["provenance"] = {{"dataset_digest", info.dataset_digest}};
  out << doc.dump() << '\n';
}

void save_model(const std::string& path, const CountModel& model, const ModelInfo& info) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  save_model(out, model, info);
  if (!out) throw std::runtime_error("failed writing model file '" + path + "'");
}

namespace {

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ModelFormatError(std::string("model file lacks '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("bad '") + key + "' in model file: " + e.what());
  }
}

}  // namespace

ModelFile load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format") ||
      doc["format"] != json(kModelFormatName)) {
    throw ModelFormatError("not a dboost model file");
  }
  const auto version = field<int>(doc, "version");
  if (version != kModelFormatVersion) {
    throw ModelFormatError("model format version " + std::to_string(version) +
                           " is not supported (expected " +
                           std::to_string(kModelFormatVersion) + ")");
  }

  const auto classes = field<std::vector<std::string>>(doc, "classes");
  const auto m = field<std::size_t>(doc, "attributes");
  const auto b = field<std::size_t>(doc, "bins");
  const auto raw_ranges = field<std::vector<std::array<double, 2>>>(doc, "ranges");
  const auto raw_centers = field<std::vector<std::vector<double>>>(doc, "centers");
  if (raw_ranges.size() != m || raw_centers.size() != m) {
    throw ModelFormatError("range/center tables do not match the attribute count");
  }
  for (std::size_t i = 1; i < classes.size(); ++i) {
    if (!(classes[i - 1] < classes[i])) throw ModelFormatError("class inventory is not sorted");
  }

  try {
    std::vector<AttributeRange> ranges;
    for (const auto& r : raw_ranges) ranges.push_back({r[0], r[1]});
    BinGrid grid(std::move(ranges), b);
    for (std::size_t j = 0; j < m; ++j) {
      if (grid.centers(j) != raw_centers[j]) {
        throw ModelFormatError("stored bin centers disagree with the stored ranges");
      }
    }

    const auto& tag_doc = doc.at("tags");
    TagPolicy policy{field<bool>(tag_doc, "enabled"), field<double>(tag_doc, "gain"),
                     field<bool>(tag_doc, "compound")};
    auto tags = TagTable::from_arrays(classes.size(), m, b,
                                      field<std::vector<unsigned char>>(tag_doc, "occupied"),
                                      field<std::vector<double>>(tag_doc, "lo"),
                                      field<std::vector<double>>(tag_doc, "hi"));

    CountTable counts;
    counts.classes = classes.size();
    counts.attributes = m;
    counts.bins = b;
    counts.counts = field<std::vector<std::uint32_t>>(doc, "counts");
    counts.total = field<std::size_t>(doc, "total");

    ModelFile file;
    file.model = CountModel::from_parts(classes, std::move(grid), std::move(tags), policy,
                                        std::move(counts), field<double>(doc, "epsilon"),
                                        field<std::vector<double>>(doc, "weights"));
    if (doc.contains("training")) file.info.training = doc["training"];
    if (doc.contains("provenance") && doc["provenance"].contains("dataset_digest")) {
      file.info.dataset_digest = doc["provenance"]["dataset_digest"].get<std::string>();
    }
    return file;
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("inconsistent model file: ") + e.what());
  }
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  return load_model(in);
}

}  // namespace dboost
