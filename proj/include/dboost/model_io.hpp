#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dboost/bayes.hpp"

namespace dboost {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatName = "dboost-model";

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything in a model file besides the model itself.
struct ModelInfo {
  /// Echo of the training and curation settings; stored verbatim.
  nlohmann::ordered_json training = nlohmann::ordered_json::object();
  std::string dataset_digest;
};

struct ModelFile {
  CountModel model;
  ModelInfo info;
};

/// JSON document with dense tables in class x attribute x bin order.
/// Doubles are written in shortest round-trip form, so a reloaded model
/// predicts bit-identically and equal inputs give byte-identical files.
void save_model(std::ostream& out, const CountModel& model, const ModelInfo& info = {});
void save_model(const std::string& path, const CountModel& model, const ModelInfo& info = {});

/// Throws ModelFormatError for a foreign document, a different format
/// version, or inconsistent tables.
ModelFile load_model(std::istream& in);
ModelFile load_model(const std::string& path);

}  // namespace dboost
