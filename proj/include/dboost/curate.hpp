#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "dboost/bayes.hpp"
#include "dboost/boost.hpp"
#include "dboost/dataset.hpp"

namespace dboost {

/// Thresholds are fractions of probability mass. Values outside [0, 1] are
/// accepted and simply make a rule unsatisfiable.
struct CurationConfig {
  double high_confidence = 0.90;
  double gap_high = 0.90;
  double gap_low = 0.02;
  std::size_t max_passes = 10;
  bool use_rule1 = true;
  bool use_rule2 = true;

  /// Throws std::invalid_argument for NaN thresholds, gap_low > gap_high,
  /// or max_passes == 0.
  void validate() const;
};

/// Wrong first guess held with probability >= high_confidence.
bool rule1(const Posterior& p, std::size_t truth, const CurationConfig& cfg);
/// Wrong first guess, correct second guess, and a first/second gap strictly
/// above gap_high or strictly below gap_low.
bool rule2(const Posterior& p, std::size_t truth, const CurationConfig& cfg);

enum class CurationReason { rule1, rule2, both };

struct Addition {
  std::size_t row = 0;  // pool row
  CurationReason reason = CurationReason::rule1;
};

struct PassRecord {
  std::size_t pass = 0;  // 1-based
  std::size_t pool_size = 0;
  std::size_t set_size = 0;  // before this pass's additions
  std::size_t train_errors = 0;
  std::size_t pool_errors = 0;
  std::size_t by_rule1 = 0;  // additions satisfying rule 1 (including both)
  std::size_t by_rule2 = 0;  // additions satisfying rule 2 (including both)
  std::vector<Addition> added;
};

struct CurationReport {
  std::vector<PassRecord> passes;
  std::size_t final_size = 0;
  /// The last pass added nothing.
  bool converged = false;
};

struct CurationResult {
  /// Pool rows of the curated set, ascending.
  std::vector<std::size_t> rows;
  Dataset curated;
  /// Trained on `curated`.
  CountModel model;
  TrainTrace trace;
  CurationReport report;
};

/// Starting from `seed_rows` of `pool`: train, predict the pool, add every
/// pool example not yet in the set that satisfies a rule; repeat until a
/// pass adds nothing or `max_passes` passes ran. The curated set is kept in
/// pool order. Throws std::invalid_argument for an empty seed or a seed row
/// outside the pool.
CurationResult curate(const Dataset& pool, std::span<const std::size_t> seed_rows,
                      const TrainConfig& train_cfg, const CurationConfig& cfg,
                      const EpochObserver& observer = {});

/// One `pass ...` line per pass, one `addition ...` line per added row, and
/// a closing `final ...` line.
void write_report(std::ostream& out, const CurationReport& report);

}  // namespace dboost
