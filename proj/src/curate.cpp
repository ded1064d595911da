#include "dboost/curate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dboost/kernels.hpp"

namespace dboost {

void CurationConfig::validate() const {
  if (std::isnan(high_confidence) || std::isnan(gap_high) || std::isnan(gap_low)) {
    throw std::invalid_argument("curation thresholds must be numbers");
  }
  if (gap_low > gap_high) throw std::invalid_argument("gap_low must not exceed gap_high");
  if (max_passes < 1) throw std::invalid_argument("max_passes must be >= 1");
}

bool rule1(const Posterior& p, std::size_t truth, const CurationConfig& cfg) {
  return p.first != truth && p.probs[p.first] >= cfg.high_confidence;
}

bool rule2(const Posterior& p, std::size_t truth, const CurationConfig& cfg) {
  return p.first != truth && p.second == truth &&
         (p.confidence_gap > cfg.gap_high || p.confidence_gap < cfg.gap_low);
}

namespace {

const char* reason_name(CurationReason r) {
  switch (r) {
    case CurationReason::rule1:
      return "rule1";
    case CurationReason::rule2:
      return "rule2";
    case CurationReason::both:
      return "both";
  }
  return "?";
}

}  // namespace

CurationResult curate(const Dataset& pool, std::span<const std::size_t> seed_rows,
                      const TrainConfig& train_cfg, const CurationConfig& cfg,
                      const EpochObserver& observer) {
  cfg.validate();
  if (seed_rows.empty()) throw std::invalid_argument("curation needs a non-empty seed");
  std::vector<unsigned char> in_set(pool.size(), 0);
  std::vector<std::size_t> rows;
  for (auto r : seed_rows) {
    if (r >= pool.size()) throw std::invalid_argument("seed row outside the pool");
    if (!in_set[r]) {
      in_set[r] = 1;
      rows.push_back(r);
    }
  }
  std::sort(rows.begin(), rows.end());

  CurationResult out;
  for (std::size_t pass = 1;; ++pass) {
    auto current = pool.subset(rows);
    auto trained = train(current, train_cfg, observer);

    PassRecord rec;
    rec.pass = pass;
    rec.pool_size = pool.size();
    rec.set_size = rows.size();
    rec.train_errors = trained.trace.returned_errors;

    const auto predictions = predict_all(trained.model, pool);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto truth = pool[i].label;
      const auto& p = predictions[i];
      if (p.first != truth) ++rec.pool_errors;
      if (in_set[i]) continue;
      const bool r1 = cfg.use_rule1 && rule1(p, truth, cfg);
      const bool r2 = cfg.use_rule2 && rule2(p, truth, cfg);
      if (!r1 && !r2) continue;
      rec.by_rule1 += r1;
      rec.by_rule2 += r2;
      rec.added.push_back({i, r1 && r2 ? CurationReason::both
                              : r1     ? CurationReason::rule1
                                       : CurationReason::rule2});
    }

    const bool added = !rec.added.empty();
    for (const auto& a : rec.added) {
      in_set[a.row] = 1;
      rows.push_back(a.row);
    }
    std::sort(rows.begin(), rows.end());
    out.report.passes.push_back(std::move(rec));

    if (!added) {
      out.report.converged = true;
      out.curated = std::move(current);
      out.model = std::move(trained.model);
      out.trace = std::move(trained.trace);
      break;
    }
    if (pass == cfg.max_passes) {
      out.curated = pool.subset(rows);
      auto final_run = train(out.curated, train_cfg, observer);
      out.model = std::move(final_run.model);
      out.trace = std::move(final_run.trace);
      break;
    }
  }
  out.rows = std::move(rows);
  out.report.final_size = out.rows.size();
  return out;
}

void write_report(std::ostream& out, const CurationReport& report) {
  for (const auto& p : report.passes) {
    out << "pass " << p.pass << " pool " << p.pool_size << " set " << p.set_size
        << " train_errors " << p.train_errors << " pool_errors " << p.pool_errors << " added "
        << p.added.size() << " rule1 " << p.by_rule1 << " rule2 " << p.by_rule2 << '\n';
    for (const auto& a : p.added) {
      out << "addition " << p.pass << ' ' << a.row << ' ' << reason_name(a.reason) << '\n';
    }
  }
  out << "final size " << report.final_size << " passes " << report.passes.size()
      << " converged " << (report.converged ? "true" : "false") << '\n';
}

}  // namespace dboost
