#include "dboost/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dboost {

std::vector<Posterior> predict_all(const CountModel& model, const ScoreCache& cache) {
  std::vector<Posterior> out(cache.size());
  const auto n = static_cast<std::ptrdiff_t>(cache.size());
#pragma omp parallel
  {
    std::vector<double> scores(model.class_count());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      cache.log_scores(model, static_cast<std::size_t>(i), scores);
      out[static_cast<std::size_t>(i)] = make_posterior(scores);
    }
  }
  return out;
}

std::vector<Posterior> predict_all(const CountModel& model, const Dataset& ds) {
  return predict_all(model, ScoreCache(model, ds));
}

std::vector<Posterior> predict_all_serial(const CountModel& model, const Dataset& ds) {
  std::vector<Posterior> out;
  out.reserve(ds.size());
  for (const auto& e : ds) out.push_back(posterior(model, e.attributes));
  return out;
}

std::size_t count_misclassified(const CountModel& model, const ScoreCache& cache,
                                std::span<const std::size_t> labels) {
  const auto n = static_cast<std::ptrdiff_t>(cache.size());
  std::size_t wrong = 0;
#pragma omp parallel reduction(+ : wrong)
  {
    std::vector<double> scores(model.class_count());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto row = static_cast<std::size_t>(i);
      cache.log_scores(model, row, scores);
      if (make_posterior(scores).first != labels[row]) ++wrong;
    }
  }
  return wrong;
}

std::size_t count_misclassified_serial(const CountModel& model, const Dataset& ds) {
  std::size_t wrong = 0;
  for (const auto& e : ds) {
    if (posterior(model, e.attributes).first != e.label) ++wrong;
  }
  return wrong;
}

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace dboost
