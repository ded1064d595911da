#pragma once

// Batch prediction kernels. Each has an OpenMP version over examples and a
// serial reference that goes through the scalar `posterior` path; tests
// check the two agree exactly.

#include <cstddef>
#include <span>
#include <vector>

#include "dboost/bayes.hpp"
#include "dboost/dataset.hpp"

namespace dboost {

std::vector<Posterior> predict_all(const CountModel& model, const ScoreCache& cache);
std::vector<Posterior> predict_all(const CountModel& model, const Dataset& ds);
std::vector<Posterior> predict_all_serial(const CountModel& model, const Dataset& ds);

/// Examples whose first guess differs from `labels[i]` (model class indices).
std::size_t count_misclassified(const CountModel& model, const ScoreCache& cache,
                                std::span<const std::size_t> labels);
std::size_t count_misclassified_serial(const CountModel& model, const Dataset& ds);

/// Thread count used by the kernels (1 when built without OpenMP).
int kernel_threads();

}  // namespace dboost
