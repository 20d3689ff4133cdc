#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "occam/distance.hpp"
#include "occam/parallel.hpp"
#include "occam/types.hpp"

namespace occam {

// MeanOverPairs: 2/(C(C-1)) * sum_{a<b} D_ab (the reference code's scale).
// RawOrderedSum: sum_{a != b} D_ab = 2 * sum_{a<b} D_ab.
enum class IntAggregation { MeanOverPairs, RawOrderedSum };

std::string to_string(IntAggregation aggregation);
IntAggregation parse_int_aggregation(std::string_view name);

struct IntScoreConfig {
  DistanceMetric metric = DistanceMetric::Euclidean;
  IntAggregation aggregation = IntAggregation::MeanOverPairs;
};

// C x C matrix (row-major) of mean interclass distances D_ab, zero diagonal.
std::vector<double> interclass_distances(const LabeledDataset& ds, DistanceMetric metric,
                                         const ExecPolicy& policy = {});

// Throws UndefinedScore when the dataset has a single class.
double int_value(const LabeledDataset& ds, const IntScoreConfig& cfg,
                 const ExecPolicy& policy = {});

// Report form: a single-class dataset yields an undefined report.
ScoreReport int_score(const LabeledDataset& ds, const IntScoreConfig& cfg,
                      const ExecPolicy& policy = {}, std::string model_id = {});

}  // namespace occam
