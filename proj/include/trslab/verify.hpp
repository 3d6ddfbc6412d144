#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trslab/experiments.hpp"

namespace trslab {

enum class VerifyScale { Quick, Full };

/// One checked property. `margin` is limit - measured in the direction that
/// makes a positive margin a pass (for ratio properties, limit / measured - 1).
struct PropertyResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double limit = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<PropertyResult> results;
  bool pass() const;
};

/// Worker count: TRSLAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned threadBudget();

/// Floors below which a measured error counts as roundoff.
struct FloorPolicy {
  double relative = 1e-14;
};

/// Property checks on a finished experiment run.
std::vector<PropertyResult> checkTable(const ExperimentTable& table,
                                       const FloorPolicy& floor = {});

/// Fitted log-slopes over the linear regime and the slopes of the matching bounds.
struct RateSummary {
  std::optional<RateFit> lambdaGap, qGap, sine, resid;
  double lambdaBoundSlope = 0.0;  // over the lambda-gap window
  double qBoundSlope = 0.0;
  double sineBoundSlope = 0.0;    // asymptotic, from the bound formula at large k
  double residBoundSlope = 0.0;
  double logT = 0.0;
};

RateSummary measureRates(const ExperimentTable& table);

/// Runs every property suite. Families run on min(threadBudget(), 5) workers.
VerifyReport runVerification(VerifyScale scale, unsigned threads = threadBudget());

std::string formatReport(const VerifyReport& report);

}  // namespace trslab
