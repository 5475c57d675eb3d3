#ifndef RTSCHED_ANALYSIS_H_
#define RTSCHED_ANALYSIS_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtsched/model.h"
#include "rtsched/rng.h"

namespace rtsched {

class OracleLimitError : public std::invalid_argument {
 public:
  OracleLimitError() : std::invalid_argument("oracle limited to 8 clients") {}
};

inline constexpr int kOracleClientLimit = 8;

// ---------------------------------------------------------------------------
// Payoff of a fixed priority ordering

// Expected sum_n r_n^+ * 1{n delivered} for one fixed-rate period served in
// the given priority order. Clients whose deadline has passed when their
// turn comes are skipped. Exact up to floating point: a dynamic program over
// the slot at which each prefix of the ordering is resolved. Vectors are
// indexed by client id - 1.
double ExactPayoff(std::span<const ClientId> ordering, std::span<const double> debts,
                   std::span<const double> reliability, std::span<const int> deadlines, int slots_per_period);

struct OrderingResult {
  std::vector<ClientId> ordering;
  double payoff = 0.0;
};

// Enumerates every permutation of the arrived clients with positive debt and
// returns the lexicographically first maximiser of ExactPayoff.
OrderingResult BruteForceBestOrdering(std::span<const ClientId> arrivals, std::span<const double> debts,
                                      std::span<const double> reliability, std::span<const int> deadlines,
                                      int slots_per_period);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

// Runs the ordering through the fixed-rate period engine repeatedly.
MonteCarloEstimate SimulatePayoff(std::span<const ClientId> ordering, std::span<const double> debts,
                                  std::span<const double> reliability, std::span<const int> deadlines,
                                  int slots_per_period, std::int64_t trials, Rng& rng);

// ---------------------------------------------------------------------------
// Rate-adaptation subset oracle

// Served in (tau, id) order, every client finishes by its own deadline.
bool IsEdfFeasible(std::span<const ClientId> subset, std::span<const int> service_times,
                   std::span<const int> deadlines);

struct SubsetResult {
  std::vector<ClientId> subset;  // EDF order
  Rational value;
};

// Exhaustive search over all subsets of the arrival set.
SubsetResult KnapsackOracle(std::span<const ClientId> arrivals, std::span<const Rational> debts,
                            std::span<const int> service_times, std::span<const int> deadlines);

// ---------------------------------------------------------------------------
// Admission control

enum class Verdict { kStrictlyFeasible, kInfeasible, kInconclusive };
const char* VerdictName(Verdict v);

struct SubsetRow {
  std::uint32_t members = 0;  // bit n-1 set for client n
  double workload = 0.0;      // sum q_n / p_n
  double idle_mean = 0.0;     // E[I_S]
  double idle_half_width = 0.0;
  double margin = 0.0;        // T - E[I_S] - workload
};

struct FeasibilityReport {
  std::vector<SubsetRow> subsets;  // indexed by member mask; row 0 is the empty set
  Verdict verdict = Verdict::kInconclusive;
  bool exact = false;
  // min over non-empty S of margin / (T - E[I_S]).
  double min_relative_margin = 0.0;
};

struct FeasibilityOptions {
  std::int64_t monte_carlo_periods = 100000;
  std::uint64_t seed = 1;
  double z = 3.0;  // half-width in standard errors
  bool force_monte_carlo = false;
};

// Subset workload test for a static channel with every deadline equal to T
// and at most 15 clients. E[I_S] is exact (cycle enumeration with idle-time
// convolution) when every arrival process is periodic, otherwise a Monte
// Carlo estimate of the work-conserving serve-S-only discipline. The empty
// set has E[I] = T and margin 0 and does not enter the verdict.
FeasibilityReport FeasibilityTest(const SystemConfig& config, const FeasibilityOptions& options = {});

// ---------------------------------------------------------------------------
// Fulfillment

struct FulfillmentVerdict {
  ClientId client = 0;
  double slope = 0.0;       // least-squares slope of r^+ over the window
  double debt_rate = 0.0;   // r^+(K) / K
  bool fulfilled = false;
};

double LeastSquaresSlope(std::span<const double> values);

// Needs at least 2 * window periods in the series.
std::vector<FulfillmentVerdict> FulfillmentCheck(const MetricsSeries& series, std::size_t window,
                                                 double tolerance = 1e-3);

}  // namespace rtsched

#endif  // RTSCHED_ANALYSIS_H_
