#pragma once

#include <span>
#include <vector>

#include "pgg/common.hpp"
#include "pgg/graph.hpp"
#include "pgg/sparse.hpp"

namespace pgg {

/// Pool attractiveness (k_i + 1)^alpha for every agent.
struct AttractivenessProfile {
  double alpha = 0.0;
  std::vector<double> values;
};

/// a_ij: share of investor j's unit capital placed in pool i. Nonzero exactly
/// on the closed neighborhood pattern; every column sums to one.
struct InvestmentOperator {
  CscMatrix matrix;
};

/// b_ij = 1 / (k_j + 1) on the closed neighborhood pattern; every column sums
/// to one.
struct SharingOperator {
  CscMatrix matrix;
};

struct PayoffResult {
  std::vector<double> capital;  // C, per pool
  std::vector<double> payoff;   // P, per agent
  std::vector<double> ret;      // R = P - s
};

AttractivenessProfile attractiveness(const Network& net, double alpha);

InvestmentOperator build_investment_operator(const Network& net, const AttractivenessProfile& prof);
SharingOperator build_sharing_operator(const Network& net);

/// C = A s, P = r B C, R = P - s. Throws InvalidInput on dimension mismatch.
PayoffResult evaluate(const InvestmentOperator& inv, const SharingOperator& share,
                      const StateVector& s, double r);

/// Same as evaluate but reuses the buffers in `out`.
void evaluate_into(const InvestmentOperator& inv, const SharingOperator& share,
                   const StateVector& s, double r, PayoffResult& out);

/// Direct per-agent evaluation of the capital distribution, pool accumulation
/// and sharing sums. Builds no matrices; used as a test oracle.
PayoffResult brute_force_payoffs(const Network& net, double alpha, const StateVector& s, double r);

/// Return R_i computed from the current state by touching only the two-hop
/// neighborhood of i. Used by the random sequential scheduler.
class LocalReturns {
 public:
  LocalReturns(const Network& net, const InvestmentOperator& inv, double r);

  double operator()(AgentId i, const StateVector& s) const;

 private:
  const Network* net_;
  CscMatrix rows_;  // transpose of A: column j holds row j of A
  std::vector<double> inv_pool_size_;
  double r_;
};

}  // namespace pgg
