#include "pgg/payoff.hpp"

#include <algorithm>
#include <cmath>

namespace pgg {

bool is_binary_state(const StateVector& s) {
  return std::all_of(s.begin(), s.end(), [](std::uint8_t v) { return v <= 1; });
}

namespace {

// CSC skeleton of the closed-neighborhood pattern; values filled by `value(i, j)`.
template <class ValueFn>
CscMatrix closed_pattern_matrix(const Network& net, ValueFn value) {
  const std::size_t n = net.size();
  std::vector<std::size_t> ptr(n + 1, 0);
  for (AgentId j = 0; j < n; ++j) ptr[j + 1] = ptr[j] + net.degree(j) + 1;
  std::vector<AgentId> rows(ptr[n]);
  std::vector<double> vals(ptr[n]);
  for (AgentId j = 0; j < n; ++j) {
    std::size_t k = ptr[j];
    bool self_done = false;
    for (AgentId i : net.neighbors(j)) {
      if (!self_done && j < i) {
        rows[k] = j;
        vals[k++] = value(j, j);
        self_done = true;
      }
      rows[k] = i;
      vals[k++] = value(i, j);
    }
    if (!self_done) {
      rows[k] = j;
      vals[k] = value(j, j);
    }
  }
  return CscMatrix(n, std::move(ptr), std::move(rows), std::move(vals));
}

void check_dims(const InvestmentOperator& inv, const SharingOperator& share, const StateVector& s) {
  if (inv.matrix.dim() != s.size() || share.matrix.dim() != s.size())
    throw InvalidInput("operator and state dimensions differ");
}

}  // namespace

AttractivenessProfile attractiveness(const Network& net, double alpha) {
  AttractivenessProfile prof{alpha, std::vector<double>(net.size())};
  for (AgentId i = 0; i < net.size(); ++i)
    prof.values[i] = std::exp(alpha * std::log(static_cast<double>(net.degree(i) + 1)));
  return prof;
}

InvestmentOperator build_investment_operator(const Network& net, const AttractivenessProfile& prof) {
  if (prof.values.size() != net.size()) throw InvalidInput("profile and network sizes differ");
  std::vector<double> inv_norm(net.size());
  for (AgentId j = 0; j < net.size(); ++j) {
    double total = prof.values[j];
    for (AgentId l : net.neighbors(j)) total += prof.values[l];
    inv_norm[j] = 1.0 / total;
  }
  return {closed_pattern_matrix(net, [&](AgentId i, AgentId j) { return prof.values[i] * inv_norm[j]; })};
}

SharingOperator build_sharing_operator(const Network& net) {
  return {closed_pattern_matrix(net, [&](AgentId, AgentId j) {
    return 1.0 / static_cast<double>(net.degree(j) + 1);
  })};
}

void evaluate_into(const InvestmentOperator& inv, const SharingOperator& share, const StateVector& s,
                   double r, PayoffResult& out) {
  check_dims(inv, share, s);
  const std::size_t n = s.size();
  out.capital.assign(n, 0.0);
  out.payoff.assign(n, 0.0);
  out.ret.resize(n);

  const CscMatrix& a = inv.matrix;
  for (std::size_t j = 0; j < n; ++j) {
    if (!s[j]) continue;
    auto rows = a.column_rows(j);
    auto vals = a.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) out.capital[rows[k]] += vals[k];
  }
  share.matrix.multiply(out.capital, out.payoff);
  for (std::size_t i = 0; i < n; ++i) {
    out.payoff[i] *= r;
    out.ret[i] = out.payoff[i] - static_cast<double>(s[i]);
  }
}

PayoffResult evaluate(const InvestmentOperator& inv, const SharingOperator& share, const StateVector& s,
                      double r) {
  PayoffResult out;
  evaluate_into(inv, share, s, r, out);
  return out;
}

PayoffResult brute_force_payoffs(const Network& net, double alpha, const StateVector& s, double r) {
  const std::size_t n = net.size();
  if (s.size() != n) throw InvalidInput("state and network sizes differ");

  auto attract = [&](AgentId x) { return std::pow(static_cast<double>(net.degree(x) + 1), alpha); };

  // D_ji: capital investor j places in pool i.
  auto distributed = [&](AgentId j, AgentId i) {
    double denom = 0.0;
    for (AgentId l : net.closed_neighborhood(j)) denom += attract(l);
    return attract(i) * static_cast<double>(s[j]) / denom;
  };

  PayoffResult out;
  out.capital.assign(n, 0.0);
  out.payoff.assign(n, 0.0);
  out.ret.assign(n, 0.0);
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j : net.closed_neighborhood(i)) out.capital[i] += distributed(j, i);
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j : net.closed_neighborhood(i))
      out.payoff[i] += r * out.capital[j] / static_cast<double>(net.degree(j) + 1);
    out.ret[i] = out.payoff[i] - static_cast<double>(s[i]);
  }
  return out;
}

LocalReturns::LocalReturns(const Network& net, const InvestmentOperator& inv, double r)
    : net_(&net), rows_(inv.matrix.transposed()), inv_pool_size_(net.size()), r_(r) {
  if (inv.matrix.dim() != net.size()) throw InvalidInput("operator and network sizes differ");
  for (AgentId j = 0; j < net.size(); ++j) inv_pool_size_[j] = 1.0 / static_cast<double>(net.degree(j) + 1);
}

double LocalReturns::operator()(AgentId i, const StateVector& s) const {
  auto pool_capital = [&](AgentId j) {
    auto cols = rows_.column_rows(j);
    auto vals = rows_.column_values(j);
    double c = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (s[cols[k]]) c += vals[k];
    return c;
  };
  double p = pool_capital(i) * inv_pool_size_[i];
  for (AgentId j : net_->neighbors(i)) p += pool_capital(j) * inv_pool_size_[j];
  return r_ * p - static_cast<double>(s[i]);
}

}  // namespace pgg
