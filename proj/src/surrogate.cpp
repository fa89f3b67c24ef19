#include "imgep/surrogate.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace imgep {

SurrogateModel::SurrogateModel(const MetaPolicyArchive& archive, Problem p, SurrogateConfig cfg)
    : cfg_(cfg), dim_(archive.context_dim() + archive.theta_dim()), index_(dim_) {
  if (cfg_.neighbors == 0) throw std::invalid_argument("surrogate needs at least one neighbour");
  if (archive.size() < cfg_.neighbors)
    throw std::invalid_argument("surrogate needs at least K archived experiments");
  if (cfg_.bandwidth && *cfg_.bandwidth < 0.0) throw std::invalid_argument("negative bandwidth");
  inputs_.reserve(archive.size());
  rewards_.reserve(archive.size());
  for (std::size_t i = 0; i < archive.size(); ++i) {
    const auto& e = archive.at(i);
    Vector x = e.context.values;
    x.insert(x.end(), e.theta.values.begin(), e.theta.values.end());
    index_.insert(x, i);
    inputs_.push_back(std::move(x));
    rewards_.push_back(modular_reward(p, e.outcome, archive.spaces()));
  }
  index_.rebuild();
}

double SurrogateModel::predict(const Context& c, const PolicyParams& theta) const {
  Vector q = c.values;
  q.insert(q.end(), theta.values.begin(), theta.values.end());
  if (q.size() != dim_) throw std::invalid_argument("surrogate query has wrong dimension");

  const auto nn = index_.k_nearest(q, cfg_.neighbors);
  std::vector<double> dist(nn.size());
  double mean = 0.0;
  for (std::size_t j = 0; j < nn.size(); ++j) {
    dist[j] = std::sqrt(nn[j].score);
    mean += dist[j];
  }
  mean /= static_cast<double>(nn.size());
  const double h = cfg_.bandwidth.value_or(mean);

  if (h == 0.0) {
    // Degenerate kernel: average of the samples sitting exactly on the query.
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t j = 0; j < nn.size(); ++j) {
      if (dist[j] == 0.0) {
        sum += rewards_[nn[j].id];
        ++n;
      }
    }
    return n ? sum / static_cast<double>(n) : rewards_[nn.front().id];
  }

  const auto k = static_cast<Eigen::Index>(nn.size());
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd a(k, d + 1);
  Eigen::VectorXd y(k), w(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& x = inputs_[nn[static_cast<std::size_t>(j)].id];
    a(j, 0) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) a(j, i + 1) = x[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(i)];
    y(j) = rewards_[nn[static_cast<std::size_t>(j)].id];
    const double r = dist[static_cast<std::size_t>(j)] / h;
    w(j) = std::exp(-0.5 * r * r);
  }
  Eigen::MatrixXd normal = a.transpose() * w.asDiagonal() * a;
  normal.diagonal().tail(d).array() += cfg_.ridge;
  const Eigen::VectorXd rhs = a.transpose() * w.asDiagonal() * y;
  const Eigen::VectorXd beta = normal.ldlt().solve(rhs);
  return beta(0);
}

}  // namespace imgep
