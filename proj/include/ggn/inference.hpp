#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "ggn/ggn.hpp"
#include "ggn/graph.hpp"

namespace ggn {

// Square real matrix tuned for the kernel computation: rows of sorted
// (column, value) pairs, switching to a flat dense buffer when a matrix
// exceeds 25% density. Both storages iterate entries in identical order, so
// results do not depend on the representation. Exact zeros are never stored.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(int n) : n_(n), rows_(n) {
    if (n < 0) throw std::invalid_argument("matrix size must be >= 0");
  }

  static ScoreMatrix identity(int n) {
    ScoreMatrix m(n);
    for (int i = 0; i < n; ++i) m.rows_[i].push_back({i, 1.0});
    m.nonzeros_ = n;
    return m;
  }

  // Duplicate (row, col) entries are summed; exact-zero results dropped.
  static ScoreMatrix from_entries(int n,
                                  std::vector<std::tuple<int, int, double>> entries) {
    ScoreMatrix m(n);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                return std::pair{std::get<0>(a), std::get<1>(a)} <
                       std::pair{std::get<0>(b), std::get<1>(b)};
              });
    for (std::size_t k = 0; k < entries.size();) {
      const auto [i, j, first] = entries[k];
      if (i < 0 || i >= n || j < 0 || j >= n)
        throw std::invalid_argument("matrix entry out of range");
      double sum = first;
      std::size_t next = k + 1;
      while (next < entries.size() && std::get<0>(entries[next]) == i &&
             std::get<1>(entries[next]) == j) {
        sum += std::get<2>(entries[next]);
        ++next;
      }
      if (!std::isfinite(sum)) throw std::invalid_argument("matrix entries must be finite");
      if (sum != 0.0) {
        m.rows_[i].push_back({j, sum});
        ++m.nonzeros_;
      }
      k = next;
    }
    m.maybe_densify();
    return m;
  }

  static ScoreMatrix from_ggn(const GgnGraph& ggn) {
    std::vector<std::tuple<int, int, double>> entries;
    entries.reserve(ggn.edges.size());
    for (const GgnEdge& e : ggn.edges) entries.push_back({e.src, e.dst, e.weight});
    return from_entries(ggn.node_count, std::move(entries));
  }

  int size() const { return n_; }
  int order() const { return order_; }
  void set_order(int k) { order_ = k; }
  std::size_t nonzero_count() const { return nonzeros_; }
  bool dense_storage() const { return dense_; }

  double at(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
      throw std::invalid_argument("matrix index out of range");
    if (dense_) return dense_values_[static_cast<std::size_t>(i) * n_ + j];
    const auto& row = rows_[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const std::pair<int, double>& e, int col) {
                                 return e.first < col;
                               });
    return (it != row.end() && it->first == j) ? it->second : 0.0;
  }

  // Visits stored nonzeros of row i in ascending column order.
  template <typename Fn>
  void for_each_in_row(int i, Fn&& fn) const {
    if (dense_) {
      const double* row = dense_values_.data() + static_cast<std::size_t>(i) * n_;
      for (int j = 0; j < n_; ++j)
        if (row[j] != 0.0) fn(j, row[j]);
    } else {
      for (const auto& [j, v] : rows_[i]) fn(j, v);
    }
  }

  // this * other, row-major accumulation. The per-row accumulation order is
  // fixed by the sorted entry order, independent of storage.
  ScoreMatrix multiply(const ScoreMatrix& other) const {
    if (n_ != other.n_) throw std::invalid_argument("matrix size mismatch");
    ScoreMatrix out(n_);
    std::vector<double> acc(n_, 0.0);
    std::vector<char> seen(n_, 0);
    std::vector<int> touched;
    for (int i = 0; i < n_; ++i) {
      touched.clear();
      for_each_in_row(i, [&](int k, double x) {
        other.for_each_in_row(k, [&](int j, double y) {
          if (!seen[j]) {
            seen[j] = 1;
            touched.push_back(j);
          }
          acc[j] += x * y;
        });
      });
      std::sort(touched.begin(), touched.end());
      for (int j : touched) {
        if (acc[j] != 0.0) {
          out.rows_[i].push_back({j, acc[j]});
          ++out.nonzeros_;
        }
        acc[j] = 0.0;
        seen[j] = 0;
      }
    }
    out.maybe_densify();
    return out;
  }

  // this += other * factor.
  void add_scaled(const ScoreMatrix& other, double factor) {
    if (n_ != other.n_) throw std::invalid_argument("matrix size mismatch");
    if (dense_) {
      std::size_t nz = 0;
      for (int i = 0; i < n_; ++i) {
        double* row = dense_values_.data() + static_cast<std::size_t>(i) * n_;
        other.for_each_in_row(i, [&](int j, double v) { row[j] += v * factor; });
        for (int j = 0; j < n_; ++j)
          if (row[j] != 0.0) ++nz;
      }
      nonzeros_ = nz;
      return;
    }
    std::size_t nz = 0;
    for (int i = 0; i < n_; ++i) {
      std::vector<std::pair<int, double>> merged;
      const auto& mine = rows_[i];
      std::size_t a = 0;
      other.for_each_in_row(i, [&](int j, double v) {
        while (a < mine.size() && mine[a].first < j) merged.push_back(mine[a++]);
        double sum = v * factor;
        if (a < mine.size() && mine[a].first == j) sum += mine[a++].second;
        if (sum != 0.0) merged.push_back({j, sum});
      });
      while (a < mine.size()) merged.push_back(mine[a++]);
      nz += merged.size();
      rows_[i] = std::move(merged);
    }
    nonzeros_ = nz;
    maybe_densify();
  }

 private:
  static constexpr double kDensifyThreshold = 0.25;

  void maybe_densify() {
    if (dense_ || n_ == 0) return;
    if (static_cast<double>(nonzeros_) <=
        kDensifyThreshold * static_cast<double>(n_) * static_cast<double>(n_))
      return;
    dense_values_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (const auto& [j, v] : rows_[i])
        dense_values_[static_cast<std::size_t>(i) * n_ + j] = v;
    rows_.clear();
    rows_.shrink_to_fit();
    dense_ = true;
  }

  int n_ = 0;
  int order_ = 0;
  bool dense_ = false;
  std::size_t nonzeros_ = 0;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<double> dense_values_;
};

// Truncation orders beyond 12 add terms that are numerically negligible for
// deviation-scale weights while the factorial itself loses integer precision.
inline constexpr int kMaxKernelOrder = 12;

// Truncated exponential kernel: sum of A^i / i! for i = 0..k. The i = 0 term
// is the exact identity.
inline ScoreMatrix exponential_kernel(const ScoreMatrix& adjacency, int k) {
  if (k < 0 || k > kMaxKernelOrder)
    throw std::invalid_argument("kernel order must be in [0, 12]");
  ScoreMatrix kernel = ScoreMatrix::identity(adjacency.size());
  ScoreMatrix power = ScoreMatrix::identity(adjacency.size());
  double factorial = 1.0;
  for (int i = 1; i <= k; ++i) {
    power = power.multiply(adjacency);
    factorial *= i;
    kernel.add_scaled(power, 1.0 / factorial);
  }
  kernel.set_order(k);
  return kernel;
}

// Independent dense reference for the kernel: naive repeated multiplication
// over plain nested vectors. Guarded to n <= 500.
inline std::vector<std::vector<double>> dense_kernel_oracle(
    const std::vector<std::vector<double>>& a, int k) {
  const std::size_t n = a.size();
  if (n > 500) throw std::length_error("dense oracle supports n <= 500");
  if (k < 0 || k > kMaxKernelOrder)
    throw std::invalid_argument("kernel order must be in [0, 12]");
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("matrix must be square");

  std::vector<std::vector<double>> result(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> power = result;
  for (std::size_t i = 0; i < n; ++i) {
    result[i][i] = 1.0;
    power[i][i] = 1.0;
  }
  double factorial = 1.0;
  for (int step = 1; step <= k; ++step) {
    std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t m = 0; m < n; ++m) sum += power[i][m] * a[m][j];
        next[i][j] = sum;
      }
    factorial *= step;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) result[i][j] += next[i][j] / factorial;
    power = std::move(next);
  }
  return result;
}

struct Prediction {
  NodeId u = 0;
  NodeId v = 0;
  int sign = 0;          // +1 or -1
  double strength = 0.0;  // |score|, always > 0
};

// Sign predictions over the skeleton edge universe. Edges whose combined
// score is exactly zero are unpredicted and absent.
struct PredictionSet {
  std::vector<Prediction> predictions;  // sorted by (u, v)
  std::size_t universe_edges = 0;       // size of the skeleton edge list
};

// Scores each skeleton edge (u, v) with kernel[u][v] (+ kernel[v][u] when
// symmetrize is set, the default for undirected ground truth). The diagonal
// is never consulted.
inline PredictionSet predict_signs(const ScoreMatrix& kernel,
                                   const SignedGraph& skeleton,
                                   bool symmetrize = true) {
  if (kernel.size() != skeleton.node_count())
    throw std::invalid_argument("kernel dimension does not match skeleton");
  PredictionSet out;
  out.universe_edges = skeleton.edges().size();
  for (const Edge& e : skeleton.edges()) {
    double score = kernel.at(e.src, e.dst);
    if (symmetrize) score += kernel.at(e.dst, e.src);
    if (score == 0.0) continue;
    out.predictions.push_back({e.src, e.dst, score > 0 ? 1 : -1, std::abs(score)});
  }
  return out;
}

// CSV "u,v,predicted_sign,strength", sorted by (u, v).
inline void save_predictions_csv(const PredictionSet& pred, std::ostream& out) {
  out << "u,v,predicted_sign,strength\n";
  for (const Prediction& p : pred.predictions)
    out << p.u << ',' << p.v << ',' << p.sign << ','
        << detail::format_double(p.strength) << '\n';
}

}  // namespace ggn
