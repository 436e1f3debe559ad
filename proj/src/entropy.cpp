#include "blepi/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "blepi/errors.hpp"
#include "blepi/matkernels.hpp"
#include "blepi/parallel.hpp"
#include "blepi/rng.hpp"

namespace blepi {

namespace {

constexpr double kLog2PiE = 2.8378770664093454;  // log(2 pi e)
constexpr double kJitterAmplitude = 1e-10;
constexpr std::uint64_t kJitterSeed = 0x6a69747465721ull;
constexpr int kBruteForceLimit = 50000;

// Largest distances first, so the root is the current k-th candidate.
struct BoundedMaxHeap {
  std::vector<double>& heap;
  int capacity;

  void push(double dist_sq) {
    if (static_cast<int>(heap.size()) < capacity) {
      heap.push_back(dist_sq);
      std::push_heap(heap.begin(), heap.end());
    } else if (dist_sq < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = dist_sq;
      std::push_heap(heap.begin(), heap.end());
    }
  }
  double worst() const {
    return static_cast<int>(heap.size()) < capacity
               ? std::numeric_limits<double>::infinity()
               : heap.front();
  }
};

Eigen::VectorXd brute_force_knn(const Eigen::MatrixXd& pts, int k) {
  const int n = static_cast<int>(pts.rows());
  Eigen::VectorXd out(n);
  parallel_for(n, [&](int i) {
    std::vector<double> heap;
    heap.reserve(k);
    BoundedMaxHeap best{heap, k};
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dsq = (pts.row(i) - pts.row(j)).squaredNorm();
      best.push(dsq);
    }
    out(i) = std::sqrt(heap.front());
  });
  return out;
}

// Minimal k-d tree over row indices; exact neighbor queries.
class KdTree {
 public:
  explicit KdTree(const Eigen::MatrixXd& pts) : pts_(pts) {
    const int n = static_cast<int>(pts.rows());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * n);
    root_ = build(0, n, 0);
  }

  double kth_distance(int query, int k) const {
    std::vector<double> heap;
    heap.reserve(k);
    BoundedMaxHeap best{heap, k};
    search(root_, query, best);
    return std::sqrt(heap.front());
  }

 private:
  struct Node {
    int axis = -1;       // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range in order_
  };

  int build(int begin, int end, int depth) {
    Node node;
    if (end - begin <= 16) {
      node.begin = begin;
      node.end = end;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size()) - 1;
    }
    const int axis = depth % static_cast<int>(pts_.cols());
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int a, int b) {
                       return pts_(a, axis) < pts_(b, axis);
                     });
    node.axis = axis;
    node.split = pts_(order_[mid], axis);
    nodes_.push_back(node);
    const int self = static_cast<int>(nodes_.size()) - 1;
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid, end, depth + 1);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void search(int idx, int query, BoundedMaxHeap& best) const {
    const Node& node = nodes_[idx];
    if (node.axis < 0) {
      for (int p = node.begin; p < node.end; ++p) {
        const int j = order_[p];
        if (j == query) continue;
        best.push((pts_.row(query) - pts_.row(j)).squaredNorm());
      }
      return;
    }
    const double delta = pts_(query, node.axis) - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search(near, query, best);
    if (delta * delta < best.worst()) {
      search(far, query, best);
    }
  }

  const Eigen::MatrixXd& pts_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = 0;
};

Eigen::VectorXd tree_knn(const Eigen::MatrixXd& pts, int k) {
  KdTree tree(pts);
  const int n = static_cast<int>(pts.rows());
  Eigen::VectorXd out(n);
  parallel_for(n, [&](int i) { out(i) = tree.kth_distance(i, k); });
  return out;
}

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) throw NumericalDomainError("digamma: x must be > 0");
  double result = 0.0;
  while (x < 16.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
  return result;
}

EntropyEstimate gaussian_entropy(const Eigen::MatrixXd& Sigma) {
  EntropyEstimate est;
  est.method = EntropyMethod::GaussianClosedForm;
  est.value = 0.5 * (static_cast<double>(Sigma.rows()) * kLog2PiE +
                     logdet_pd(Sigma));
  return est;
}

EntropyEstimate plugin_entropy(
    const std::function<double(const Eigen::VectorXd&)>& log_density,
    const Eigen::MatrixXd& samples) {
  const int n = static_cast<int>(samples.rows());
  if (n < 1) throw ParameterError("plugin_entropy: no samples");
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lf = log_density(samples.row(i).transpose());
    if (!std::isfinite(lf)) {
      throw NumericalDomainError(
          "plugin_entropy: non-finite log-density at sample " +
          std::to_string(i));
    }
    sum += -lf;
    sum_sq += lf * lf;
  }
  EntropyEstimate est;
  est.method = EntropyMethod::PlugIn;
  est.n_samples = n;
  est.value = sum / n;
  const double var = std::max(0.0, sum_sq / n - est.value * est.value);
  est.std_error = std::sqrt(var / n);
  return est;
}

namespace detail {

Eigen::VectorXd kth_neighbor_distances(const Eigen::MatrixXd& points, int k,
                                       int force_mode) {
  const int n = static_cast<int>(points.rows());
  const bool brute = force_mode == 1 ||
                     (force_mode == 0 && n <= kBruteForceLimit);
  return brute ? brute_force_knn(points, k) : tree_knn(points, k);
}

}  // namespace detail

EntropyEstimate knn_entropy(const Eigen::MatrixXd& samples, int k,
                            bool jitter) {
  const int n = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (k < 1) throw ParameterError("knn_entropy: k must be >= 1");
  if (n <= k) throw ParameterError("knn_entropy: needs more than k samples");
  if (d < 1) throw ParameterError("knn_entropy: empty points");

  Eigen::MatrixXd pts = samples;
  if (jitter) {
    for (int c = 0; c < d; ++c) {
      for (int i = 0; i < n; ++i) {
        pts(i, c) += kJitterAmplitude *
                     (2.0 * rng::uniform01(kJitterSeed, c, i) - 1.0);
      }
    }
  }

  const Eigen::VectorXd rho = detail::kth_neighbor_distances(pts, k);

  // log of the unit-ball volume in R^d
  const double log_vd =
      0.5 * d * std::log(3.14159265358979323846) - std::lgamma(0.5 * d + 1.0);
  const double base = digamma(n) - digamma(k) + log_vd;

  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(rho(i) > 0.0)) {
      throw DegenerateSampleError("knn_entropy: zero k-NN distance at sample " +
                                  std::to_string(i) +
                                  (jitter ? "" : " (consider jitter)"));
    }
    const double contrib = base + d * std::log(rho(i));
    sum += contrib;
    sum_sq += contrib * contrib;
  }

  EntropyEstimate est;
  est.method = EntropyMethod::KNN;
  est.n_samples = n;
  est.value = sum / n;
  const double var = std::max(0.0, sum_sq / n - est.value * est.value);
  est.std_error = std::sqrt(var / n);
  return est;
}

}  // namespace blepi
