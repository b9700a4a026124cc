#include "whisk/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "whisk/bounds.hpp"
#include "whisk/error.hpp"
#include "whisk/spectral.hpp"

namespace whisk {

namespace {

void require_connected(const Laplacian& L) {
  if (!L.connected()) throw Error(Errc::InvalidArgument, "seed graph must be connected");
}

int argmax_smallest_index(const Vector& values) {
  int best = 0;
  for (int i = 1; i < values.size(); ++i) {
    if (values(i) > values(best) + kTieTol) best = i;
  }
  return best + 1;
}

// New-node offsets (0-based, relative to n) joined to the attachment node.
std::vector<int> attaching_offsets(ClusterKind c) {
  return c == ClusterKind::Leaf ? std::vector<int>{0} : std::vector<int>{0, 1};
}

// Random +/-1 vector from raw engine bits; distributions are avoided so the
// sequence is identical across standard libraries.
Vector random_sign_vector(std::mt19937_64& rng, int n) {
  Vector b(n);
  for (int i = 0; i < n; ++i) b(i) = (rng() & 1u) ? 1.0 : -1.0;
  return b;
}

std::vector<std::string> whiskering_mismatches(const Laplacian& L, const InputMatrix& b, bool seed_verdict,
                                               double tol) {
  std::vector<std::string> out;
  for (GrowthOperator op : {GrowthOperator::W1, GrowthOperator::W2}) {
    const Laplacian grown = apply_operator(L, op);
    const EigenSystem eig = eig_sym(grown.matrix());
    for (const InputPattern& p : all_input_patterns(op)) {
      if (pbh_controllable(grown, eig, stack_input(b, p), tol).controllable != seed_verdict) {
        out.push_back((op == GrowthOperator::W1 ? "W1" : "W2") + p.label());
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Exhaustive: return "exhaustive";
    case Method::Relaxation: return "relaxation";
    case Method::Heuristic: return "heuristic";
  }
  return "unknown";
}

std::string_view to_string(ClusterKind c) { return c == ClusterKind::Leaf ? "leaf" : "path2"; }

std::optional<Method> parse_method(std::string_view s) {
  for (Method m : {Method::Exhaustive, Method::Relaxation, Method::Heuristic}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<ClusterKind> parse_cluster(std::string_view s) {
  if (s == "leaf") return ClusterKind::Leaf;
  if (s == "path2") return ClusterKind::Path2;
  return std::nullopt;
}

int cluster_size(ClusterKind c) { return c == ClusterKind::Leaf ? 1 : 3; }

Laplacian attach_at(const Laplacian& L, ClusterKind c, int node) {
  return c == ClusterKind::Leaf ? attach_leaf_at(L, node) : attach_path2_at(L, node);
}

Choice exhaustive_search(const Laplacian& L, ClusterKind c) {
  require_connected(L);
  Vector values(L.size());
  for (int i = 1; i <= L.size(); ++i) values(i - 1) = lambda2(attach_at(L, c, i));
  const int node = argmax_smallest_index(values);
  return {node, values(node - 1)};
}

Vector project_to_simplex(const Vector& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "cannot project an empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += u[j];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  // With sum x = 1 and x >= 0 the upper bound x <= 1 is never active; the
  // clamp only removes rounding above 1.
  return (v.array() - theta).max(0.0).min(1.0);
}

bool is_candidate_weights(const Vector& x, double tol) {
  if (x.size() == 0) return false;
  if ((x.array() < 0.0).any() || (x.array() > 1.0).any()) return false;
  return std::abs(x.sum() - 1.0) <= tol;
}

int round_weights(const Vector& x) { return argmax_smallest_index(x); }

Matrix relaxed_laplacian(const Laplacian& L, ClusterKind c, const Vector& x) {
  const int n = L.size();
  if (x.size() != n) throw Error(Errc::DimensionMismatch, "one weight per candidate node is required");
  const int extra = cluster_size(c);
  Matrix m = Matrix::Zero(n + extra, n + extra);
  m.topLeftCorner(n, n) = L.matrix();
  auto add_edge = [&m](int a, int b, double w) {
    m(a, a) += w;
    m(b, b) += w;
    m(a, b) -= w;
    m(b, a) -= w;
  };
  if (c == ClusterKind::Path2) add_edge(n + 1, n + 2, 1.0);
  for (int l = 0; l < n; ++l) {
    for (int offset : attaching_offsets(c)) add_edge(l, n + offset, x(l));
  }
  return m;
}

Supergradient supergradient(const Laplacian& L, ClusterKind c, const Vector& x) {
  const int n = L.size();
  const EigenSystem eig = eig_sym(relaxed_laplacian(L, c, x));
  Supergradient out;
  out.value = eig.values(1);
  out.gap = eig.values.size() > 2 ? eig.values(2) - eig.values(1) : std::numeric_limits<double>::infinity();

  int first = 1;
  int last = 2;
  for (const EigenGroup& g : eigenvalue_groups(eig.values)) {
    if (g.first <= 1 && 1 < g.last) {
      first = std::max(g.first, 1);
      last = g.last;
    }
  }
  out.multiplicity = last - first;
  out.gradient = Vector::Zero(n);
  for (int col = first; col < last; ++col) {
    const auto v = eig.vectors.col(col);
    for (int l = 0; l < n; ++l) {
      for (int offset : attaching_offsets(c)) {
        const double d = v(l) - v(n + offset);
        out.gradient(l) += d * d;
      }
    }
  }
  out.gradient /= static_cast<double>(out.multiplicity);
  return out;
}

RelaxationResult relax(const Laplacian& L, ClusterKind c, const RelaxationOptions& opts) {
  require_connected(L);
  const int n = L.size();
  RelaxationResult out;
  Vector x = Vector::Constant(n, 1.0 / n);
  out.relaxed_value = -std::numeric_limits<double>::infinity();
  std::vector<double> best_history;
  best_history.reserve(opts.max_iterations);

  for (int k = 1; k <= opts.max_iterations; ++k) {
    const Supergradient sg = supergradient(L, c, x);
    if (sg.value > out.relaxed_value) {
      out.relaxed_value = sg.value;
      out.x = x;
    }
    best_history.push_back(out.relaxed_value);
    out.iterations = k;
    if (n == 1) {
      out.converged = true;
      break;
    }
    if (k > opts.patience && out.relaxed_value - best_history[k - 1 - opts.patience] < opts.min_improvement) {
      out.converged = true;
      break;
    }
    x = project_to_simplex(x + (opts.step0 / std::sqrt(static_cast<double>(k))) * sg.gradient);
  }
  out.rounded_node = round_weights(out.x);
  return out;
}

Vector heuristic_scores(const Laplacian& L, ClusterKind c) {
  require_connected(L);
  return supergradient(L, c, Vector::Constant(L.size(), 1.0 / L.size())).gradient;
}

int heuristic_choice(const Laplacian& L, ClusterKind c) { return argmax_smallest_index(heuristic_scores(L, c)); }

bool GrowthTrajectory::converged() const {
  return std::all_of(steps.begin(), steps.end(), [](const GrowthStep& s) { return s.relaxation_converged; });
}

GrowthTrajectory grow(const Laplacian& seed, Method method, ClusterKind cluster, const GrowthOptions& opts) {
  if (opts.iterations < 1) throw Error(Errc::InvalidArgument, "iterations must be >= 1");
  if (opts.ground < 1 || opts.ground > seed.size()) {
    throw Error(Errc::IndexOutOfBounds, "ground must be a seed node");
  }
  require_connected(seed);

  GrowthTrajectory traj;
  traj.method = method;
  traj.cluster = cluster;
  traj.seed_size = seed.size();
  std::mt19937_64 rng(opts.rng_seed);

  Laplacian current = seed;
  for (int it = 1; it <= opts.iterations; ++it) {
    GrowthStep step;
    step.iteration = it;
    switch (method) {
      case Method::Exhaustive:
        step.node = exhaustive_search(current, cluster).node;
        break;
      case Method::Relaxation: {
        const RelaxationResult r = relax(current, cluster, opts.relaxation);
        step.node = r.rounded_node;
        step.relaxed_value = r.relaxed_value;
        step.relaxation_converged = r.converged;
        break;
      }
      case Method::Heuristic:
        step.node = heuristic_choice(current, cluster);
        break;
    }

    const BoundReport bound = cluster == ClusterKind::Leaf ? bound_single_leaf(current, step.node, opts.ground)
                                                           : bound_single_cluster(current, step.node, opts.ground);
    current = attach_at(current, cluster, step.node);
    step.lambda2 = lambda2(current);
    step.two_trace_P = bound.two_trace_P;
    step.bound = bound.bound;
    step.slack = bound.slack;

    const InputMatrix b(random_sign_vector(rng, current.size()));
    if (opts.check_controllability) {
      step.test_input_controllable = pbh_controllable(current, b, opts.tol).controllable;
      step.whiskering_mismatches = whiskering_mismatches(current, b, step.test_input_controllable, opts.tol);
    }
    step.graph = current;
    traj.steps.push_back(std::move(step));
  }
  return traj;
}

}  // namespace whisk
