#include "meshfree/operators/shape_storage.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "meshfree/core/errors.hpp"

namespace meshfree {

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MESHFREE_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw ConfigError(std::string("MESHFREE_THREADS must be a nonnegative integer, got '") + env + "'");
    if (v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <int Dim>
std::span<const int> ShapeStorage<Dim>::stencil(int i) const {
  return {indices_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
}

template <int Dim>
int ShapeStorage<Dim>::family_index(const Family<Dim>& f) const {
  const auto it = std::find(families_.begin(), families_.end(), f);
  return it == families_.end() ? -1 : static_cast<int>(it - families_.begin());
}

template <int Dim>
int ShapeStorage<Dim>::checked_family(const Family<Dim>& f, int i) const {
  const int k = family_index(f);
  if (k < 0) throw Error("operator family '" + f.label() + "' is not stored");
  if (i < 0 || i >= size()) throw Error("node " + std::to_string(i) + " out of range");
  if (!computed_[i]) throw Error("no weights were computed for node " + std::to_string(i));
  return k;
}

template <int Dim>
std::span<const double> ShapeStorage<Dim>::weights(const Family<Dim>& f, int i) const {
  const int k = checked_family(f, i);
  return {weights_[k].data() + offsets_[i], static_cast<std::size_t>(stencil_size(i))};
}

template <int Dim>
void ShapeStorage<Dim>::write_csv(std::ostream& out) const {
  out << "node,family,offset,weight\n";
  out << std::setprecision(17);
  for (int i = 0; i < size(); ++i) {
    if (!computed_[i]) continue;
    for (std::size_t k = 0; k < families_.size(); ++k) {
      const std::string label = families_[k].label();
      for (int j = 0; j < stencil_size(i); ++j) {
        out << i << ',' << label << ',' << j << ',' << weights_[k][offsets_[i] + j] << '\n';
      }
    }
  }
}

template <int Dim>
ShapeStorage<Dim> compute_shapes(const DomainDiscretization<Dim>& domain, const ApproxEngine<Dim>& engine,
                                 const std::vector<Family<Dim>>& families, std::span<const int> for_which,
                                 int threads) {
  const int N = domain.size();
  ShapeStorage<Dim> s;
  s.positions_ = domain.positions();
  s.computed_.assign(N, 0);
  for (const auto& f : families) {
    if (s.family_index(f) < 0) s.families_.push_back(f);
  }

  for (int i : for_which) {
    if (i < 0 || i >= N) throw Error("node " + std::to_string(i) + " out of range");
    if (!domain.has_stencil(i)) throw Error("node " + std::to_string(i) + " has no stencil");
    s.computed_[i] = 1;
  }
  s.offsets_.assign(N + 1, 0);
  for (int i = 0; i < N; ++i) s.offsets_[i + 1] = s.offsets_[i] + (s.computed_[i] ? domain.stencil_size(i) : 0);
  s.indices_.resize(s.offsets_[N]);
  for (int i = 0; i < N; ++i) {
    if (s.computed_[i]) std::copy_n(domain.stencil(i).begin(), domain.stencil_size(i), s.indices_.begin() + s.offsets_[i]);
  }
  s.weights_.assign(s.families_.size(), std::vector<double>(s.offsets_[N], 0.0));

  std::vector<Operator<Dim>> ops;
  for (const auto& f : s.families_) ops.push_back(f.to_operator());
  const int min_size = min_support_size<Dim>(engine);

  // Nodes in ascending order so that the reported failure is well defined.
  std::vector<int> nodes;
  for (int i = 0; i < N; ++i)
    if (s.computed_[i]) nodes.push_back(i);

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  int failed_node = std::numeric_limits<int>::max();
  std::string failure;
  constexpr std::size_t kChunk = 64;

  auto work = [&] {
    std::vector<Vec<Dim>> pts;
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= nodes.size()) return;
      const std::size_t end = std::min(nodes.size(), begin + kChunk);
      for (std::size_t t = begin; t < end; ++t) {
        const int i = nodes[t];
        try {
          const auto st = s.stencil(i);
          if (static_cast<int>(st.size()) < min_size) {
            throw NumericalError("stencil of " + std::to_string(st.size()) + " nodes is smaller than the " +
                                 std::to_string(min_size) + " the engine requires");
          }
          pts.clear();
          for (int j : st) pts.push_back(s.positions_[j]);
          const LocalApproximation<Dim> local(engine, pts, s.positions_[i]);
          for (std::size_t k = 0; k < ops.size(); ++k) {
            const Eigen::VectorXd w = local.weights(ops[k]);
            std::copy(w.data(), w.data() + w.size(), s.weights_[k].begin() + s.offsets_[i]);
          }
        } catch (const std::exception& e) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (i < failed_node) {
            failed_node = i;
            failure = e.what();
          }
        }
      }
    }
  };

  const int n_threads = std::min<int>(resolve_thread_count(threads), std::max<std::size_t>(1, nodes.size() / kChunk));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (failed_node != std::numeric_limits<int>::max()) {
    throw NumericalError("weight computation failed at node " + std::to_string(failed_node) + ": " + failure);
  }
  return s;
}

template <int Dim>
ShapeStorage<Dim> compute_shapes(const DomainDiscretization<Dim>& domain, const ApproxEngine<Dim>& engine,
                                 const std::vector<Family<Dim>>& families, int threads) {
  const auto all = domain.all();
  return compute_shapes<Dim>(domain, engine, families, all, threads);
}

#define MESHFREE_INSTANTIATE(D)                                                                                 \
  template class ShapeStorage<D>;                                                                               \
  template ShapeStorage<D> compute_shapes<D>(const DomainDiscretization<D>&, const ApproxEngine<D>&,             \
                                             const std::vector<Family<D>>&, std::span<const int>, int);         \
  template ShapeStorage<D> compute_shapes<D>(const DomainDiscretization<D>&, const ApproxEngine<D>&,             \
                                             const std::vector<Family<D>>&, int);
MESHFREE_INSTANTIATE(1)
MESHFREE_INSTANTIATE(2)
MESHFREE_INSTANTIATE(3)
#undef MESHFREE_INSTANTIATE

}  // namespace meshfree
