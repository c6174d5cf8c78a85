#pragma once

// Batched banded solves over M independent systems stored in interleaved
// layout (entry i of system s at index i*M + s).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pentakit/banded.hpp"
#include "pentakit/parallel.hpp"

namespace pentakit {

enum class Layout { Interleaved, Contiguous };

struct BatchField {
  std::size_t n = 0;  // unknowns per system
  std::size_t m = 0;  // systems
  Layout layout = Layout::Interleaved;
  std::vector<double> data;

  BatchField() = default;
  BatchField(std::size_t n_, std::size_t m_, Layout l = Layout::Interleaved, double fill = 0.0)
      : n(n_), m(m_), layout(l), data(n_ * m_, fill) {}

  std::size_t index(std::size_t i, std::size_t s) const noexcept {
    return layout == Layout::Interleaved ? i * m + s : s * n + i;
  }
  double& at(std::size_t i, std::size_t s) noexcept { return data[index(i, s)]; }
  double at(std::size_t i, std::size_t s) const noexcept { return data[index(i, s)]; }
};

BatchField interleave(const std::vector<std::vector<double>>& fields);
std::vector<std::vector<double>> deinterleave(const BatchField& b);
BatchField to_layout(const BatchField& b, Layout target);

template <class Diag>
struct PerSystem {
  std::vector<Diag> systems;
};
template <class Diag>
struct SharedConstant {
  Diag matrix;
};
struct UniformPenta {
  std::size_t n = 0;
  double a = 0, b = 0, c = 1, d = 0, e = 0;
};
struct UniformTri {
  std::size_t n = 0;
  double a = 0, b = 1, c = 0;
};

using BatchPentaLhs =
    std::variant<PerSystem<PentaDiag>, SharedConstant<PentaDiag>, UniformPenta>;
using BatchTriLhs = std::variant<PerSystem<TriDiag>, SharedConstant<TriDiag>, UniformTri>;

/// UniformScalars regime expanded to the equivalent shared matrix.
SharedConstant<PentaDiag> expand(const UniformPenta& u);
SharedConstant<TriDiag> expand(const UniformTri& u);

/// Number of doubles held for the LHS plus the N*M right-hand side.
std::size_t storage_values(const BatchPentaLhs& lhs, std::size_t m);
std::size_t storage_values(const BatchTriLhs& lhs, std::size_t m);

/// Prefactored batch penta solver; factors once, solves many times.
class BatchPentaSolver {
 public:
  explicit BatchPentaSolver(const BatchPentaLhs& lhs);
  std::size_t n() const noexcept { return n_; }
  /// Number of systems fixed by the LHS, or 0 if any batch size is allowed.
  std::size_t m() const noexcept { return per_.size(); }

  void solve_inplace(BatchField& x, const Executor& ex = Executor::serial()) const;
  BatchField solve(const BatchField& rhs, const Executor& ex = Executor::serial()) const;

 private:
  std::size_t n_ = 0;
  std::vector<FactoredPenta> per_;
  FactoredPenta shared_;
};

class BatchTriSolver {
 public:
  explicit BatchTriSolver(const BatchTriLhs& lhs);
  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return per_.size(); }

  void solve_inplace(BatchField& x, const Executor& ex = Executor::serial()) const;
  BatchField solve(const BatchField& rhs, const Executor& ex = Executor::serial()) const;

 private:
  std::size_t n_ = 0;
  std::vector<FactoredTri> per_;
  FactoredTri shared_;
};

enum class CyclicKind { Tri, Penta };

/// Batch of periodic constant-coefficient systems. Either one LHS shared by
/// all columns or one LHS per column; precomputation happens once per
/// distinct LHS.
class BatchCyclicSolver {
 public:
  explicit BatchCyclicSolver(const CyclicTri& lhs);
  explicit BatchCyclicSolver(const CyclicPenta& lhs);
  explicit BatchCyclicSolver(std::span<const CyclicTri> per_system);
  explicit BatchCyclicSolver(std::span<const CyclicPenta> per_system);

  CyclicKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return n_; }
  /// Number of distinct precomputed solvers.
  std::size_t distinct() const noexcept {
    return kind_ == CyclicKind::Tri ? tri_.size() : penta_.size();
  }

  void solve_inplace(BatchField& x, const Executor& ex = Executor::serial()) const;
  BatchField solve(const BatchField& rhs, const Executor& ex = Executor::serial()) const;

 private:
  CyclicKind kind_;
  std::size_t n_ = 0;
  std::vector<CyclicTriSolver> tri_;
  std::vector<CyclicPentaSolver> penta_;
  std::vector<std::size_t> which_;  // per-column solver index; empty means shared
};

BatchField batch_penta_solve(const BatchPentaLhs& lhs, const BatchField& rhs,
                             const Executor& ex = Executor::serial());
BatchField batch_tri_solve(const BatchTriLhs& lhs, const BatchField& rhs,
                           const Executor& ex = Executor::serial());
BatchField batch_cyclic_solve(const CyclicTri& lhs, const BatchField& rhs,
                              const Executor& ex = Executor::serial());
BatchField batch_cyclic_solve(const CyclicPenta& lhs, const BatchField& rhs,
                              const Executor& ex = Executor::serial());

struct BenchConfig {
  std::size_t n = 512;
  std::size_t m = 4096;
  std::size_t steps = 250;
  std::size_t repetitions = 5;
  std::vector<unsigned> workers = {1};
  std::size_t chunk = 32;
  std::uint64_t seed = 1;
};

struct BenchRow {
  std::string regime;
  std::size_t n, m, steps;
  unsigned workers;
  double median_seconds;
};

/// Times repeated CN hyperdiffusion-style batch solves per LHS regime and
/// worker count. Setup (allocation, factorization) is excluded.
std::vector<BenchRow> bench_batch(const BenchConfig& cfg);

}  // namespace pentakit
