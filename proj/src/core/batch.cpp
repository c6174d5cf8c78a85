#include "pentakit/batch.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <string>

#include "pentakit/error.hpp"
#include "pentakit/rng.hpp"

namespace pentakit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_interleaved(const BatchField& b, std::size_t n) {
  if (b.layout != Layout::Interleaved) {
    raise(ErrorCode::LayoutError, "batch solves require interleaved layout");
  }
  if (b.n != n) {
    raise(ErrorCode::DimensionMismatch,
          "batch has n=" + std::to_string(b.n) + ", LHS has n=" + std::to_string(n));
  }
  if (b.data.size() != b.n * b.m) raise(ErrorCode::DimensionMismatch, "batch buffer size");
}

[[noreturn]] void rethrow_for_system(const Error& e, std::size_t s) {
  throw Error(e.code(),
              std::string(e.what()) + " (system " + std::to_string(s) + ")", e.row(),
              static_cast<long>(s));
}

}  // namespace

BatchField interleave(const std::vector<std::vector<double>>& fields) {
  const std::size_t m = fields.size();
  const std::size_t n = m ? fields[0].size() : 0;
  for (const auto& f : fields) {
    if (f.size() != n) raise(ErrorCode::RaggedInput, "fields differ in length");
  }
  BatchField b(n, m, Layout::Interleaved);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t i = 0; i < n; ++i) b.data[i * m + s] = fields[s][i];
  return b;
}

std::vector<std::vector<double>> deinterleave(const BatchField& b) {
  std::vector<std::vector<double>> out(b.m, std::vector<double>(b.n));
  for (std::size_t s = 0; s < b.m; ++s)
    for (std::size_t i = 0; i < b.n; ++i) out[s][i] = b.at(i, s);
  return out;
}

BatchField to_layout(const BatchField& b, Layout target) {
  if (b.layout == target) return b;
  BatchField out(b.n, b.m, target);
  for (std::size_t s = 0; s < b.m; ++s)
    for (std::size_t i = 0; i < b.n; ++i) out.at(i, s) = b.at(i, s);
  return out;
}

SharedConstant<PentaDiag> expand(const UniformPenta& u) {
  return {PentaDiag::constant(u.n, u.a, u.b, u.c, u.d, u.e)};
}

SharedConstant<TriDiag> expand(const UniformTri& u) {
  return {TriDiag::constant(u.n, u.a, u.b, u.c)};
}

std::size_t storage_values(const BatchPentaLhs& lhs, std::size_t m) {
  return std::visit(Overloaded{
                        [&](const PerSystem<PentaDiag>& p) {
                          const std::size_t n = p.systems.empty() ? 0 : p.systems[0].size();
                          return 5 * n * p.systems.size() + n * m;
                        },
                        [&](const SharedConstant<PentaDiag>& s) {
                          return 5 * s.matrix.size() + s.matrix.size() * m;
                        },
                        [&](const UniformPenta& u) { return std::size_t{5} + u.n * m; },
                    },
                    lhs);
}

std::size_t storage_values(const BatchTriLhs& lhs, std::size_t m) {
  return std::visit(Overloaded{
                        [&](const PerSystem<TriDiag>& p) {
                          const std::size_t n = p.systems.empty() ? 0 : p.systems[0].size();
                          return 3 * n * p.systems.size() + n * m;
                        },
                        [&](const SharedConstant<TriDiag>& s) {
                          return 3 * s.matrix.size() + s.matrix.size() * m;
                        },
                        [&](const UniformTri& u) { return std::size_t{3} + u.n * m; },
                    },
                    lhs);
}

BatchPentaSolver::BatchPentaSolver(const BatchPentaLhs& lhs) {
  std::visit(Overloaded{
                 [&](const PerSystem<PentaDiag>& p) {
                   if (p.systems.empty()) raise(ErrorCode::InvalidArgument, "empty batch");
                   n_ = p.systems[0].size();
                   per_.reserve(p.systems.size());
                   for (std::size_t s = 0; s < p.systems.size(); ++s) {
                     if (p.systems[s].size() != n_) {
                       raise(ErrorCode::RaggedInput, "per-system matrices differ in size");
                     }
                     try {
                       per_.push_back(penta_factor(p.systems[s]));
                     } catch (const Error& e) {
                       rethrow_for_system(e, s);
                     }
                   }
                 },
                 [&](const SharedConstant<PentaDiag>& s) {
                   n_ = s.matrix.size();
                   shared_ = penta_factor(s.matrix);
                 },
                 [&](const UniformPenta& u) {
                   n_ = u.n;
                   shared_ = penta_factor(expand(u).matrix);
                 },
             },
             lhs);
}

void BatchPentaSolver::solve_inplace(BatchField& x, const Executor& ex) const {
  require_interleaved(x, n_);
  const std::size_t m = x.m;
  double* data = x.data.data();
  if (!per_.empty()) {
    if (per_.size() != m) raise(ErrorCode::DimensionMismatch, "batch size differs from LHS count");
    ex.for_chunks(m, [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) penta_solve_strided(per_[s], data, m, s, s + 1);
    });
  } else {
    ex.for_chunks(m, [&](std::size_t b, std::size_t e) {
      penta_solve_strided(shared_, data, m, b, e);
    });
  }
}

BatchField BatchPentaSolver::solve(const BatchField& rhs, const Executor& ex) const {
  BatchField x = rhs;
  solve_inplace(x, ex);
  return x;
}

BatchTriSolver::BatchTriSolver(const BatchTriLhs& lhs) {
  std::visit(Overloaded{
                 [&](const PerSystem<TriDiag>& p) {
                   if (p.systems.empty()) raise(ErrorCode::InvalidArgument, "empty batch");
                   n_ = p.systems[0].size();
                   per_.reserve(p.systems.size());
                   for (std::size_t s = 0; s < p.systems.size(); ++s) {
                     if (p.systems[s].size() != n_) {
                       raise(ErrorCode::RaggedInput, "per-system matrices differ in size");
                     }
                     try {
                       per_.push_back(thomas_factor(p.systems[s]));
                     } catch (const Error& e) {
                       rethrow_for_system(e, s);
                     }
                   }
                 },
                 [&](const SharedConstant<TriDiag>& s) {
                   n_ = s.matrix.size();
                   shared_ = thomas_factor(s.matrix);
                 },
                 [&](const UniformTri& u) {
                   n_ = u.n;
                   shared_ = thomas_factor(expand(u).matrix);
                 },
             },
             lhs);
}

void BatchTriSolver::solve_inplace(BatchField& x, const Executor& ex) const {
  require_interleaved(x, n_);
  const std::size_t m = x.m;
  double* data = x.data.data();
  if (!per_.empty()) {
    if (per_.size() != m) raise(ErrorCode::DimensionMismatch, "batch size differs from LHS count");
    ex.for_chunks(m, [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) thomas_solve_strided(per_[s], data, m, s, s + 1);
    });
  } else {
    ex.for_chunks(m, [&](std::size_t b, std::size_t e) {
      thomas_solve_strided(shared_, data, m, b, e);
    });
  }
}

BatchField BatchTriSolver::solve(const BatchField& rhs, const Executor& ex) const {
  BatchField x = rhs;
  solve_inplace(x, ex);
  return x;
}

namespace {

template <class Lhs>
bool same_lhs(const Lhs& x, const Lhs& y);
template <>
bool same_lhs(const CyclicTri& x, const CyclicTri& y) {
  return x.n == y.n && x.a == y.a && x.b == y.b && x.c == y.c;
}
template <>
bool same_lhs(const CyclicPenta& x, const CyclicPenta& y) {
  return x.n == y.n && x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d && x.e == y.e;
}

template <class Lhs, class Solver>
void build_distinct(std::span<const Lhs> per_system, std::vector<Solver>& solvers,
                    std::vector<std::size_t>& which, std::size_t& n) {
  if (per_system.empty()) raise(ErrorCode::InvalidArgument, "empty batch");
  n = per_system[0].n;
  std::vector<Lhs> seen;
  for (std::size_t s = 0; s < per_system.size(); ++s) {
    const Lhs& l = per_system[s];
    if (l.n != n) raise(ErrorCode::RaggedInput, "per-system matrices differ in size");
    std::size_t k = 0;
    while (k < seen.size() && !same_lhs(seen[k], l)) ++k;
    if (k == seen.size()) {
      try {
        solvers.emplace_back(l);
      } catch (const Error& e) {
        rethrow_for_system(e, s);
      }
      seen.push_back(l);
    }
    which.push_back(k);
  }
}

}  // namespace

BatchCyclicSolver::BatchCyclicSolver(const CyclicTri& lhs) : kind_(CyclicKind::Tri), n_(lhs.n) {
  tri_.emplace_back(lhs);
}

BatchCyclicSolver::BatchCyclicSolver(const CyclicPenta& lhs)
    : kind_(CyclicKind::Penta), n_(lhs.n) {
  penta_.emplace_back(lhs);
}

BatchCyclicSolver::BatchCyclicSolver(std::span<const CyclicTri> per_system)
    : kind_(CyclicKind::Tri) {
  build_distinct(per_system, tri_, which_, n_);
}

BatchCyclicSolver::BatchCyclicSolver(std::span<const CyclicPenta> per_system)
    : kind_(CyclicKind::Penta) {
  build_distinct(per_system, penta_, which_, n_);
}

void BatchCyclicSolver::solve_inplace(BatchField& x, const Executor& ex) const {
  require_interleaved(x, n_);
  const std::size_t m = x.m;
  if (!which_.empty() && which_.size() != m) {
    raise(ErrorCode::DimensionMismatch, "batch size differs from LHS count");
  }
  double* data = x.data.data();
  ex.for_chunks(m, [&](std::size_t b, std::size_t e) {
    std::vector<double> scratch(2 * (e - b));
    if (which_.empty()) {
      if (kind_ == CyclicKind::Tri) {
        tri_[0].solve_strided(data, m, b, e, scratch.data());
      } else {
        penta_[0].solve_strided(data, m, b, e, scratch.data());
      }
      return;
    }
    for (std::size_t s = b; s < e; ++s) {
      if (kind_ == CyclicKind::Tri) {
        tri_[which_[s]].solve_strided(data, m, s, s + 1, scratch.data());
      } else {
        penta_[which_[s]].solve_strided(data, m, s, s + 1, scratch.data());
      }
    }
  });
}

BatchField BatchCyclicSolver::solve(const BatchField& rhs, const Executor& ex) const {
  BatchField x = rhs;
  solve_inplace(x, ex);
  return x;
}

BatchField batch_penta_solve(const BatchPentaLhs& lhs, const BatchField& rhs, const Executor& ex) {
  return BatchPentaSolver(lhs).solve(rhs, ex);
}

BatchField batch_tri_solve(const BatchTriLhs& lhs, const BatchField& rhs, const Executor& ex) {
  return BatchTriSolver(lhs).solve(rhs, ex);
}

BatchField batch_cyclic_solve(const CyclicTri& lhs, const BatchField& rhs, const Executor& ex) {
  return BatchCyclicSolver(lhs).solve(rhs, ex);
}

BatchField batch_cyclic_solve(const CyclicPenta& lhs, const BatchField& rhs, const Executor& ex) {
  return BatchCyclicSolver(lhs).solve(rhs, ex);
}

std::vector<BenchRow> bench_batch(const BenchConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const std::size_t n = cfg.n, m = cfg.m;
  const double sigma = 0.1;
  const UniformPenta uni{n, sigma, -4 * sigma, 1 + 6 * sigma, -4 * sigma, sigma};
  const auto shared = expand(uni);
  PerSystem<PentaDiag> per;
  per.systems.assign(m, shared.matrix);

  BatchField rhs(n, m);
  CounterRng rng(substream(cfg.seed, 0));
  for (auto& v : rhs.data) v = rng.uniform(-1.0, 1.0);

  struct Case {
    std::string name;
    const BatchPentaSolver* solver;
    bool contiguous;
  };
  const BatchPentaSolver s_per(per), s_shared(shared), s_uni(uni);
  const std::vector<Case> cases = {{"PerSystem", &s_per, false},
                                   {"SharedConstant", &s_shared, false},
                                   {"UniformScalars", &s_uni, false},
                                   {"SharedConstantContiguous", &s_shared, true}};
  const FactoredPenta fac = penta_factor(shared.matrix);

  std::vector<BenchRow> rows;
  for (unsigned w : cfg.workers) {
    Executor ex(w, cfg.chunk);
    for (const auto& c : cases) {
      std::vector<double> times;
      for (std::size_t r = 0; r < std::max<std::size_t>(1, cfg.repetitions); ++r) {
        BatchField x = c.contiguous ? to_layout(rhs, Layout::Contiguous) : rhs;
        const auto t0 = clock::now();
        for (std::size_t step = 0; step < cfg.steps; ++step) {
          if (c.contiguous) {
            double* data = x.data.data();
            ex.for_chunks(m, [&](std::size_t b, std::size_t e) {
              for (std::size_t s = b; s < e; ++s) penta_solve_strided(fac, data + s * n, 1, 0, 1);
            });
          } else {
            c.solver->solve_inplace(x, ex);
          }
        }
        times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
      }
      std::sort(times.begin(), times.end());
      const std::size_t k = times.size();
      const double med = k % 2 ? times[k / 2] : 0.5 * (times[k / 2 - 1] + times[k / 2]);
      rows.push_back({c.name, n, m, cfg.steps, w, med});
    }
  }
  return rows;
}

}  // namespace pentakit
