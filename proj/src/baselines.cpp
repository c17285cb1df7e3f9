#include "medsolve/baselines.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace medsolve {

namespace {

// Coordinates in the orthonormal Hermitian basis {E_kk, (E_kl + E_lk)/sqrt2, i(E_kl - E_lk)/sqrt2}
// under the trace inner product.
void orthonormal_coords(const ComplexMatrix& h, double* out) {
  const int n = static_cast<int>(h.rows());
  int pos = 0;
  for (int k = 0; k < n; ++k) out[pos++] = h(k, k).real();
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      out[pos++] = std::numbers::sqrt2 * h(k, l).real();
      out[pos++] = std::numbers::sqrt2 * h(k, l).imag();
    }
  }
}

ComplexMatrix orthonormal_from_coords(const RealVector& x, int n) {
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  int pos = 0;
  for (int k = 0; k < n; ++k) h(k, k) = x[pos++];
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      h(k, l) = Complex(x[pos], x[pos + 1]) / std::numbers::sqrt2;
      h(l, k) = std::conj(h(k, l));
      pos += 2;
    }
  }
  return h;
}

ComplexMatrix basis_element(int a, int n) {
  RealVector x = RealVector::Zero(n * n);
  x[a] = 1.0;
  return orthonormal_from_coords(x, n);
}

struct SlackFactors {
  std::vector<Eigen::LLT<ComplexMatrix>> llt;
  bool feasible = true;
};

SlackFactors factor_slacks(const Ensemble& e, const ComplexMatrix& z) {
  SlackFactors out;
  for (int i = 0; i < e.size(); ++i) {
    out.llt.emplace_back(z - e.weighted(i));
    if (out.llt.back().info() != Eigen::Success) {
      out.feasible = false;
      return out;
    }
  }
  return out;
}

double log_det(const Eigen::LLT<ComplexMatrix>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
}

double barrier_value(const Ensemble& e, const ComplexMatrix& z, const SlackFactors& f,
                     double w) {
  double v = z.trace().real();
  for (int i = 0; i < e.size(); ++i) v -= w * log_det(f.llt[i]);
  return v;
}

double success_of_unitary(const Ensemble& e, const ComplexMatrix& v) {
  double total = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    const ComplexMatrix cols = v.middleCols(e.profile.offset(i), e.profile.rank(i));
    total += (cols.adjoint() * e.weighted(i) * cols).trace().real();
  }
  return total;
}

Povm povm_of_unitary(const RankProfile& profile, const ComplexMatrix& v) {
  Povm povm{profile, {}};
  for (int i = 0; i < profile.blocks(); ++i) {
    const ComplexMatrix cols = v.middleCols(profile.offset(i), profile.rank(i));
    povm.elements.push_back(cols * cols.adjoint());
  }
  return povm;
}

ComplexMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix a(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) a(r, c) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

// Unitary whose first n-1 columns span the complement of v and whose last column is v.
ComplexMatrix completion_with_last(const ComplexVector& v) {
  const int n = static_cast<int>(v.size());
  ComplexMatrix a = ComplexMatrix::Identity(n, n);
  a.col(0) = v;
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix out(n, n);
  out.leftCols(n - 1) = q.rightCols(n - 1);
  out.col(n - 1) = v;
  return out;
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
  const auto eig = hermitian_eig(h);
  const ComplexVector phases =
      eig.values.unaryExpr([](double x) { return std::exp(Complex(0.0, x)); });
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size();
  return k % 2 == 1 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

std::string profile_string(const RankProfile& p) {
  std::string s;
  for (int i = 0; i < p.blocks(); ++i) {
    if (i > 0) s += ' ';
    s += std::to_string(p.rank(i));
  }
  return s;
}

}  // namespace

BarrierResult barrier_solve(const Ensemble& e, const BarrierConfig& cfg) {
  if (!(cfg.initial_weight > 0.0) || !(cfg.weight_decay > 0.0 && cfg.weight_decay < 1.0) ||
      cfg.max_outer < 1 || cfg.max_inner < 1 || !(cfg.start_shift > 0.0)) {
    throw MedError(ErrorKind::InvalidEnsemble, "invalid barrier configuration");
  }
  const int n = e.dim();
  const int dim = n * n;
  std::vector<ComplexMatrix> basis;
  for (int a = 0; a < dim; ++a) basis.push_back(basis_element(a, n));
  RealVector trace_grad(dim);
  orthonormal_coords(ComplexMatrix::Identity(n, n), trace_grad.data());

  BarrierResult out;
  ComplexMatrix z = hermitian_part(e.average()) + cfg.start_shift * ComplexMatrix::Identity(n, n);
  double w = cfg.initial_weight;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    int inner = 0;
    for (;;) {
      const SlackFactors f = factor_slacks(e, z);
      RealVector grad = trace_grad;
      RealMatrix hess = RealMatrix::Zero(dim, dim);
      RealVector col(dim);
      for (int i = 0; i < e.size(); ++i) {
        const ComplexMatrix y = f.llt[i].solve(ComplexMatrix::Identity(n, n));
        orthonormal_coords(hermitian_part(y), col.data());
        grad -= w * col;
        for (int a = 0; a < dim; ++a) {
          orthonormal_coords(hermitian_part(y * basis[a] * y), col.data());
          hess.col(a) += w * col;
        }
      }
      const RealVector step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (0.5 * decrement <= cfg.inner_tol) break;
      if (++inner > cfg.max_inner) {
        throw MedError(ErrorKind::MaxIterationsExceeded,
                       "barrier inner loop did not converge at weight " + std::to_string(w));
      }
      const double f0 = barrier_value(e, z, f, w);
      double t = 1.0;
      ComplexMatrix trial;
      for (;;) {
        trial = z + t * orthonormal_from_coords(step, n);
        const SlackFactors ft = factor_slacks(e, trial);
        if (ft.feasible && barrier_value(e, trial, ft, w) <= f0 - 1e-4 * t * decrement) break;
        t *= 0.5;
        if (t < 1e-12) {
          trial = z;
          break;
        }
      }
      if (trial == z) break;
      z = trial;
    }
    out.inner_iterations += inner;
    out.outer_iterations = outer + 1;
    out.trace_history.push_back(z.trace().real());
    if (w * n * e.size() <= cfg.outer_tol) break;
    w *= cfg.weight_decay;
  }
  out.z = z;
  out.p_success_upper = z.trace().real();
  return out;
}

BaselineResult helstrom_two_state(const Ensemble& e) {
  if (e.size() != 2) {
    throw MedError(ErrorKind::ShapeMismatch, "Helstrom measurement needs exactly two states");
  }
  const int n = e.dim();
  const auto eig = hermitian_eig(e.weighted(0) - e.weighted(1));
  ComplexMatrix p1 = ComplexMatrix::Zero(n, n);
  double abs_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    abs_sum += std::abs(eig.values[k]);
    if (eig.values[k] >= 0.0) p1 += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }
  const double total = e.priors[0] + e.priors[1];
  BaselineResult out;
  out.povm.profile = e.profile;
  out.povm.elements = {p1, ComplexMatrix::Identity(n, n) - p1};
  out.p_success = 0.5 * (total + abs_sum);
  return out;
}

int projective_parameter_count(const RankProfile& profile) {
  int k = profile.dim() * profile.dim();
  for (int r : profile.ranks()) k -= r * r;
  return k;
}

BaselineResult exhaustive_search(const Ensemble& e, int grid, std::uint64_t seed, bool refine) {
  const int n = e.dim();
  if (n > 3) throw MedError(ErrorKind::ShapeMismatch, "exhaustive search is limited to n <= 3");
  if (grid < 1) throw MedError(ErrorKind::InvalidProfile, "grid must be positive");
  const int k = projective_parameter_count(e.profile);

  ComplexMatrix best = ComplexMatrix::Identity(n, n);
  double best_p = success_of_unitary(e, best);
  auto consider = [&](const ComplexMatrix& v) {
    const double p = success_of_unitary(e, v);
    if (p > best_p) {
      best_p = p;
      best = v;
    }
  };

  if (k == 0) {
    // single block: the identity is the only measurement
  } else if (k <= 5 && e.size() == 2 && e.profile.rank(1) == 1) {
    // the rank-one element |v><v| ranges over complex projective space; its complement is
    // the other element
    constexpr double kBudget = 1e6;
    const int per = std::max(2, std::min(grid, static_cast<int>(std::pow(kBudget, 1.0 / k))));
    const double half_pi = std::numbers::pi / 2.0;
    const double two_pi = 2.0 * std::numbers::pi;
    auto angle = [&](int idx, double span, bool periodic) {
      return periodic ? span * idx / per : span * idx / (per - 1);
    };
    if (n == 2) {
      for (int a = 0; a < per; ++a) {
        for (int b = 0; b < per; ++b) {
          const double th = angle(a, half_pi, false);
          const double ph = angle(b, two_pi, true);
          ComplexVector v(2);
          v << std::cos(th), std::sin(th) * std::exp(Complex(0.0, ph));
          consider(completion_with_last(v));
        }
      }
    } else {
      for (int a = 0; a < per; ++a) {
        for (int b = 0; b < per; ++b) {
          for (int c = 0; c < per; ++c) {
            for (int d = 0; d < per; ++d) {
              const double x = angle(a, half_pi, false);
              const double y = angle(b, half_pi, false);
              ComplexVector v(3);
              v << std::cos(x), std::sin(x) * std::cos(y) * std::exp(Complex(0.0, angle(c, two_pi, true))),
                  std::sin(x) * std::sin(y) * std::exp(Complex(0.0, angle(d, two_pi, true)));
              consider(completion_with_last(v));
            }
          }
        }
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    for (int s = 0; s < grid; ++s) consider(haar_unitary(n, rng));
  }

  if (refine && k > 0) {
    const int dim = n * n;
    std::vector<ComplexMatrix> generators;
    for (int a = 0; a < dim; ++a) generators.push_back(basis_element(a, n));
    for (double delta = 0.1; delta > 1e-9;) {
      bool improved = false;
      for (int a = 0; a < dim; ++a) {
        for (double sign : {1.0, -1.0}) {
          const ComplexMatrix v = best * exp_i_hermitian(sign * delta * generators[a]);
          const double p = success_of_unitary(e, v);
          if (p > best_p + 1e-15) {
            best_p = p;
            best = v;
            improved = true;
          }
        }
      }
      if (!improved) delta *= 0.5;
    }
  }

  return BaselineResult{povm_of_unitary(e.profile, best), best_p};
}

RankProfile bench_profile(int n, int block_rank) {
  if (n < 1 || block_rank < 1) throw MedError(ErrorKind::InvalidProfile, "sizes must be positive");
  std::vector<int> ranks(n / block_rank, block_rank);
  if (n % block_rank != 0) ranks.push_back(n % block_rank);
  return RankProfile(ranks);
}

std::string ScalingReport::to_csv() const {
  auto num = [](double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  std::string out = "solver,n,profile,median_seconds,p_success\n";
  for (const auto& r : rows) {
    out += r.solver + ',' + std::to_string(r.n) + ',' + r.profile + ',' + num(r.median_seconds) +
           ',' + num(r.p_success) + '\n';
  }
  return out;
}

ScalingReport bench_scaling(const BenchConfig& cfg) {
  using clock = std::chrono::steady_clock;
  if (cfg.repeats < 1) throw MedError(ErrorKind::InvalidProfile, "repeats must be positive");
  ScalingReport report;
  for (const auto& solver : cfg.solvers) {
    if (solver != "newton" && solver != "homotopy" && solver != "barrier") {
      throw MedError(ErrorKind::ParseError, "unknown solver '" + solver + "'");
    }
  }
  for (const auto& solver : cfg.solvers) {
    std::vector<double> xs, ys;
    for (int n : cfg.sizes) {
      const RankProfile profile = bench_profile(n, cfg.block_rank);
      std::vector<double> times;
      double p_sum = 0.0;
      for (int rep = 0; rep < cfg.repeats; ++rep) {
        const Ensemble e = random_ensemble(profile, cfg.seed + 1000003ULL * n + rep);
        const auto start = clock::now();
        double p = 0.0;
        if (solver == "barrier") {
          p = barrier_solve(e).p_success_upper;
        } else {
          p = solve_ensemble(e, solver == "newton" ? Method::Newton : Method::Homotopy)
                  .p_success;
        }
        times.push_back(std::chrono::duration<double>(clock::now() - start).count());
        p_sum += p;
      }
      const double med = median(times);
      report.rows.push_back(BenchRow{solver, n, profile_string(profile), med, p_sum / cfg.repeats});
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(std::max(med, 1e-9)));
    }
    if (xs.size() >= 2) {
      const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
      const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
      }
      report.slopes[solver] = sxx > 0.0 ? sxy / sxx : 0.0;
    }
  }
  return report;
}

}  // namespace medsolve
