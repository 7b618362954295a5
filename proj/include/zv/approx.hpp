#pragma once

// Randomized zonotope order reduction by l1 Lewis-weight row sampling, and
// approximate norm maximization over the reduced zonotope.
//
// Writing Z = c + sum_i conv{0, a_i} and m = c + (1/2) sum_i a_i for its
// midpoint, the support function of Z - m is v -> sum_i |a_i . v| / 2 =
// ||B v||_1 where B has rows a_i / 2.  Sampling r rows of B i.i.d. with
// probability p_i proportional to their l1 Lewis weights and rescaling row i
// by 1/(r p_i) yields B' with ||B' v||_1 within factor (1+eps) of ||B v||_1
// for every v, with high probability.  The reduced zonotope has generators
// 2 b'_j and keeps the midpoint m, so the support functions of both bodies
// centered at m sandwich each other within (1+eps).

#include <zv/errors.hpp>
#include <zv/linalg.hpp>
#include <zv/zonotope.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <future>
#include <random>
#include <utility>
#include <vector>

namespace zv {

// One sampled embedding of a row matrix: row sample_indices[j] of the source,
// scaled by scale_factors[j] = 1/(r p) > 0, became row j of reduced_rows.
struct SampledEmbedding {
  RMatrix reduced_rows;
  std::vector<std::size_t> sample_indices;
  std::vector<Rational> scale_factors;
  std::uint64_t seed = 0;
};

namespace detail {

// Deterministic per-repetition seed derivation (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Exact rational value of a (finite) double.
inline Rational from_double(double x) { return Rational(mpq_class(x)); }

// Gauss-Jordan inverse of a dense d x d double matrix with partial pivoting.
inline std::vector<double> invert_dense(std::vector<double> m, std::size_t d) {
  std::vector<double> inv(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) inv[i * d + i] = 1.0;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < d; ++i)
      if (std::fabs(m[i * d + c]) > std::fabs(m[piv * d + c])) piv = i;
    if (std::fabs(m[piv * d + c]) < 1e-300)
      throw internal_error("lewis weights: singular normal matrix");
    if (piv != c)
      for (std::size_t j = 0; j < d; ++j) {
        std::swap(m[c * d + j], m[piv * d + j]);
        std::swap(inv[c * d + j], inv[piv * d + j]);
      }
    const double s = 1.0 / m[c * d + c];
    for (std::size_t j = 0; j < d; ++j) {
      m[c * d + j] *= s;
      inv[c * d + j] *= s;
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (i == c) continue;
      const double f = m[i * d + c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        m[i * d + j] -= f * m[c * d + j];
        inv[i * d + j] -= f * inv[c * d + j];
      }
    }
  }
  return inv;
}

} // namespace detail

// Approximate l1 Lewis weights of the rows of b, by the fixed-point
// iteration w_i <- (b_i^T (B^T W^{-1} B)^{-1} b_i)^{1/2} run for 30 rounds
// in doubles from w = 1.  The weights depend only on the column space, so
// rank-deficient input is first restricted to an independent column subset;
// zero rows get weight zero.  At the fixed point the w_i are the leverage
// scores of W^{-1/2} B, hence sum to the rank.
inline std::vector<double> lewis_weights_l1(const RMatrix& b) {
  const std::size_t n = b.rows();
  if (n == 0) throw input_error("lewis_weights_l1: matrix has no rows");
  const std::vector<std::size_t> pick = independent_columns(b);
  if (pick.empty()) throw input_error("lewis_weights_l1: matrix has rank zero");
  const std::size_t d = pick.size();
  std::vector<double> rows(n * d);
  std::vector<char> zero(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool all_zero = true;
    for (std::size_t j = 0; j < d; ++j) {
      const Rational& e = b(i, pick[j]);
      rows[i * d + j] = e.to_double();
      if (!e.is_zero()) all_zero = false;
    }
    zero[i] = all_zero ? 1 : 0;
  }
  std::vector<double> w(n, 1.0);
  for (int round = 0; round < 30; ++round) {
    std::vector<double> m(d * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (zero[i]) continue;
      const double inv = 1.0 / std::max(w[i], 1e-12);
      for (std::size_t a = 0; a < d; ++a) {
        const double ra = rows[i * d + a] * inv;
        if (ra == 0.0) continue;
        for (std::size_t c = 0; c < d; ++c) m[a * d + c] += ra * rows[i * d + c];
      }
    }
    const std::vector<double> mi = detail::invert_dense(std::move(m), d);
    for (std::size_t i = 0; i < n; ++i) {
      if (zero[i]) {
        w[i] = 0.0;
        continue;
      }
      double q = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += mi[a * d + c] * rows[i * d + c];
        q += rows[i * d + a] * s;
      }
      w[i] = q > 0.0 ? std::sqrt(q) : 0.0;
    }
  }
  return w;
}

// r i.i.d. Lewis-weight row samples of b: row i is drawn with probability
// p_i = w_i / sum(w) and rescaled by 1/(r p_i), the unbiased importance
// estimator of ||B x||_1.  Deterministic in (b, r, seed).
inline SampledEmbedding sample_embedding(const RMatrix& b, std::size_t r, std::uint64_t seed) {
  if (r == 0) throw input_error("sample_embedding: zero sample budget");
  const std::vector<double> w = lewis_weights_l1(b);
  std::vector<std::size_t> alive;
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) {
      alive.push_back(i);
      total += w[i];
    }
  if (alive.empty() || !(total > 0.0))
    throw input_error("sample_embedding: all row weights vanish");
  std::vector<double> cum(alive.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < alive.size(); ++k) {
    acc += w[alive[k]];
    cum[k] = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, total);
  RMatrix out(r, b.cols());
  std::vector<std::size_t> idx(r);
  std::vector<Rational> scale(r);
  const Rational budget(static_cast<long long>(r));
  for (std::size_t j = 0; j < r; ++j) {
    const double u = unif(rng);
    std::size_t k = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (k >= alive.size()) k = alive.size() - 1;
    const std::size_t i = alive[k];
    Rational s = Rational(1) / (budget * detail::from_double(w[i] / total));
    for (std::size_t c = 0; c < b.cols(); ++c) out(j, c) = b(i, c) * s;
    idx[j] = i;
    scale[j] = std::move(s);
  }
  return {std::move(out), std::move(idx), std::move(scale), seed};
}

// Randomized order reduction: replaces z by a zonotope with
// r = ceil(C d ln(d+1) / eps^2) generators whose support function, centered
// at the shared midpoint, is within factor (1+eps) of z's with high
// probability.  If r >= n the input is returned unchanged.  `repetitions`
// independent samples are drawn concurrently with seeds derived from `seed`
// and the candidate with median total support over the probes +-e_i and
// all-ones is kept (ties break toward the earliest repetition), so the
// result is deterministic in (z, epsilon, seed).
inline Zonotope order_reduce(const Zonotope& z, const Rational& epsilon, std::uint64_t seed,
                             double sampling_constant = 20.0, std::size_t repetitions = 5) {
  if (epsilon.sign() <= 0) throw input_error("order_reduce: epsilon must be positive");
  if (!(sampling_constant > 0.0))
    throw input_error("order_reduce: sampling constant must be positive");
  if (repetitions == 0) throw input_error("order_reduce: need at least one repetition");
  const std::size_t d = z.dim();
  const std::size_t n = z.generator_count();
  if (n == 0) return z;
  const double eps = epsilon.to_double();
  const double raw =
      sampling_constant * static_cast<double>(d) * std::log(static_cast<double>(d) + 1.0) / (eps * eps);
  std::size_t r = static_cast<std::size_t>(std::ceil(raw));
  if (r == 0) r = 1;
  if (r >= n) return z;

  RMatrix b(n, d);
  RVector mid = z.center();
  const Rational half(1, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) {
      Rational h = z.generator(i)[c] * half;
      mid[c] += h;
      b(i, c) = std::move(h);
    }

  // Generators 2 b'_j; center mid - sum_j b'_j keeps the midpoint at mid.
  const auto build = [&](std::size_t rep) -> Zonotope {
    const SampledEmbedding e = sample_embedding(b, r, detail::mix_seed(seed, rep));
    RMatrix gens(d, r);
    RVector center = mid;
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t c = 0; c < d; ++c) {
        const Rational& bj = e.reduced_rows(j, c);
        gens(c, j) = bj + bj;
        center[c] -= bj;
      }
    return Zonotope(gens, std::move(center));
  };

  // ZV_THREADS=1 forces the repetitions sequential (output is identical
  // either way; candidates are collected in repetition order).
  const char* threads = std::getenv("ZV_THREADS");
  std::vector<Zonotope> cands;
  cands.reserve(repetitions);
  if (repetitions == 1 || (threads != nullptr && std::atoi(threads) <= 1)) {
    for (std::size_t rep = 0; rep < repetitions; ++rep) cands.push_back(build(rep));
  } else {
    std::vector<std::future<Zonotope>> futs;
    futs.reserve(repetitions);
    for (std::size_t rep = 0; rep < repetitions; ++rep)
      futs.push_back(std::async(std::launch::async, build, rep));
    for (auto& f : futs) cands.push_back(f.get());
  }

  std::vector<RVector> probes;
  for (std::size_t c = 0; c < d; ++c) {
    RVector plus(d), minus(d);
    plus[c] = Rational(1);
    minus[c] = Rational(-1);
    probes.push_back(std::move(plus));
    probes.push_back(std::move(minus));
  }
  RVector ones(d);
  for (std::size_t c = 0; c < d; ++c) ones[c] = Rational(1);
  probes.push_back(std::move(ones));

  std::vector<std::pair<Rational, std::size_t>> ranked;
  ranked.reserve(repetitions);
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    Rational s;
    for (const RVector& v : probes) s += support(cands[rep], v).first;
    ranked.emplace_back(std::move(s), rep);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b2) {
    if (a.first != b2.first) return a.first < b2.first;
    return a.second < b2.second;
  });
  return cands[ranked[repetitions / 2].second];
}

// (1+eps)-approximate p-norm maximum over z: reduce, then take the exact
// maximum over the reduced zonotope's vertices.  The returned value relates
// to lp_norm_max(z, p) within factor (1+eps)^2 when the sandwich holds (one
// factor from the embedding, one from the midpoint translation).
inline NormMaxResult approx_norm_max(const Zonotope& z, const PNorm& p, const Rational& epsilon,
                                     std::uint64_t seed, double sampling_constant = 20.0,
                                     std::size_t repetitions = 5) {
  return lp_norm_max(order_reduce(z, epsilon, seed, sampling_constant, repetitions), p);
}

// User-norm variant: `norm` must be convex and absolutely homogeneous (not
// verified); it is evaluated at every vertex of the reduced zonotope.
inline double approx_norm_max(const Zonotope& z, const std::function<double(const RVector&)>& norm,
                              const Rational& epsilon, std::uint64_t seed,
                              double sampling_constant = 20.0, std::size_t repetitions = 5) {
  const Zonotope zr = order_reduce(z, epsilon, seed, sampling_constant, repetitions);
  double best = 0.0;
  bool first = true;
  for (const RVector& v : vertices(zr)) {
    const double val = norm(v);
    if (first || val > best) {
      best = val;
      first = false;
    }
  }
  return best;
}

} // namespace zv
