#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "margulis/error.hpp"
#include "margulis/invariant.hpp"
#include "margulis/liegroup.hpp"
#include "margulis/linalg.hpp"
#include "margulis/rng.hpp"
#include "margulis/word.hpp"

namespace margulis {

/// Representation of the free group on k generators into G x| V, given by the
/// images of the generators.
struct AffineRep {
  ModelSpec model;
  std::vector<AffineElement> generators;

  int k() const { return static_cast<int>(generators.size()); }
};

/// Image of a word under the representation, via the semidirect product law.
/// Inverse letters use (g, X)^{-1} = (g^{-1}, -Ad_{g^{-1}} X).
inline AffineElement evaluate(const AffineRep& rep, const FreeWord& w) {
  AffineElement acc = AffineElement::identity(rep.model.n);
  for (int letter : w.letters) {
    const int index = std::abs(letter) - 1;
    if (index >= rep.k()) fail(Errc::InvalidInput, "evaluate: letter outside generator range");
    const AffineElement& gen = rep.generators[static_cast<std::size_t>(index)];
    acc = (letter > 0) ? acc * gen : acc * gen.inverse();
  }
  return acc;
}

struct SpectrumEntry {
  FreeWord word;
  Eigen::VectorXd invariant;  // zero-weight coordinates, length n-1
  double q;                   // invariant quadratic value B(M, M)
};

struct MarkedSpectrum {
  ModelSpec model;
  int k = 0;
  int max_len = 0;
  std::vector<SpectrumEntry> entries;  // canonical word order, skips removed
  std::vector<FreeWord> skipped;       // words whose image failed loxodromy
};

namespace detail {

inline unsigned resolve_threads(unsigned requested, std::size_t work_items) {
  unsigned threads = requested;
  if (threads == 0) {
    if (const char* env = std::getenv("MARGULIS_THREADS")) {
      const long parsed = std::strtol(env, nullptr, 10);
      if (parsed > 0) threads = static_cast<unsigned>(parsed);
    }
  }
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (threads > work_items) threads = static_cast<unsigned>(work_items == 0 ? 1 : work_items);
  return threads;
}

}  // namespace detail

/// Marked invariant spectrum over all reduced words of length 1..max_len.
/// Words whose image is not loxodromic at tol (or is numerically marginal)
/// are recorded as skipped rather than failing the whole run. Disjoint word
/// blocks may be evaluated concurrently; the result order is the canonical
/// word order regardless of scheduling.
inline MarkedSpectrum marked_spectrum(const AffineRep& rep, int max_len, double tol = kLoxodromyTol,
                                      unsigned threads = 0) {
  if (max_len < 1) fail(Errc::InvalidInput, "marked_spectrum: max_len must be at least 1");
  const std::vector<FreeWord> words = enumerate_words(rep.k(), max_len);

  struct Slot {
    Eigen::VectorXd invariant;
    double q = 0.0;
    bool skipped = false;
  };
  std::vector<Slot> slots(words.size());

  const auto compute = [&](std::size_t i) {
    const AffineElement image = evaluate(rep, words[i]);
    try {
      if (!is_loxodromic(image.linear, tol)) {
        slots[i].skipped = true;
        return;
      }
      slots[i].invariant = margulis_invariant(image, tol);
      slots[i].q = invariant_q(image, tol);
    } catch (const Error& e) {
      if (e.code() == Errc::NotLoxodromic || e.code() == Errc::Degenerate) {
        slots[i].skipped = true;
        return;
      }
      throw;
    }
  };

  const unsigned nthreads = detail::resolve_threads(threads, words.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < words.size(); ++i) compute(i);
  } else {
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < words.size(); i += nthreads) {
            if (failed.load(std::memory_order_relaxed)) return;
            compute(i);
          }
        } catch (...) {
          if (!failed.exchange(true)) first_error = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  MarkedSpectrum spectrum;
  spectrum.model = rep.model;
  spectrum.k = rep.k();
  spectrum.max_len = max_len;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (slots[i].skipped)
      spectrum.skipped.push_back(words[i]);
    else
      spectrum.entries.push_back({words[i], std::move(slots[i].invariant), slots[i].q});
  }
  return spectrum;
}

enum class CompareVerdict { Equal, QEqualOnly, Differ };

inline const char* to_string(CompareVerdict v) {
  switch (v) {
    case CompareVerdict::Equal: return "EQUAL";
    case CompareVerdict::QEqualOnly: return "Q_EQUAL_ONLY";
    case CompareVerdict::Differ: return "DIFFER";
  }
  return "UNKNOWN";
}

struct CompareReport {
  CompareVerdict verdict = CompareVerdict::Equal;
  std::optional<FreeWord> witness;  // always present for DIFFER
  double discrepancy = 0.0;
  double tol = 0.0;
};

/// Entry-wise comparison of two spectra over the same model, generator count
/// and word range. The vector comparison uses an absolute tolerance scaled by
/// 1 + the largest |Q|^{1/2} seen, since invariants grow along dominant
/// directions with word length; Q values use the squared scale.
inline CompareReport compare_spectra(const MarkedSpectrum& s1, const MarkedSpectrum& s2, double tol) {
  if (!(s1.model == s2.model) || s1.max_len != s2.max_len || s1.k != s2.k)
    fail(Errc::LengthMismatch, "compare_spectra: spectra cover different word sets");

  double root_q = 0.0;
  for (const auto& e : s1.entries) root_q = std::max(root_q, std::sqrt(std::abs(e.q)));
  for (const auto& e : s2.entries) root_q = std::max(root_q, std::sqrt(std::abs(e.q)));
  const double vec_tol = tol * (1.0 + root_q);
  const double q_tol = tol * (1.0 + root_q) * (1.0 + root_q);

  CompareReport report;
  report.tol = tol;

  std::optional<FreeWord> vec_witness;
  double vec_disc = 0.0;
  std::optional<FreeWord> q_witness;
  double q_disc = 0.0;

  std::size_t i1 = 0, i2 = 0;
  const std::vector<FreeWord> words = enumerate_words(s1.k, s1.max_len);
  for (const FreeWord& w : words) {
    const bool in1 = i1 < s1.entries.size() && s1.entries[i1].word == w;
    const bool in2 = i2 < s2.entries.size() && s2.entries[i2].word == w;
    if (in1 != in2) {
      // Skipped on one side only: maximal disagreement.
      if (!q_witness) {
        q_witness = w;
        q_disc = std::numeric_limits<double>::infinity();
      }
      if (!vec_witness) {
        vec_witness = w;
        vec_disc = std::numeric_limits<double>::infinity();
      }
      if (in1) ++i1;
      if (in2) ++i2;
      continue;
    }
    if (!in1) continue;
    const SpectrumEntry& e1 = s1.entries[i1++];
    const SpectrumEntry& e2 = s2.entries[i2++];
    const double dv = (e1.invariant - e2.invariant).lpNorm<Eigen::Infinity>();
    if (dv > vec_tol && !vec_witness) {
      vec_witness = w;
      vec_disc = dv;
    }
    const double dq = std::abs(e1.q - e2.q);
    if (dq > q_tol && !q_witness) {
      q_witness = w;
      q_disc = dq;
    }
  }

  if (!vec_witness && !q_witness) {
    report.verdict = CompareVerdict::Equal;
  } else if (!q_witness) {
    report.verdict = CompareVerdict::QEqualOnly;
    report.witness = vec_witness;
    report.discrepancy = vec_disc;
  } else {
    report.verdict = CompareVerdict::Differ;
    if (vec_witness && word_less(*vec_witness, *q_witness)) {
      report.witness = vec_witness;
      report.discrepancy = vec_disc;
    } else {
      report.witness = q_witness;
      report.discrepancy = q_disc;
    }
  }
  return report;
}

/// Generator-wise conjugation c rho c^{-1}.
inline AffineRep conjugate_rep(const AffineRep& rep, const AffineElement& c) {
  AffineRep out;
  out.model = rep.model;
  const AffineElement c_inv = c.inverse();
  out.generators.reserve(rep.generators.size());
  for (const AffineElement& g : rep.generators) out.generators.push_back(c * g * c_inv);
  return out;
}

/// Searches for Y with X_i = Y - Ad_{g_i} Y across all generators, i.e. a
/// vector making the translation cocycle a coboundary. The stacked system is
/// solved in the minimum-norm sense; a candidate is accepted only if the
/// residual is small against the translation scale AND the relation persists
/// on every word of length 2, which guards against rank-deficient generator
/// systems fitting the generators spuriously. Absence is a value, not an
/// error.
inline std::optional<VElement> coboundary_solve(const AffineRep& rep, double tol) {
  const int n = rep.model.n;
  const int d = rep.model.rep_dim();
  std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> blocks;
  double scale = 0.0;
  blocks.reserve(rep.generators.size());
  for (const AffineElement& g : rep.generators) {
    blocks.emplace_back(Eigen::MatrixXd::Identity(d, d) - adjoint_rep(g.linear), g.translation.coords());
    scale = std::max(scale, g.translation.coords().norm());
  }
  const auto [y, residual] = min_norm_solve(blocks);
  const double budget = tol * (1.0 + scale);
  if (residual > budget) return std::nullopt;
  const VElement candidate = y.size() == 0 ? VElement::zero(n) : VElement::from_coords(y, n);
  for (const FreeWord& w : enumerate_words(rep.k(), 2)) {
    if (w.length() != 2) continue;
    const AffineElement image = evaluate(rep, w);
    const VElement predicted = candidate - adjoint_action(image.linear, candidate);
    if ((image.translation - predicted).norm() > budget) return std::nullopt;
  }
  return candidate;
}

/// Certifies that two representations with the same linear part differ by an
/// inner conjugation (e, Y), recovering the conjugator from the difference
/// cocycle T_1 - T_2 and verifying it on every word up to max_len. Returns
/// nothing when the linear parts differ or no conjugator exists at tol.
inline std::optional<AffineElement> certify_conjugacy(const AffineRep& rep1, const AffineRep& rep2,
                                                      int max_len, double tol) {
  if (!(rep1.model == rep2.model) || rep1.k() != rep2.k()) return std::nullopt;
  const int n = rep1.model.n;
  for (int i = 0; i < rep1.k(); ++i) {
    const Eigen::MatrixXd& l1 = rep1.generators[static_cast<std::size_t>(i)].linear.mat();
    const Eigen::MatrixXd& l2 = rep2.generators[static_cast<std::size_t>(i)].linear.mat();
    if ((l1 - l2).norm() > tol * (1.0 + l1.norm())) return std::nullopt;
  }

  AffineRep difference;
  difference.model = rep1.model;
  difference.generators.reserve(rep1.generators.size());
  for (int i = 0; i < rep1.k(); ++i) {
    const auto& g1 = rep1.generators[static_cast<std::size_t>(i)];
    const auto& g2 = rep2.generators[static_cast<std::size_t>(i)];
    difference.generators.push_back({g1.linear, g1.translation - g2.translation});
  }
  const std::optional<VElement> y = coboundary_solve(difference, tol);
  if (!y) return std::nullopt;

  const AffineElement conjugator{GroupElement::identity(n), *y};
  const AffineRep conjugated = conjugate_rep(rep2, conjugator);
  for (const FreeWord& w : enumerate_words(rep1.k(), max_len)) {
    const VElement t1 = evaluate(rep1, w).translation;
    const VElement t2 = evaluate(conjugated, w).translation;
    if ((t1 - t2).norm() > tol * (1.0 + t1.norm())) return std::nullopt;
  }
  return conjugator;
}

/// Random loxodromic element: a strongly dominant positive diagonal (log gaps
/// bounded below) conjugated by the exponential of a random traceless matrix.
inline GroupElement random_loxodromic_element(const ModelSpec& model, Rng& rng) {
  const int n = model.n;
  Eigen::VectorXd jd(n);
  double level = 0.0;
  for (int i = 0; i < n; ++i) {
    jd[i] = level;
    level -= rng.uniform(0.4, 1.0);
  }
  jd.array() -= jd.mean();
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = rng.uniform(-0.6, 0.6);
  s.diagonal().array() -= s.trace() / n;
  const Eigen::MatrixXd u = s.exp();
  const Eigen::MatrixXd diag = jd.array().exp().matrix().asDiagonal();
  return GroupElement(u * diag * u.inverse());
}

/// Random traceless matrix with entries of the given scale.
inline VElement random_velement(const ModelSpec& model, Rng& rng, double scale = 1.0) {
  const int n = model.n;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = scale * rng.uniform(-1.0, 1.0);
  m.diagonal().array() -= m.trace() / n;
  return VElement(std::move(m));
}

/// Draws `samples` random group elements and reports whether the orbit
/// {Ad_g X} spans all of V at rank tolerance 1e-8.
inline bool orbit_span_check(const ModelSpec& model, const VElement& x, int samples,
                             std::uint64_t seed) {
  if (x.coords().norm() == 0.0) fail(Errc::ZeroInput, "orbit_span_check: zero vector");
  const int d = model.rep_dim();
  Rng rng(seed);
  Eigen::MatrixXd orbit(samples, d);
  for (int s = 0; s < samples; ++s) {
    const GroupElement g = random_loxodromic_element(model, rng);
    orbit.row(s) = (adjoint_rep(g) * x.coords()).transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(orbit);
  qr.setThreshold(1e-8);
  return qr.rank() == d;
}

/// Deterministic fixture generator: rejection-samples generator tuples until
/// every reduced word of length <= max_len is loxodromic at the default
/// tolerance. Translations are random traceless matrices at the given scale.
inline AffineRep random_loxodromic_rep(const ModelSpec& model, int k, int max_len,
                                       std::uint64_t seed, double translation_scale = 1.0) {
  if (k < 2) fail(Errc::InvalidInput, "random_loxodromic_rep: at least two generators required");
  Rng rng(seed);
  const int budget = 200;
  const std::vector<FreeWord> words = enumerate_words(k, max_len);
  for (int attempt = 0; attempt < budget; ++attempt) {
    AffineRep rep;
    rep.model = model;
    rep.generators.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      rep.generators.push_back(
          {random_loxodromic_element(model, rng), random_velement(model, rng, translation_scale)});
    bool ok = true;
    for (const FreeWord& w : words)
      if (!is_loxodromic(evaluate(rep, w).linear)) {
        ok = false;
        break;
      }
    if (ok) return rep;
  }
  fail(Errc::GenerationFailed, "random_loxodromic_rep: retry budget exhausted");
}

}  // namespace margulis
