#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spectra/construct.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

struct ExposureParams {
  double c_prime = 0;     // 0 = span/√n
  std::size_t span = 0;   // c'√n; 0 = min(⌊|S|/2⌋, |T|)
  double M = 0.7;         // large-increment cutoff, × √n
  double beta = -1;       // < 0 = 2c'²/3
  double Q_sqrt = 0.15;   // Q for the Q√n terms (X window, anchor spacing)
  double Q_lin = 0.04;    // Q for the Qn terms; raised to 3β when β is automatic
  double gamma = 0.05;    // |X_{k,i}| ≥ γ√n
  std::size_t q_thin = 1;  // minimum thinning stride
  // P' selection: every q-th candidate with q minimal, or a sweep that keeps
  // each candidate at least the anchor gap above the last one kept.
  enum class Thinning { stride, sweep } anchor_thinning = Thinning::sweep;
  double kprime_sep = 0;   // K' spacing, × Q_lin·n
  double interval_len = 0;  // representative intervals, × √n; 0 = every index
  double kappa_gate = 0.002;   // |e(U) − m| ≤ κ·n^{3/2}
  double kappa_window = 0.05;  // reported sizes within e(U) ± κ·n^{3/2}
  double k_fraction = 0.2;     // |K| ≥ ⌈k_fraction · rows⌉
  std::size_t exposure_retries = 20;
  double verify_fraction = 0.01;
  std::size_t trials = 200;
  std::size_t workers = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

// Constants after resolving automatic defaults against a construction.
struct ResolvedExposure {
  std::size_t span = 0;
  double c_prime = 0;
  double beta = 0;
  double Q_lin = 0;
  double sep_ratio = 0;  // gap / (8√n) divided by c'; ≥ 1 when the separation bound holds
  std::size_t k_lo = 0, k_hi = 0;  // rows k ∈ [k_lo, k_hi], columns i ∈ [0, span]
  std::int64_t x_lo = 0, x_hi = 0;  // window for e(U_{k,i} ∪ x) − e(U_{k,i})
  std::int64_t anchor_gap = 0;      // minimum spacing of selected anchors
  std::size_t x_min = 0;            // ⌈γ√n⌉
  std::size_t i_min = 0;            // ⌈(1 − β/(2M))·span⌉
  std::size_t k_min = 0;            // ⌈k_fraction · rows⌉
  std::vector<double> expected_drift;  // per row: 𝔼[e_{k,span} − e_{k,0}]
  double min_drift = 0;
};
ResolvedExposure resolve_exposure(const Graph& g, const ConstructionResult& cr, const ExposureParams& params);

// Vertices of the first k−i units of S and the first i units of T.
VertexSet z_family(std::size_t n, const std::vector<Unit>& s, const std::vector<Unit>& t, std::size_t k,
                   std::size_t i);

// Each vertex of U0 kept independently with probability 1/2.
VertexSet expose(const VertexSet& u0, std::uint64_t seed);

struct PerKRecord {
  std::size_t k = 0;
  std::vector<std::int64_t> e;       // e_{k,i}, i = 0..span
  std::vector<std::int64_t> deltas;  // deltas[i-1] = e_{k,i} − e_{k,i-1}
  double e_hat0 = 0;                 // e(Z_{k,0}) + e(Z_{k,0}, U0)/2
  std::vector<std::size_t> i_k;
  std::vector<std::vector<std::size_t>> x_ki;  // per i, indices into X
  std::vector<std::vector<std::int64_t>> o_ki;  // matching e(U_{k,i} ∪ x) − e(U_{k,i})
  std::array<bool, 4> checks{};
  bool all() const { return checks[0] && checks[1] && checks[2] && checks[3]; }
};

// e_{k,i} for every cell, computed incrementally along each row and
// spot-checked against direct counts. Throws PipelineFailure("family_table")
// on any mismatch.
std::vector<PerKRecord> family_table(const Graph& g, const VertexSet& u, const VertexSet& u0,
                                      const std::vector<Unit>& s, const std::vector<Unit>& t,
                                      const ResolvedExposure& rx, double verify_fraction, std::uint64_t seed,
                                      std::size_t workers = 1);

// Fills i_k, x_ki, o_ki and the four checks of one record.
void per_k_checks(PerKRecord& rec, const Graph& g, const VertexSet& u, const std::vector<Unit>& s,
                  const std::vector<Unit>& t, const std::vector<Unit>& x, const ResolvedExposure& rx,
                  const ExposureParams& params);

struct Anchor {
  std::size_t k = 0;
  std::size_t i = 0;
  std::int64_t value = 0;  // e_{k,i}
};

struct FamilyEntry {
  std::size_t k = 0;
  std::size_t i = 0;
  std::size_t x = 0;      // index into X
  std::int64_t size = 0;  // e(U ∪ Z_{k,i} ∪ x)
};

struct ExposureAttempt {
  std::int64_t e_u = 0;
  bool gate = false;
  std::size_t k_pass = 0;
};

struct PerMOutcome {
  std::int64_t m = 0;
  ConstructionResult construction;
  ResolvedExposure resolved;
  ExposureParams params;
  VertexSet u;
  std::int64_t e_u = 0;
  std::vector<ExposureAttempt> attempts;
  std::vector<PerKRecord> records;
  std::vector<std::size_t> k_set;
  std::vector<std::size_t> k_prime;
  std::size_t k_stride = 1;
  std::vector<Anchor> p_prime;  // increasing value
  std::size_t p_stride = 1;
  std::vector<FamilyEntry> family;
  SizeSpectrum distinct_sizes;
  std::int64_t window_radius = 0;  // max |size − e(U)|
  double window_bound = 0;         // κ·n^{3/2}
};

// Construction then exposure. Throws PipelineFailure on exhausted retries.
PerMOutcome per_m_run(const Graph& g, std::int64_t m, const ConstructionParams& cparams,
                      const ExposureParams& eparams);
PerMOutcome per_m_from_construction(const Graph& g, ConstructionResult cr, const ExposureParams& eparams);

struct SeparationCheck {
  bool anchors_spaced = false;  // consecutive P' values ≥ 2Q√n apart
  bool clusters_narrow = false;  // each (k,i) cluster spans ≤ 2Q√n
  bool no_collisions = false;    // no size shared by two clusters
  bool sizes_reproduce = false;  // every size equals a direct count
  bool window_contained = false;
  bool ok() const { return anchors_spaced && clusters_narrow && no_collisions && sizes_reproduce && window_contained; }
};
SeparationCheck verify_separation(const Graph& g, const PerMOutcome& out);

struct PerKStats {
  std::size_t exposures = 0;
  std::size_t rows = 0;
  std::array<std::size_t, 4> passes{};
  std::array<double, 4> rates{};
};
// Pass rates of the four checks over `params.trials` independent exposures
// of a fixed construction, pooled over rows k.
PerKStats per_k_statistics(const Graph& g, const ConstructionResult& cr, const ExposureParams& params);

struct TheoremParams {
  double sigma = 0;  // window step, × n^{3/2}; 0 = from a pilot run
  std::size_t max_windows = 64;
  std::size_t workers = 1;
};

struct TheoremWindow {
  std::size_t j = 0;
  std::int64_t m = 0;
  bool ok = false;
  std::string stage;  // failing stage when !ok
  bool kept = false;
  std::int64_t e_u = 0;
  std::size_t count = 0;
  std::int64_t min_size = 0, max_size = 0;
  std::size_t k_selected = 0, p_selected = 0, attempts = 0;
};

struct TheoremOutcome {
  double sigma = 0;
  std::vector<TheoremWindow> windows;
  SizeSpectrum sizes;  // union over kept windows
  std::size_t total = 0;
};

TheoremOutcome theorem_run(const Graph& g, const ConstructionParams& cparams, const ExposureParams& eparams,
                           const TheoremParams& tparams = {});

}  // namespace spectra
