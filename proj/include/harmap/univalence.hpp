#pragma once

// Non-univalence detection and the sharpness probes. A grid collision is only
// a candidate; it becomes a certificate once the boundary image is shown to
// wind at least twice around the collision point (for a sense-preserving map
// the winding number counts preimages). Absence of collisions is evidence,
// never proof.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "harmap/core.hpp"
#include "harmap/families.hpp"
#include "harmap/geometry.hpp"
#include "harmap/parallel.hpp"
#include "harmap/sampling.hpp"
#include "harmap/winding.hpp"

namespace harmap {

struct Collision {
  Complex z1, z2;
  Complex image;  // f(z1)
  double image_distance = 0.0;
  enum class Status { confirmed, unconfirmed } status = Status::unconfirmed;
  std::optional<int> winding;  // winding found at the perturbed target
};

struct CollisionReport {
  bool found = false;           // some candidate survived re-verification
  bool certified = false;       // some candidate has winding >= 2
  std::optional<Collision> pair;  // best confirmed, else best unconfirmed
  int radial_m = 0;
  int angular_m = 0;
  double r = 0.0;
  double collision_threshold = 0.0;
  double separation_threshold = 0.0;
  int candidates = 0;   // clusters examined
  int confirmed = 0;
  int unconfirmed = 0;
  int refuted = 0;      // winding at most 1 at every tested target

  std::string tag() const { return certified ? "certificate" : (found ? "unconfirmed" : "evidence"); }
};

struct InjectivityOptions {
  int max_clusters = 8;          // candidates re-verified by winding
  bool verify = true;
  WindingOptions winding;
};

namespace detail {

// Candidate pairs from a sampled polar grid. Each point p gets a threshold
// t_p = min(tau, l_p / 4), l_p the largest image distance to its grid
// neighbours. Two overlapping sheets interleave their lattices, so a genuine
// fold always yields pairs far below the local spacing, whereas regions the
// map merely compresses (cusps, the neighbourhood of a zero of h') only
// bring distinct preimages to within about one spacing. Points live in a hash at level L(p) with cell
// size tau 2^-L(p) >= t_p; a pair is tested from its finer end by scanning
// the 3x3 cells of every coarser occupied level.
inline std::vector<Collision> collision_candidates(const SampledParts& s, const std::vector<Complex>& f,
                                                   const PolarGrid& grid, double tau, double sep) {
  const int rm = grid.radial_m, am = grid.angular_m;
  const std::size_t total = f.size();
  auto idx = [am](int j, int k) { return static_cast<std::size_t>(j) * am + ((k % am) + am) % am; };
  std::vector<double> thr(total);
  std::vector<int> level(total);
  constexpr int kLevels = 40;
  for (int j = 0; j < rm; ++j)
    for (int k = 0; k < am; ++k) {
      const std::size_t p = idx(j, k);
      double l = std::max(std::abs(f[p] - f[idx(j, k + 1)]), std::abs(f[p] - f[idx(j, k - 1)]));
      l = std::max(l, j > 0 ? std::abs(f[p] - f[idx(j - 1, k)]) : std::abs(f[p]));
      if (j + 1 < rm) l = std::max(l, std::abs(f[p] - f[idx(j + 1, k)]));
      thr[p] = std::min(tau, 0.25 * l);
      int L = thr[p] > 0.0 ? static_cast<int>(std::floor(std::log2(tau / thr[p]))) : kLevels - 1;
      level[p] = std::clamp(L, 0, kLevels - 1);
    }
  auto key = [](int L, long long ix, long long iy) {
    return (static_cast<std::uint64_t>(L) << 58) ^ (static_cast<std::uint64_t>(ix & 0x1FFFFFFF) << 29) ^
           static_cast<std::uint64_t>(iy & 0x1FFFFFFF);
  };
  std::vector<bool> used(kLevels, false);
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
  cells.reserve(total);
  auto cell_of = [tau](Complex w, int L, long long& ix, long long& iy) {
    const double c = std::ldexp(tau, -L);
    ix = static_cast<long long>(std::floor(w.real() / c));
    iy = static_cast<long long>(std::floor(w.imag() / c));
  };
  for (std::size_t p = 0; p < total; ++p) {
    long long ix, iy;
    cell_of(f[p], level[p], ix, iy);
    cells[key(level[p], ix, iy)].push_back(static_cast<std::uint32_t>(p));
    used[level[p]] = true;
  }
  std::vector<Collision> out;
  for (std::size_t p = 0; p < total; ++p) {
    for (int L = 0; L <= level[p]; ++L) {
      if (!used[L]) continue;
      long long ix, iy;
      cell_of(f[p], L, ix, iy);
      for (long long dx = -1; dx <= 1; ++dx)
        for (long long dy = -1; dy <= 1; ++dy) {
          auto it = cells.find(key(L, ix + dx, iy + dy));
          if (it == cells.end()) continue;
          for (std::uint32_t q : it->second) {
            // Pairs at equal levels are seen from both ends; keep one.
            if (level[q] == level[p] && q <= p) continue;
            const double d = std::abs(f[p] - f[q]);
            if (d >= std::min(thr[p], thr[q])) continue;
            if (std::abs(s.points[p] - s.points[q]) <= sep) continue;
            out.push_back({s.points[p], s.points[q], f[p], d, Collision::Status::unconfirmed, std::nullopt});
          }
        }
    }
  }
  return out;
}

}  // namespace detail

/// Collision scan of f on a polar grid from precomputed h and G samples.
inline CollisionReport grid_injectivity(const HarmonicMap& f, const SampledParts& samples, const PolarGrid& grid,
                                        const InjectivityOptions& opt = {}) {
  CollisionReport rep;
  rep.radial_m = grid.radial_m;
  rep.angular_m = grid.angular_m;
  rep.r = grid.r;
  const auto values = samples.f_values(f.omega().coefficient());
  double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
  for (const auto& w : values) {
    require_finite(w, "grid image");
    lo_x = std::min(lo_x, w.real());
    hi_x = std::max(hi_x, w.real());
    lo_y = std::min(lo_y, w.imag());
    hi_y = std::max(hi_y, w.imag());
  }
  const double diameter = std::hypot(hi_x - lo_x, hi_y - lo_y);
  rep.collision_threshold = 1e-4 * diameter;
  rep.separation_threshold = 4.0 * grid.spacing();
  if (diameter == 0.0) return rep;
  auto cands = detail::collision_candidates(samples, values, grid, rep.collision_threshold, rep.separation_threshold);
  if (cands.empty()) return rep;

  // One representative (closest pair) per coarse image cell, closest first.
  const double coarse = 64.0 * rep.collision_threshold;
  std::unordered_map<std::uint64_t, std::size_t> best;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    const auto ix = static_cast<long long>(std::floor(c.image.real() / coarse));
    const auto iy = static_cast<long long>(std::floor(c.image.imag() / coarse));
    const std::uint64_t k = (static_cast<std::uint64_t>(ix & 0xFFFFFFFF) << 32) ^ static_cast<std::uint64_t>(iy & 0xFFFFFFFF);
    auto [it, inserted] = best.try_emplace(k, i);
    if (!inserted && c.image_distance < cands[it->second].image_distance) it->second = i;
  }
  std::vector<std::size_t> order;
  for (const auto& [k, i] : best) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cands[a].image_distance != cands[b].image_distance) return cands[a].image_distance < cands[b].image_distance;
    return a < b;
  });
  if (static_cast<int>(order.size()) > opt.max_clusters) order.resize(opt.max_clusters);
  rep.candidates = static_cast<int>(order.size());

  const bool sense_preserving = f.omega().sup_norm() < 1.0;
  std::optional<Collision> best_confirmed, best_unconfirmed;
  for (std::size_t i : order) {
    Collision c = cands[i];
    bool refuted = false;
    if (opt.verify && sense_preserving) {
      const Complex base = c.image;
      std::vector<Complex> targets;
      for (int d = 0; d < 8; ++d) targets.push_back(base + 2.0 * rep.collision_threshold * std::polar(1.0, kTwoPi * d / 8));
      int low = 0, computed = 0;
      for (const auto& t : targets) {
        try {
          const auto w = winding_count(f, grid.r, t, opt.winding);
          ++computed;
          if (w.count >= 2) {
            c.status = Collision::Status::confirmed;
            c.winding = w.count;
            break;
          }
          if (w.count <= 1) ++low;
          c.winding = w.count;
        } catch (const Error&) {
          // Target too close to the boundary image or ambiguous: try the next.
        }
      }
      refuted = c.status != Collision::Status::confirmed && computed > 0 && low == computed;
    }
    if (refuted) {
      ++rep.refuted;
    } else if (c.status == Collision::Status::confirmed) {
      ++rep.confirmed;
      if (!best_confirmed || c.image_distance < best_confirmed->image_distance) best_confirmed = c;
    } else {
      ++rep.unconfirmed;
      if (!best_unconfirmed || c.image_distance < best_unconfirmed->image_distance) best_unconfirmed = c;
    }
  }
  rep.certified = rep.confirmed > 0;
  rep.found = rep.confirmed + rep.unconfirmed > 0;
  rep.pair = best_confirmed ? best_confirmed : best_unconfirmed;
  return rep;
}

inline CollisionReport grid_injectivity(const HarmonicMap& f, const PolarGrid& grid = {},
                                        const InjectivityOptions& opt = {}) {
  return grid_injectivity(f, sample_grid(f, grid), grid, opt);
}

// --- sharpness probes ------------------------------------------------------

enum class Conjecture { cor1, cor2, cor3 };

inline const char* to_string(Conjecture c) {
  switch (c) {
    case Conjecture::cor1: return "cor1";
    case Conjecture::cor2: return "cor2";
    case Conjecture::cor3: return "cor3";
  }
  return "?";
}

struct ConjectureSpec {
  Conjecture kind = Conjecture::cor1;
  int n = 1;             // cor1: omega = lambda z^n
  double delta = 1.0;    // cor2
  double k = 3.0;        // cor2: h in V_K, K <= 4 - delta
  double alpha = 1.5;    // cor3

  static ConjectureSpec cor1(int n) { return {Conjecture::cor1, n, 1.0, 3.0, 1.5}; }
  static ConjectureSpec cor2(double delta, double k) { return {Conjecture::cor2, 1, delta, k, 1.5}; }
  static ConjectureSpec cor3(double alpha) { return {Conjecture::cor3, 1, 1.0, 3.0, alpha}; }

  /// Conjectured sharp constant for the dilatation scale.
  double conjectured_constant() const {
    switch (kind) {
      case Conjecture::cor1: return 1.0 / (n + 1);
      case Conjecture::cor2: return std::sin(delta * kPi / 4.0);
      case Conjecture::cor3: return std::sin((2.0 - alpha) * kPi / 2.0);
    }
    return 0.0;
  }

  std::string parameter_name() const { return kind == Conjecture::cor1 ? "lambda_modulus" : "dilatation_scale"; }

  void validate() const {
    switch (kind) {
      case Conjecture::cor1:
        if (n < 1) throw Error(ErrorCode::domain, "cor1 needs n >= 1");
        break;
      case Conjecture::cor2:
        if (!(delta >= 0.0 && delta <= 2.0)) throw Error(ErrorCode::domain, "cor2 needs delta in [0, 2]");
        if (!(k >= 2.0 && k <= 4.0 - delta + 1e-12)) throw Error(ErrorCode::domain, "cor2 needs 2 <= K <= 4 - delta");
        break;
      case Conjecture::cor3:
        if (!(alpha > 1.0 && alpha < 2.0)) throw Error(ErrorCode::domain, "cor3 needs alpha in (1, 2)");
        break;
    }
  }
};

struct ProbeOptions {
  int instances = 20;      // random class members besides the named candidate
  std::uint64_t seed = 42;
  int theta_count = 16;
  int steps = 20;
  int eps_count = 32;
  CheckGrid check{0.99, 2048};
  PolarGrid grid{};        // collision grid; radial_m = 0 disables the scan
  InjectivityOptions injectivity{};
  std::ostream* log = nullptr;  // JSON lines, one per trial
};

/// Named candidate (index 0) followed by seeded random class members.
inline std::vector<HarmonicMap> probe_instances(const ConjectureSpec& spec, int random_count, std::uint64_t seed) {
  spec.validate();
  std::vector<HarmonicMap> out;
  InstanceGenerator gen(seed);
  const Dilatation zero_scale =
      spec.kind == Conjecture::cor1 ? Dilatation::monomial({0.0, 0.0}, spec.n) : Dilatation::scaled_rotation(0.0, 0.0);
  auto add = [&](AnalyticMap h, std::string name) { out.emplace_back(std::move(h), zero_scale, std::nullopt, std::move(name)); };
  switch (spec.kind) {
    case Conjecture::cor1:
      add(h1_map(), "h1");
      for (int i = 0; i < random_count; ++i) add(AnalyticMap::from_derivative(gen.class_g()), "classG#" + std::to_string(i));
      break;
    case Conjecture::cor2:
      add(g_k_map(spec.k), "gK");
      for (int i = 0; i < random_count; ++i) add(AnalyticMap::from_derivative(gen.vk(spec.k)), "VK#" + std::to_string(i));
      break;
    case Conjecture::cor3:
      add(AnalyticMap::from_derivative(build_co_alpha(spec.alpha, {{UnitPoint(kPi), spec.alpha - 1.0}})), "CO1");
      for (int i = 0; i < random_count; ++i)
        add(AnalyticMap::from_derivative(gen.co_alpha(spec.alpha)), "COAlpha#" + std::to_string(i));
      break;
  }
  return out;
}

struct ProbeTrial {
  double s = 0.0;
  int instance = 0;
  double theta = 0.0;
  double lemma_a_margin = 0.0;
  bool scanned = false;
  bool collision = false;
  bool certified = false;
  bool pass = true;
};

struct ConjectureProbe {
  ConjectureSpec spec;
  std::string parameter_name;
  double conjectured = 0.0;
  double critical_estimate = 0.0;
  double pass_value = 0.0;
  double fail_value = 1.0;
  std::string method;
  int trials = 0;
  int failures = 0;
};

/// Precomputed per-instance data reused across every (s, theta).
class ProbeData {
 public:
  ProbeData(const ConjectureSpec& spec, const ProbeOptions& opt)
      : spec_(spec), opt_(opt), maps_(probe_instances(spec, opt.instances, opt.seed)) {
    jets_ = parallel_map(maps_.size(), [&](std::size_t i) { return circle_jets(maps_[i].h(), opt.check); });
    if (opt.grid.radial_m > 0)
      grids_ = parallel_map(maps_.size(), [&](std::size_t i) { return sample_grid(maps_[i], opt.grid); });
  }

  std::size_t size() const { return maps_.size(); }
  const HarmonicMap& map(std::size_t i) const { return maps_[i]; }

  HarmonicMap at_scale(std::size_t i, double s, double theta) const {
    return maps_[i].with_omega(maps_[i].omega().with_scale(s, theta));
  }

  ProbeTrial trial(std::size_t i, double s, double theta) const {
    ProbeTrial t{s, static_cast<int>(i), theta};
    const auto f = at_scale(i, s, theta);
    t.lemma_a_margin = lemma_a_from_jets(jets_[i], f.omega(), opt_.eps_count).margin;
    t.pass = t.lemma_a_margin > -kPassSlack;
    if (!grids_.empty()) {
      t.scanned = true;
      const auto rep = grid_injectivity(f, grids_[i], opt_.grid, opt_.injectivity);
      t.collision = rep.found;
      t.certified = rep.certified;
      if (rep.certified) t.pass = false;
    }
    return t;
  }

  /// All (instance, theta) trials at scale s, in a fixed order.
  std::vector<ProbeTrial> trials_at(double s) const {
    const std::size_t per = static_cast<std::size_t>(opt_.theta_count);
    return parallel_map(size() * per, [&](std::size_t w) {
      return trial(w / per, s, kTwoPi * static_cast<double>(w % per) / opt_.theta_count);
    });
  }

 private:
  ConjectureSpec spec_;
  ProbeOptions opt_;
  std::vector<HarmonicMap> maps_;
  std::vector<CircleJets> jets_;
  std::vector<SampledParts> grids_;
};

inline void write_trial_json(std::ostream& os, const ConjectureSpec& spec, const ProbeTrial& t) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "{\"conjecture\":\"%s\",\"s\":%.17g,\"instance\":%d,\"theta\":%.17g,\"lemma_a_margin\":%.17g,"
                "\"scanned\":%s,\"collision\":%s,\"certified\":%s,\"pass\":%s}\n",
                to_string(spec.kind), t.s, t.instance, t.theta, t.lemma_a_margin, t.scanned ? "true" : "false",
                t.collision ? "true" : "false", t.certified ? "true" : "false", t.pass ? "true" : "false");
  os << buf;
}

/// Bisection on the dilatation scale s in (0, 1]. A trial fails when the
/// sampled Lemma A margin is negative or a collision is certified.
inline ConjectureProbe conjecture_probe(const ConjectureSpec& spec, const ProbeOptions& opt = {}) {
  spec.validate();
  ProbeData data(spec, opt);
  ConjectureProbe res;
  res.spec = spec;
  res.parameter_name = spec.parameter_name();
  res.conjectured = spec.conjectured_constant();
  res.method = opt.grid.radial_m > 0 ? "bisection: lemma-A eps-sweep + grid collision certificate"
                                     : "bisection: lemma-A eps-sweep";
  double lo = 0.0, hi = 1.0;
  bool any_fail = false;
  for (int step = 0; step < opt.steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    const auto trials = data.trials_at(mid);
    bool ok = true;
    for (const auto& t : trials) {
      ++res.trials;
      if (!t.pass) ++res.failures, ok = false;
      if (opt.log) write_trial_json(*opt.log, spec, t);
    }
    if (ok) {
      lo = mid;
    } else {
      hi = mid;
      any_fail = true;
    }
  }
  res.pass_value = lo;
  res.fail_value = any_fail ? hi : 1.0;
  res.critical_estimate = 0.5 * (lo + hi);
  return res;
}

/// True iff every trial at the single scale s passes.
inline bool probe_passes_at(const ConjectureSpec& spec, double s, const ProbeOptions& opt = {}) {
  ProbeData data(spec, opt);
  for (const auto& t : data.trials_at(s))
    if (!t.pass) return false;
  return true;
}

}  // namespace harmap
