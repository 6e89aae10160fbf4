// Copyright (c) 2026 The rsapa Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rsapa/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "rsapa/errors.hpp"
#include "rsapa/kernels.hpp"
#include "rsapa/objective.hpp"

namespace rsapa {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

// Gains transposed: column i holds h_i . p_q for q = 0 (common), 1..M.
CMatrix gains_transposed(const CMatrix& rows, const PrecoderSet& p) {
  return kernels::products(p.stacked(), rows.transpose());
}

struct GainView {
  const CMatrix& gt;
  const CMatrix* numerator_gt;
  const RVector& weights;  // a_i^2, common first
  double noise_var;
};

double common_sinr_at(int row, const GainView& v) {
  const double ac2 = v.weights(0);
  if (ac2 == 0.0) return 0.0;
  const cplx* col = v.gt.col(row).data();
  const double interference = kernels::active().weighted_power(col + 1, v.weights.data() + 1,
                                                               static_cast<std::size_t>(v.weights.size() - 1));
  const cplx desired = v.numerator_gt ? (*v.numerator_gt)(0, row) : col[0];
  return ac2 * std::norm(desired) / (interference + v.noise_var);
}

double private_sinr_at(int stream, const GainView& v) {
  const double ak2 = v.weights(stream + 1);
  if (ak2 == 0.0) return 0.0;
  const cplx* col = v.gt.col(stream).data();
  const double all = kernels::active().weighted_power(col + 1, v.weights.data() + 1,
                                                      static_cast<std::size_t>(v.weights.size() - 1));
  const double own = ak2 * std::norm(col[stream + 1]);
  const double interference = std::max(0.0, all - own);
  const cplx desired = v.numerator_gt ? (*v.numerator_gt)(stream + 1, stream) : col[stream + 1];
  return ak2 * std::norm(desired) / (interference + v.noise_var);
}

void check_inputs(const SinrInputs& in) {
  const int m = in.layout.streams();
  if (in.channel_rows.rows() != m || in.precoders.streams() != m || in.power.streams() != m ||
      in.channel_rows.cols() != in.precoders.n_tx()) {
    throw DomainError("sinr: dimension mismatch between channel rows, precoders, power and layout");
  }
  if (in.numerator_rows && (in.numerator_rows->rows() != m || in.numerator_rows->cols() != in.channel_rows.cols())) {
    throw DomainError("sinr: numerator channel has the wrong shape");
  }
}

InstantRates rates_from_gains(const StreamLayout& layout, const GainView& v) {
  InstantRates r;
  r.common_per_user.resize(layout.users());
  r.private_per_stream.resize(layout.streams());
  for (int k = 0; k < layout.users(); ++k) {
    r.common_per_user(k) = std::log2(1.0 + common_sinr_at(layout.user_first_stream[static_cast<std::size_t>(k)], v));
  }
  for (int j = 0; j < layout.streams(); ++j) r.private_per_stream(j) = std::log2(1.0 + private_sinr_at(j, v));
  return r;
}

// Runs body(i) for i in [0, n) on up to `jobs` threads. Results must be written
// to index-addressed slots; the first exception is rethrown.
template <typename Body>
void parallel_for(int n, int jobs, Body&& body) {
  const int workers = std::max(1, std::min(jobs, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct SchemeDraw {
  bool ok = false;
  RVector common;   // per user, inner mean
  RVector priv;     // per stream, inner mean
  double ac_fraction = 0.0;
  double conditional_mse = 0.0;
  std::vector<PowerVector> trajectory;  // convergence traces only
};

struct ChannelContext {
  CMatrix estimate_rows;
  PrecoderSet precoders;
  CouplingTable ct;
};

ChannelContext prepare_channel(const SystemConfig& cfg, const StreamLayout& layout, PrecoderKind kind,
                               std::uint64_t trial) {
  ChannelContext ctx;
  ctx.estimate_rows = stream_rows(draw_estimate(cfg, trial), layout);
  ctx.precoders = make_precoders(kind, ctx.estimate_rows, cfg.noise_var, cfg.total_power);
  ctx.ct = build_coupling(ctx.estimate_rows, ctx.precoders, ChannelSource::estimate);
  return ctx;
}

// Transmitter-side score of a candidate allocation: average sum rate over
// CSIT-error draws the transmitter generates itself, min over users applied to
// the averaged common rate.
class SearchScorer {
 public:
  SearchScorer(const SystemConfig& cfg, const StreamLayout& layout, const ChannelContext& ctx, std::uint64_t trial,
               int draws)
      : layout_(layout), noise_var_(cfg.noise_var) {
    const int n = std::max(1, draws);
    const bool noisy = cfg.err_var > 0.0;
    for (int s = 0; s < (noisy ? n : 1); ++s) {
      CMatrix rows = ctx.estimate_rows;
      if (noisy) rows += stream_rows(draw_error(cfg, trial, static_cast<std::uint64_t>(s), Stream::search), layout);
      gains_.push_back(gains_transposed(rows, ctx.precoders));
    }
  }

  double operator()(const PowerVector& a) const {
    const RVector w = a.coeffs.cwiseAbs2();
    RVector common = RVector::Zero(layout_.users());
    double priv = 0.0;
    for (const CMatrix& gt : gains_) {
      const InstantRates r = rates_from_gains(layout_, GainView{gt, nullptr, w, noise_var_});
      common += r.common_per_user;
      priv += r.private_per_stream.sum();
    }
    const double n = static_cast<double>(gains_.size());
    return common.minCoeff() / n + priv / n;
  }

 private:
  const StreamLayout& layout_;
  double noise_var_;
  std::vector<CMatrix> gains_;
};

AllocatorOptions allocator_options(const SystemConfig& cfg, const Scheme& s) {
  AllocatorOptions o;
  o.step_size = s.step_size;
  o.iterations = s.iterations;
  o.total_power = cfg.total_power;
  return o;
}

std::vector<PowerVector> allocate(const SystemConfig& cfg, const StreamLayout& layout, const ChannelContext& ctx,
                                  const Scheme& s, std::uint64_t trial,
                                  const SearchScorer* scorer, bool keep_trajectory) {
  const int m = layout.streams();
  const std::uint64_t alloc_seed = derive_seed(cfg.master_seed, Stream::allocation, trial);
  switch (s.kind) {
    case SchemeKind::conventional_upa:
      return {uniform_allocation(m, cfg.total_power, 0.0)};
    case SchemeKind::conventional_random: {
      PowerVector a = random_allocation(m, cfg.total_power, alloc_seed);
      a.common() = 0.0;
      scale_to_power(a, cfg.total_power);
      return {a};
    }
    case SchemeKind::rs_random:
      return {random_allocation(m, cfg.total_power, alloc_seed)};
    case SchemeKind::rs_es_upa:
    case SchemeKind::rs_es_random: {
      const PrivateRule rule = s.kind == SchemeKind::rs_es_upa ? PrivateRule::uniform : PrivateRule::random;
      return {grid_search_delta(m, cfg.total_power, rule, s.grid_step, std::cref(*scorer), Goal::maximize, alloc_seed)
                  .coeffs};
    }
    case SchemeKind::rs_es_full:
      return {grid_search_full(std::cref(*scorer), m, s.full_grid_step, cfg.total_power, Goal::maximize).coeffs};
    case SchemeKind::rs_apa:
    case SchemeKind::rs_apar: {
      const AllocatorOptions o = allocator_options(cfg, s);
      AllocatorRun run = s.kind == SchemeKind::rs_apa ? run_apa(ctx.ct, cfg.noise_var, o)
                                                      : run_apar(ctx.ct, cfg.err_var, cfg.noise_var, o);
      if (keep_trajectory) return std::move(run.trajectory);
      return {run.final()};
    }
  }
  throw DomainError("allocate: unknown scheme");
}

bool needs_scorer(SchemeKind k) {
  return k == SchemeKind::rs_es_upa || k == SchemeKind::rs_es_random || k == SchemeKind::rs_es_full;
}

void validate_eval(const SystemConfig& cfg, const EvaluationOptions& opts) {
  cfg.validate();
  if (opts.n_channels < 1 || opts.n_errors < 1) throw ConfigError("evaluation needs at least one channel and one error draw");
  if (opts.search_draws < 1) throw ConfigError("search_draws must be at least 1");
  if (opts.jobs < 1) throw ConfigError("jobs must be at least 1");
}

// Inner loop shared by evaluation and convergence traces: every allocation in
// `allocs` is scored on the same true-channel draws.
void inner_average(const SystemConfig& cfg, const StreamLayout& layout, const ChannelContext& ctx,
                   std::uint64_t trial, const EvaluationOptions& opts, const std::vector<const PowerVector*>& allocs,
                   std::vector<RVector>& common, std::vector<RVector>& priv) {
  const std::size_t n_alloc = allocs.size();
  std::vector<RVector> weights(n_alloc);
  std::vector<std::vector<CompensatedSum>> c_sum(n_alloc), p_sum(n_alloc);
  for (std::size_t s = 0; s < n_alloc; ++s) {
    weights[s] = allocs[s]->coeffs.cwiseAbs2();
    c_sum[s].resize(static_cast<std::size_t>(layout.users()));
    p_sum[s].resize(static_cast<std::size_t>(layout.streams()));
  }
  const CMatrix est_gt = opts.literal_numerator ? gains_transposed(ctx.estimate_rows, ctx.precoders) : CMatrix();
  for (int e = 0; e < opts.n_errors; ++e) {
    const CMatrix true_rows =
        ctx.estimate_rows + stream_rows(draw_error(cfg, trial, static_cast<std::uint64_t>(e)), layout);
    const CMatrix gt = gains_transposed(true_rows, ctx.precoders);
    for (std::size_t s = 0; s < n_alloc; ++s) {
      const InstantRates r = rates_from_gains(
          layout, GainView{gt, opts.literal_numerator ? &est_gt : nullptr, weights[s], cfg.noise_var});
      for (int k = 0; k < layout.users(); ++k) c_sum[s][static_cast<std::size_t>(k)].add(r.common_per_user(k));
      for (int j = 0; j < layout.streams(); ++j) p_sum[s][static_cast<std::size_t>(j)].add(r.private_per_stream(j));
    }
  }
  common.assign(n_alloc, RVector());
  priv.assign(n_alloc, RVector());
  for (std::size_t s = 0; s < n_alloc; ++s) {
    common[s].resize(layout.users());
    priv[s].resize(layout.streams());
    for (int k = 0; k < layout.users(); ++k) common[s](k) = c_sum[s][static_cast<std::size_t>(k)].value() / opts.n_errors;
    for (int j = 0; j < layout.streams(); ++j) priv[s](j) = p_sum[s][static_cast<std::size_t>(j)].value() / opts.n_errors;
  }
}

}  // namespace

double sinr_common(int user, const SinrInputs& in) {
  check_inputs(in);
  if (user < 0 || user >= in.layout.users()) throw DomainError("sinr_common: user index out of range");
  const RVector w = in.power.coeffs.cwiseAbs2();
  const CMatrix gt = gains_transposed(in.channel_rows, in.precoders);
  const CMatrix num = in.numerator_rows ? gains_transposed(*in.numerator_rows, in.precoders) : CMatrix();
  return common_sinr_at(in.layout.user_first_stream[static_cast<std::size_t>(user)],
                        GainView{gt, in.numerator_rows ? &num : nullptr, w, in.noise_var});
}

double sinr_private(int stream, const SinrInputs& in) {
  check_inputs(in);
  if (stream < 0 || stream >= in.layout.streams()) throw DomainError("sinr_private: stream index out of range");
  const RVector w = in.power.coeffs.cwiseAbs2();
  const CMatrix gt = gains_transposed(in.channel_rows, in.precoders);
  const CMatrix num = in.numerator_rows ? gains_transposed(*in.numerator_rows, in.precoders) : CMatrix();
  return private_sinr_at(stream, GainView{gt, in.numerator_rows ? &num : nullptr, w, in.noise_var});
}

InstantRates instantaneous_rates(const SinrInputs& in) {
  check_inputs(in);
  const RVector w = in.power.coeffs.cwiseAbs2();
  const CMatrix gt = gains_transposed(in.channel_rows, in.precoders);
  const CMatrix num = in.numerator_rows ? gains_transposed(*in.numerator_rows, in.precoders) : CMatrix();
  return rates_from_gains(in.layout, GainView{gt, in.numerator_rows ? &num : nullptr, w, in.noise_var});
}

std::string_view scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::conventional_upa: return "conventional-upa";
    case SchemeKind::conventional_random: return "conventional-random";
    case SchemeKind::rs_random: return "rs-random";
    case SchemeKind::rs_es_upa: return "rs-es-upa";
    case SchemeKind::rs_es_random: return "rs-es-random";
    case SchemeKind::rs_es_full: return "rs-es-full";
    case SchemeKind::rs_apa: return "rs-apa";
    case SchemeKind::rs_apar: return "rs-apa-r";
  }
  return "unknown";
}

Scheme make_scheme(std::string_view name) {
  static constexpr SchemeKind kAll[] = {SchemeKind::conventional_upa, SchemeKind::conventional_random,
                                        SchemeKind::rs_random,        SchemeKind::rs_es_upa,
                                        SchemeKind::rs_es_random,     SchemeKind::rs_es_full,
                                        SchemeKind::rs_apa,           SchemeKind::rs_apar};
  for (const SchemeKind k : kAll) {
    if (scheme_name(k) == name) {
      Scheme s;
      s.kind = k;
      s.label = std::string(name);
      return s;
    }
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

bool is_adaptive(SchemeKind kind) { return kind == SchemeKind::rs_apa || kind == SchemeKind::rs_apar; }

std::vector<RateReport> evaluate_schemes(const SystemConfig& cfg, PrecoderKind kind, const std::vector<Scheme>& schemes,
                                         const EvaluationOptions& opts) {
  validate_eval(cfg, opts);
  if (schemes.empty()) throw ConfigError("evaluate_schemes: no schemes given");
  const StreamLayout layout = stream_layout(cfg);
  const std::size_t n_s = schemes.size();
  bool any_search = false;
  for (const Scheme& s : schemes) any_search = any_search || needs_scorer(s.kind);

  std::vector<std::vector<SchemeDraw>> draws(static_cast<std::size_t>(opts.n_channels), std::vector<SchemeDraw>(n_s));

  parallel_for(opts.n_channels, opts.jobs, [&](int t) {
    const auto trial = static_cast<std::uint64_t>(t);
    auto& slot = draws[static_cast<std::size_t>(t)];
    ChannelContext ctx;
    try {
      ctx = prepare_channel(cfg, layout, kind, trial);
    } catch (const NumericalError&) {
      return;
    }
    std::optional<SearchScorer> scorer;
    if (any_search) scorer.emplace(cfg, layout, ctx, trial, opts.search_draws);

    std::vector<PowerVector> chosen(n_s);
    std::vector<const PowerVector*> ok_allocs;
    std::vector<std::size_t> ok_index;
    for (std::size_t s = 0; s < n_s; ++s) {
      try {
        chosen[s] = allocate(cfg, layout, ctx, schemes[s], trial, scorer ? &*scorer : nullptr, false).back();
      } catch (const NumericalError&) {
        continue;
      }
      ok_allocs.push_back(&chosen[s]);
      ok_index.push_back(s);
    }
    std::vector<RVector> common, priv;
    inner_average(cfg, layout, ctx, trial, opts, ok_allocs, common, priv);
    for (std::size_t i = 0; i < ok_index.size(); ++i) {
      SchemeDraw& d = slot[ok_index[i]];
      d.ok = true;
      d.common = std::move(common[i]);
      d.priv = std::move(priv[i]);
      d.ac_fraction = ok_allocs[i]->common_fraction();
      d.conditional_mse = mse_apar(*ok_allocs[i], ctx.ct, cfg.err_var, cfg.noise_var);
    }
  });

  std::vector<RateReport> reports(n_s);
  for (std::size_t s = 0; s < n_s; ++s) {
    RateReport& r = reports[s];
    r.label = schemes[s].label.empty() ? std::string(scheme_name(schemes[s].kind)) : schemes[s].label;
    std::vector<CompensatedSum> c(static_cast<std::size_t>(layout.users())), p(static_cast<std::size_t>(layout.streams()));
    CompensatedSum frac, mse;
    int ok = 0;
    for (int t = 0; t < opts.n_channels; ++t) {
      const SchemeDraw& d = draws[static_cast<std::size_t>(t)][s];
      if (!d.ok) {
        ++r.failed_draws;
        continue;
      }
      ++ok;
      for (int k = 0; k < layout.users(); ++k) c[static_cast<std::size_t>(k)].add(d.common(k));
      for (int j = 0; j < layout.streams(); ++j) p[static_cast<std::size_t>(j)].add(d.priv(j));
      frac.add(d.ac_fraction);
      mse.add(d.conditional_mse);
    }
    r.n_channel_draws = ok;
    r.n_error_draws = opts.n_errors;
    r.avg_common = RVector::Zero(layout.users());
    r.avg_private = RVector::Zero(layout.streams());
    if (ok == 0) continue;
    for (int k = 0; k < layout.users(); ++k) r.avg_common(k) = c[static_cast<std::size_t>(k)].value() / ok;
    for (int j = 0; j < layout.streams(); ++j) r.avg_private(j) = p[static_cast<std::size_t>(j)].value() / ok;
    r.common_term = r.avg_common.minCoeff();
    CompensatedSum ps;
    for (int j = 0; j < layout.streams(); ++j) ps.add(r.avg_private(j));
    r.private_sum = ps.value();
    r.ergodic_sum_rate = r.common_term + r.private_sum;
    r.ac_sq_fraction = frac.value() / ok;
    r.mean_conditional_mse = mse.value() / ok;
  }
  return reports;
}

RateReport ergodic_sum_rate(const SystemConfig& cfg, PrecoderKind kind, const Scheme& scheme, int n_channels,
                            int n_errors, std::uint64_t seed, int jobs) {
  SystemConfig c = cfg;
  c.master_seed = seed;
  EvaluationOptions o;
  o.n_channels = n_channels;
  o.n_errors = n_errors;
  o.jobs = jobs;
  return evaluate_schemes(c, kind, {scheme}, o).front();
}

std::vector<ConvergencePoint> convergence_trace(const SystemConfig& cfg, PrecoderKind kind, const Scheme& scheme,
                                                const EvaluationOptions& opts) {
  validate_eval(cfg, opts);
  if (!is_adaptive(scheme.kind)) throw ConfigError("convergence traces need an adaptive scheme");
  if (scheme.iterations < 1) throw ConfigError("iterations must be at least 1");
  const StreamLayout layout = stream_layout(cfg);
  const auto n_it = static_cast<std::size_t>(scheme.iterations);

  struct TraceDraw {
    bool ok = false;
    std::vector<RVector> common, priv;
    std::vector<double> objective, fraction;
  };
  std::vector<TraceDraw> draws(static_cast<std::size_t>(opts.n_channels));

  parallel_for(opts.n_channels, opts.jobs, [&](int t) {
    const auto trial = static_cast<std::uint64_t>(t);
    TraceDraw& d = draws[static_cast<std::size_t>(t)];
    std::vector<PowerVector> traj;
    ChannelContext ctx;
    try {
      ctx = prepare_channel(cfg, layout, kind, trial);
      traj = allocate(cfg, layout, ctx, scheme, trial, nullptr, true);
    } catch (const NumericalError&) {
      return;
    }
    std::vector<const PowerVector*> ptrs;
    for (const auto& a : traj) {
      ptrs.push_back(&a);
      const double ev = scheme.kind == SchemeKind::rs_apar ? cfg.err_var : 0.0;
      d.objective.push_back(mse_apar(a, ctx.ct, ev, cfg.noise_var));
      d.fraction.push_back(a.common_fraction());
    }
    inner_average(cfg, layout, ctx, trial, opts, ptrs, d.common, d.priv);
    d.ok = true;
  });

  std::vector<ConvergencePoint> out(n_it);
  for (std::size_t n = 0; n < n_it; ++n) {
    std::vector<CompensatedSum> c(static_cast<std::size_t>(layout.users())), p(static_cast<std::size_t>(layout.streams()));
    CompensatedSum obj, frac;
    int ok = 0;
    for (const TraceDraw& d : draws) {
      if (!d.ok) continue;
      ++ok;
      for (int k = 0; k < layout.users(); ++k) c[static_cast<std::size_t>(k)].add(d.common[n](k));
      for (int j = 0; j < layout.streams(); ++j) p[static_cast<std::size_t>(j)].add(d.priv[n](j));
      obj.add(d.objective[n]);
      frac.add(d.fraction[n]);
    }
    ConvergencePoint& pt = out[n];
    pt.iteration = static_cast<int>(n) + 1;
    if (ok == 0) continue;
    double common_min = std::numeric_limits<double>::infinity();
    for (auto& s : c) common_min = std::min(common_min, s.value() / ok);
    CompensatedSum ps;
    for (auto& s : p) ps.add(s.value() / ok);
    pt.esr = common_min + ps.value();
    pt.mean_objective = obj.value() / ok;
    pt.ac_sq_fraction = frac.value() / ok;
  }
  return out;
}

}  // namespace rsapa
