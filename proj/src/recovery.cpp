#include "glvr/recovery.hpp"

#include <cmath>
#include <numeric>

#include "glvr/adam.hpp"
#include "glvr/error.hpp"
#include "text.hpp"

namespace glvr {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite and > 0");
}

}  // namespace

ResampleCriterion ResampleCriterion::disabled() { return {Kind::disabled, 0.0, 0.0}; }

ResampleCriterion ResampleCriterion::hard(double cutoff) {
  require_positive(cutoff, "hard cutoff c");
  return {Kind::hard, cutoff, 0.0};
}

ResampleCriterion ResampleCriterion::logistic(double steepness, double midpoint) {
  require_positive(steepness, "logistic steepness a");
  if (!std::isfinite(midpoint)) throw ConfigError("logistic midpoint b must be finite");
  return {Kind::logistic, steepness, midpoint};
}

ResampleCriterion ResampleCriterion::trunc_normal(double cutoff) {
  require_positive(cutoff, "truncnorm cutoff a");
  return {Kind::trunc_normal, cutoff, 0.0};
}

ResampleCriterion ResampleCriterion::parse(std::string_view text) {
  if (text == "disabled") return disabled();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("malformed criterion '" + std::string(text) +
                      "' (expected disabled, hard:C, logistic:A,B or truncnorm:A)");
  }
  const auto name = text.substr(0, colon);
  const auto args = text.substr(colon + 1);
  auto number = [&](std::string_view s) {
    auto v = detail::parse_double(s);
    if (!v) throw ConfigError("malformed number '" + std::string(s) + "' in criterion '" + std::string(text) + "'");
    return *v;
  };
  if (name == "hard") return hard(number(args));
  if (name == "truncnorm") return trunc_normal(number(args));
  if (name == "logistic") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw ConfigError("logistic criterion needs two parameters: logistic:A,B");
    return logistic(number(args.substr(0, comma)), number(args.substr(comma + 1)));
  }
  throw ConfigError("unknown criterion '" + std::string(name) + "'");
}

double ResampleCriterion::probability(double z) const {
  const double mag = std::fabs(z);
  switch (kind_) {
    case Kind::disabled: return 0.0;
    case Kind::hard: return mag > a_ ? 1.0 : 0.0;
    case Kind::logistic: return 1.0 / (1.0 + std::exp(-a_ * (mag - b_)));
    case Kind::trunc_normal:
      // N(a) / N(z) = exp((z^2 - a^2) / 2) inside the cutoff.
      return mag <= a_ ? std::exp(0.5 * (mag * mag - a_ * a_)) : 1.0;
  }
  return 0.0;
}

std::string ResampleCriterion::name() const {
  switch (kind_) {
    case Kind::disabled: return "disabled";
    case Kind::hard: return "hard";
    case Kind::logistic: return "logistic";
    case Kind::trunc_normal: return "truncnorm";
  }
  return "unknown";
}

std::string ResampleCriterion::params() const {
  switch (kind_) {
    case Kind::disabled: return "";
    case Kind::logistic: return detail::shortest(a_) + "," + detail::shortest(b_);
    default: return detail::shortest(a_);
  }
}

std::string ResampleCriterion::to_string() const {
  return kind_ == Kind::disabled ? name() : name() + ":" + params();
}

std::string ResampleCriterion::label() const {
  switch (kind_) {
    case Kind::disabled: return "disabled";
    case Kind::hard: return "hard(" + detail::shortest(a_) + ")";
    case Kind::logistic: return "logistic(" + detail::shortest(a_) + ", " + detail::shortest(b_) + ")";
    case Kind::trunc_normal: return "trunc_norm(" + detail::shortest(a_) + ")";
  }
  return "unknown";
}

double per_step_prob(double p, double expected_iters) {
  if (!(expected_iters >= 1.0)) throw ConfigError("expected iterations E must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probability must lie in [0, 1]");
  if (p == 1.0) return 1.0;
  if (p == 0.0) return 0.0;
  return -std::expm1(std::log1p(-p) / expected_iters);
}

void RecoveryConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("recovery lr must be finite and > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("recovery adam betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw ConfigError("recovery adam eps must be > 0");
  if (expected_iterations && !(*expected_iterations >= 1.0)) {
    throw ConfigError("expected iterations must be >= 1");
  }
}

double RecoveryConfig::expected() const {
  if (expected_iterations) return *expected_iterations;
  return std::max<double>(1.0, static_cast<double>(iterations));
}

std::uint64_t RecoveryResult::total_resamples() const {
  return std::accumulate(resample_counts.begin(), resample_counts.end(), std::uint64_t{0});
}

RecoveryResult recover(std::span<const double> x, LayerStack generator,
                       const ResampleCriterion& criterion, const RecoveryConfig& cfg) {
  if (generator.empty()) throw ConfigError("generator has no layers");
  Rng rng(cfg.seed);
  std::vector<double> z0(generator.front().in_dim);
  for (auto& v : z0) v = rng.normal();
  return recover_from(x, generator, criterion, cfg, std::move(z0), rng);
}

RecoveryResult recover_from(std::span<const double> x, LayerStack generator,
                            const ResampleCriterion& criterion, const RecoveryConfig& cfg,
                            std::vector<double> z0, Rng& rng) {
  cfg.validate();
  if (generator.empty()) throw ConfigError("generator has no layers");
  if (z0.size() != generator.front().in_dim) {
    throw DimensionError("initial latent vs generator input", generator.front().in_dim, z0.size());
  }
  if (x.size() != generator.back().out_dim) {
    throw DimensionError("image vs generator output", generator.back().out_dim, x.size());
  }

  const std::size_t d = z0.size();
  const double expected = cfg.expected();

  RecoveryResult result;
  result.seed = cfg.seed;
  result.z = std::move(z0);
  result.resample_counts.assign(d, 0);
  if (cfg.record_trace) result.trace.reserve(cfg.iterations);

  AdamState adam(d, AdamHyper{cfg.lr, cfg.beta1, cfg.beta2, cfg.eps});
  std::vector<double> upstream(x.size());

  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    const auto trace = forward_trace(generator, result.z);
    const auto& out = trace.output();
    double loss = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double diff = out[j] - x[j];
      loss += diff * diff;
      upstream[j] = 2.0 * diff;
    }
    if (!std::isfinite(loss)) {
      throw NumericError("recovery loss is not finite at iteration " + std::to_string(t));
    }
    const auto grad = backward(generator, trace, upstream, false).input_grad;
    adam_update(adam, grad, result.z);

    std::size_t resampled = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const double thresh = rng.uniform();
      if (per_step_prob(criterion.probability(result.z[i]), expected) > thresh) {
        result.z[i] = rng.normal();
        ++result.resample_counts[i];
        ++resampled;
        if (cfg.reset_moments) adam.reset_coordinate(i);
      }
    }
    if (cfg.record_trace) result.trace.push_back({t, loss, resampled});
    if (cfg.on_progress && cfg.progress_every > 0 && t % cfg.progress_every == 0) {
      cfg.on_progress(TracePoint{t, loss, resampled});
    }
  }

  result.final_loss = l2_sq(x, net_forward(generator, result.z));
  if (!std::isfinite(result.final_loss)) throw NumericError("final recovery loss is not finite");
  return result;
}

double reconstruction_error(std::span<const double> z_true, std::span<const double> z_approx) {
  if (z_true.size() != z_approx.size()) throw DimensionError("reconstruction error operands", z_true.size(), z_approx.size());
  if (z_true.empty()) throw ConfigError("reconstruction error of empty vectors");
  return l2_sq(z_true, z_approx) / static_cast<double>(z_true.size());
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "iter,loss,resamples_this_iter\n";
  for (const auto& p : trace) {
    out += std::to_string(p.iter) + "," + detail::shortest(p.loss) + "," + std::to_string(p.resamples) + "\n";
  }
  return out;
}

}  // namespace glvr
