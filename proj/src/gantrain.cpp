#include "glvr/gantrain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glvr/error.hpp"
#include "text.hpp"

namespace glvr {

void LabelScheme::validate() const {
  if (!(real.lo <= real.hi) || !(fake.lo <= fake.hi)) throw ConfigError("label range has lo > hi");
  if (!(real.lo > fake.hi)) throw ConfigError("real label range must lie above the fake range");
}

double LabelScheme::draw_real(Rng& rng) const {
  return variant == Variant::hard ? 1.0 : rng.uniform(real.lo, real.hi);
}

double LabelScheme::draw_fake(Rng& rng) const {
  return variant == Variant::hard ? 0.0 : rng.uniform(fake.lo, fake.hi);
}

std::vector<double> sample_prior(Rng& rng, std::size_t d) {
  if (d == 0) throw ConfigError("prior dimension must be at least 1");
  std::vector<double> z(d);
  for (auto& v : z) v = rng.normal();
  return z;
}

double optimal_discriminator(double p_data, double p_g) {
  if (!(p_data >= 0.0) || !(p_g >= 0.0)) throw ConfigError("densities must be non-negative");
  if (p_data == 0.0 && p_g == 0.0) throw ConfigError("optimal discriminator undefined where both densities vanish");
  return p_data / (p_data + p_g);
}

double bce_with_target(double output, double target, double& d_output) {
  const double y = std::clamp(output, kLogClamp, 1.0 - kLogClamp);
  const bool clamped = y != output;
  d_output = clamped ? 0.0 : -(target / y - (1.0 - target) / (1.0 - y));
  return -(target * std::log(y) + (1.0 - target) * std::log(1.0 - y));
}

namespace {

void require_finite(double loss, const char* what) {
  if (!std::isfinite(loss)) throw NumericError(std::string(what) + " loss is not finite");
}

void apply_adam(Network& net, AdamState& adam, const std::vector<LayerGrad>& grads) {
  auto params = net.flat_params();
  adam_update(adam, flatten(grads), params);
  net.set_flat_params(params);
}

}  // namespace

double discriminator_step(Network& disc, const Network& gen, const Tensor& real_batch, Rng& rng,
                          const LabelScheme& labels, AdamState& adam) {
  if (real_batch.rank() != 2 || real_batch.dim(0) == 0) throw ConfigError("discriminator step needs a non-empty batch");
  if (real_batch.dim(1) != disc.in_dim()) throw DimensionError("real batch width", disc.in_dim(), real_batch.dim(1));
  if (gen.out_dim() != disc.in_dim()) throw DimensionError("generator output vs discriminator input", disc.in_dim(), gen.out_dim());
  const std::size_t m = real_batch.dim(0);
  const double scale = 1.0 / static_cast<double>(m);

  auto grads = zero_grads(disc.layers);
  double total = 0.0;
  std::vector<double> upstream(1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto z = sample_prior(rng, gen.in_dim());
    const double real_target = labels.draw_real(rng);
    const double fake_target = labels.draw_fake(rng);

    const auto real_trace = forward_trace(disc.layers, real_batch.row(i));
    total += bce_with_target(real_trace.output()[0], real_target, upstream[0]);
    accumulate(grads, backward(disc.layers, real_trace, upstream, true).params, scale);

    const auto fake = gen.forward(z);
    const auto fake_trace = forward_trace(disc.layers, fake);
    total += bce_with_target(fake_trace.output()[0], fake_target, upstream[0]);
    accumulate(grads, backward(disc.layers, fake_trace, upstream, true).params, scale);
  }
  const double loss = total * scale;
  require_finite(loss, "discriminator");
  apply_adam(disc, adam, grads);
  return loss;
}

double generator_step(Network& gen, const Network& disc, std::size_t batch_size, Rng& rng,
                      GeneratorLoss mode, AdamState& adam) {
  if (batch_size == 0) throw ConfigError("generator step needs batch size >= 1");
  if (gen.out_dim() != disc.in_dim()) throw DimensionError("generator output vs discriminator input", disc.in_dim(), gen.out_dim());
  const double scale = 1.0 / static_cast<double>(batch_size);

  auto grads = zero_grads(gen.layers);
  double total = 0.0;
  std::vector<double> upstream(1);
  for (std::size_t i = 0; i < batch_size; ++i) {
    const auto z = sample_prior(rng, gen.in_dim());
    const auto gen_trace = forward_trace(gen.layers, z);
    const auto disc_trace = forward_trace(disc.layers, gen_trace.output());
    const double out = disc_trace.output()[0];
    const double y = std::clamp(out, kLogClamp, 1.0 - kLogClamp);
    const bool clamped = y != out;
    if (mode == GeneratorLoss::saturating) {
      total += std::log(1.0 - y);
      upstream[0] = clamped ? 0.0 : -1.0 / (1.0 - y);
    } else {
      total -= std::log(y);
      upstream[0] = clamped ? 0.0 : -1.0 / y;
    }
    const auto through_disc = backward(disc.layers, disc_trace, upstream, false).input_grad;
    accumulate(grads, backward(gen.layers, gen_trace, through_disc, true).params, scale);
  }
  const double loss = total * scale;
  require_finite(loss, "generator");
  apply_adam(gen, adam, grads);
  return loss;
}

void TrainConfig::validate() const {
  if (latent_dim == 0) throw ConfigError("latent_dim must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (d_steps == 0) throw ConfigError("d_steps must be positive");
  if (!(adam.lr >= 0.0) || !std::isfinite(adam.lr)) throw ConfigError("lr must be finite and >= 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  labels.validate();
}

TrainResult train(const TrainConfig& config, const TrainProgress& progress) {
  config.validate();
  const SyntheticDataset dataset(config.dataset);
  const std::size_t data_dim = dataset.sample_dim();

  auto gen_dims = config.generator_dims;
  if (gen_dims.empty()) gen_dims = {config.latent_dim, 64, 128, data_dim};
  auto disc_dims = config.discriminator_dims;
  if (disc_dims.empty()) disc_dims = {data_dim, 128, 64, 1};
  if (gen_dims.front() != config.latent_dim) throw DimensionError("generator input vs latent_dim", config.latent_dim, gen_dims.front());
  if (gen_dims.back() != data_dim) throw DimensionError("generator output vs dataset", data_dim, gen_dims.back());
  if (disc_dims.front() != data_dim) throw DimensionError("discriminator input vs dataset", data_dim, disc_dims.front());

  auto gen_spec = NetSpec::generator(gen_dims);
  gen_spec.output_activation =
      config.generator_output.value_or(dataset.bounded() ? Activation::tanh : Activation::identity);
  const auto disc_spec = NetSpec::discriminator(disc_dims);

  Rng rng(config.seed);
  TrainResult result;
  result.generator = init_net(gen_spec, rng);
  result.discriminator = init_net(disc_spec, rng);
  result.generator.seed = config.seed;
  result.discriminator.seed = config.seed;

  AdamState gen_adam(result.generator.parameter_count(), config.adam);
  AdamState disc_adam(result.discriminator.parameter_count(), config.adam);

  result.history.reserve(config.steps);
  for (std::size_t step = 1; step <= config.steps; ++step) {
    LossRecord record{step, 0.0, 0.0};
    try {
      for (std::size_t k = 0; k < config.d_steps; ++k) {
        const auto real = dataset.batch(rng, config.batch_size);
        record.d_loss += discriminator_step(result.discriminator, result.generator, real, rng,
                                            config.labels, disc_adam);
      }
      record.d_loss /= static_cast<double>(config.d_steps);
      record.g_loss = generator_step(result.generator, result.discriminator, config.batch_size, rng,
                                     config.generator_loss, gen_adam);
    } catch (const NumericError& e) {
      throw NumericError("training diverged at step " + std::to_string(step) + ": " + e.what());
    }
    result.history.push_back(record);
    if (progress) progress(record);
  }
  result.generator.step = config.steps;
  result.discriminator.step = config.steps;
  return result;
}

std::string loss_history_csv(const std::vector<LossRecord>& history) {
  std::string out = "step,d_loss,g_loss\n";
  for (const auto& r : history) {
    out += std::to_string(r.step);
    out += ',';
    out += detail::shortest(r.d_loss);
    out += ',';
    out += detail::shortest(r.g_loss);
    out += '\n';
  }
  return out;
}

}  // namespace glvr
