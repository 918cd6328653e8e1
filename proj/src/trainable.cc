// Copyright 2026 The mfpbt Authors.
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

#include "mfpbt/trainable.h"

#include <cmath>
#include <stdexcept>

namespace mfpbt {

double Trainable::Evaluate(int num_repeats, Rng& rng) const {
  if (num_repeats < 1) throw std::invalid_argument("num_repeats must be >= 1");
  double sum = 0.0;
  for (int k = 0; k < num_repeats; ++k) sum += EvaluateDraw(rng);
  return sum / num_repeats;
}

double TwoBasinObjective(double x) {
  const double d = x - 10.0;
  return std::exp(-0.5 * x * x) + 2.0 * std::exp(-0.5 * d * d);
}

double TwoBasinTrainStep(double x, double sigma, Rng& rng) {
  const double proposal = x + sigma * rng.Normal();
  return TwoBasinObjective(proposal) > TwoBasinObjective(x) ? proposal : x;
}

void QuadraticTrainStep(std::span<double> theta, std::span<const double> curvature,
                        double lr) {
  for (std::size_t k = 0; k < theta.size(); ++k) {
    theta[k] -= lr * curvature[k] * theta[k];
  }
}

double QuadraticLoss(std::span<const double> theta, std::span<const double> curvature) {
  double loss = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    loss += curvature[k] * theta[k] * theta[k];
  }
  return 0.5 * loss;
}

void SeedLotteryStep(SeedLotteryState& state, double step_noise, Rng& rng) {
  state.level += state.drift;
  if (step_noise > 0.0) state.level += step_noise * rng.Normal();
}

const char* TrainableKindName(const TrainableSpec& spec) {
  struct Visitor {
    const char* operator()(const TwoBasinParams&) const { return "two_basin"; }
    const char* operator()(const QuadraticParams&) const { return "quadratic_lr"; }
    const char* operator()(const SeedLotteryParams&) const { return "seed_lottery"; }
  };
  return std::visit(Visitor{}, spec);
}

namespace {

std::size_t RequireEntry(const HyperparamSpace& space, const char* name,
                         const char* trainable) {
  auto index = space.IndexOf(name);
  if (!index) {
    throw ConfigError("search_space", std::string(trainable) +
                                          " requires a hyperparameter named '" +
                                          name + "'");
  }
  return *index;
}

void RequireSize(const Payload& payload, std::size_t size, const char* trainable) {
  if (payload.size() != size) {
    throw std::invalid_argument(std::string(trainable) + ": payload has " +
                                std::to_string(payload.size()) +
                                " values, expected " + std::to_string(size));
  }
}

}  // namespace

TwoBasinTrainable::TwoBasinTrainable(const HyperparamSpace& space,
                                     TwoBasinParams params)
    : sigma_index_(RequireEntry(space, "sigma", "two_basin")), params_(params) {}

void TwoBasinTrainable::Init(Rng& /*init_rng*/, const HyperparamVector& hyperparams) {
  x_ = params_.x0;
  SetHyperparams(hyperparams);
}

void TwoBasinTrainable::Train(int num_steps, Rng& rng) {
  const double s = sigma();
  for (int step = 0; step < num_steps; ++step) {
    x_ = TwoBasinTrainStep(x_, s, rng);
    if (params_.forget_prob > 0.0 && rng.Uniform() < params_.forget_prob) {
      x_ += params_.forget_scale * rng.Normal();
    }
  }
}

double TwoBasinTrainable::EvaluateDraw(Rng& rng) const {
  if (params_.eval_noise == 0.0) return TwoBasinObjective(x_);
  return TwoBasinObjective(x_ + params_.eval_noise * sigma() * rng.Normal());
}

void TwoBasinTrainable::ImportPayload(const Payload& payload) {
  RequireSize(payload, 1, "two_basin");
  x_ = payload[0];
}

QuadraticLrTrainable::QuadraticLrTrainable(const HyperparamSpace& space,
                                           QuadraticParams params)
    : lr_index_(RequireEntry(space, "lr", "quadratic_lr")), params_(std::move(params)) {
  if (params_.curvature.empty() ||
      params_.curvature.size() != params_.theta0.size()) {
    throw ConfigError("trainable", "curvature and theta0 must be non-empty and aligned");
  }
  for (double a : params_.curvature) {
    if (!(a > 0.0)) throw ConfigError("trainable", "curvature must be positive");
  }
}

void QuadraticLrTrainable::Init(Rng& /*init_rng*/, const HyperparamVector& hyperparams) {
  theta_ = params_.theta0;
  SetHyperparams(hyperparams);
}

void QuadraticLrTrainable::Train(int num_steps, Rng& /*rng*/) {
  const double lr = hyperparams_[lr_index_];
  for (int step = 0; step < num_steps; ++step) {
    QuadraticTrainStep(theta_, params_.curvature, lr);
  }
}

double QuadraticLrTrainable::EvaluateDraw(Rng& /*rng*/) const { return -loss(); }

void QuadraticLrTrainable::ImportPayload(const Payload& payload) {
  RequireSize(payload, params_.curvature.size(), "quadratic_lr");
  theta_ = payload;
}

SeedLotteryTrainable::SeedLotteryTrainable(SeedLotteryParams params) : params_(params) {
  if (!(params_.drift_median > 0.0) || params_.drift_log_sigma < 0.0 ||
      params_.step_noise < 0.0) {
    throw ConfigError("trainable", "seed_lottery parameters out of range");
  }
}

void SeedLotteryTrainable::Init(Rng& init_rng, const HyperparamVector& hyperparams) {
  state_.level = 0.0;
  state_.drift =
      params_.drift_median * std::exp(params_.drift_log_sigma * init_rng.Normal());
  SetHyperparams(hyperparams);
}

void SeedLotteryTrainable::Train(int num_steps, Rng& rng) {
  for (int step = 0; step < num_steps; ++step) {
    SeedLotteryStep(state_, params_.step_noise, rng);
  }
}

double SeedLotteryTrainable::EvaluateDraw(Rng& /*rng*/) const {
  return SeedLotteryEval(state_);
}

void SeedLotteryTrainable::ImportPayload(const Payload& payload) {
  RequireSize(payload, 2, "seed_lottery");
  state_.level = payload[0];
  state_.drift = payload[1];
}

std::unique_ptr<Trainable> MakeTrainable(const TrainableSpec& spec,
                                         const HyperparamSpace& space) {
  struct Visitor {
    const HyperparamSpace& space;
    std::unique_ptr<Trainable> operator()(const TwoBasinParams& p) const {
      return std::make_unique<TwoBasinTrainable>(space, p);
    }
    std::unique_ptr<Trainable> operator()(const QuadraticParams& p) const {
      return std::make_unique<QuadraticLrTrainable>(space, p);
    }
    std::unique_ptr<Trainable> operator()(const SeedLotteryParams& p) const {
      return std::make_unique<SeedLotteryTrainable>(p);
    }
  };
  return std::visit(Visitor{space}, spec);
}

}  // namespace mfpbt
