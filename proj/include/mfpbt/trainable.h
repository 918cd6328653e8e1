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

#ifndef MFPBT_TRAINABLE_H_
#define MFPBT_TRAINABLE_H_

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "mfpbt/core.h"
#include "mfpbt/random.h"

namespace mfpbt {

// Contract driven by every scheduler. A trainable's observable state is fully
// described by its payload and hyperparameters; randomness is supplied by the
// caller so that moving a payload between agents never moves a stream.
class Trainable {
 public:
  virtual ~Trainable() = default;

  virtual void Init(Rng& init_rng, const HyperparamVector& hyperparams) = 0;
  virtual void Train(int num_steps, Rng& rng) = 0;

  // One independent evaluation draw. Must not modify training state.
  virtual double EvaluateDraw(Rng& rng) const = 0;

  // Mean of `num_repeats` draws, accumulated in draw order.
  double Evaluate(int num_repeats, Rng& rng) const;

  virtual Payload ExportPayload() const = 0;
  virtual void ImportPayload(const Payload& payload) = 0;

  virtual void SetHyperparams(const HyperparamVector& hyperparams) {
    hyperparams_ = hyperparams;
  }
  const HyperparamVector& GetHyperparams() const { return hyperparams_; }

 protected:
  HyperparamVector hyperparams_;
};

// f(x) = exp(-x^2/2) + 2 exp(-(x-10)^2/2): local peak 1 at 0, global peak 2 at 10.
double TwoBasinObjective(double x);

// Stochastic hill-climb step: propose x + sigma * g, keep it iff f improves.
double TwoBasinTrainStep(double x, double sigma, Rng& rng);

// Gradient step on L = 0.5 * sum(a_k * theta_k^2).
void QuadraticTrainStep(std::span<double> theta, std::span<const double> curvature,
                        double lr);
double QuadraticLoss(std::span<const double> theta, std::span<const double> curvature);

struct SeedLotteryState {
  double level = 0.0;
  double drift = 0.0;
};

// level += drift + step_noise * g.
void SeedLotteryStep(SeedLotteryState& state, double step_noise, Rng& rng);
inline double SeedLotteryEval(const SeedLotteryState& state) { return state.level; }

struct TwoBasinParams {
  double x0 = 0.0;
  // Evaluation perturbs x by eval_noise * sigma * g: agents with a wide search
  // step score lower in the short term.
  double eval_noise = 0.4;
  // Catastrophic forgetting: with this probability per step, x receives an
  // unconditional N(0, forget_scale^2) kick.
  double forget_prob = 0.0;
  double forget_scale = 0.0;

  bool operator==(const TwoBasinParams&) const = default;
};

struct QuadraticParams {
  std::vector<double> curvature{1.0, 10.0};
  std::vector<double> theta0{1.0, 1.0};

  bool operator==(const QuadraticParams&) const = default;
};

struct SeedLotteryParams {
  // Drift rates are log-normal with this median and log-space deviation.
  double drift_median = 0.1;
  double drift_log_sigma = 1.0;
  double step_noise = 0.5;

  bool operator==(const SeedLotteryParams&) const = default;
};

using TrainableSpec = std::variant<TwoBasinParams, QuadraticParams, SeedLotteryParams>;

const char* TrainableKindName(const TrainableSpec& spec);

class TwoBasinTrainable : public Trainable {
 public:
  // Throws ConfigError if `space` has no "sigma" entry.
  TwoBasinTrainable(const HyperparamSpace& space, TwoBasinParams params);

  void Init(Rng& init_rng, const HyperparamVector& hyperparams) override;
  void Train(int num_steps, Rng& rng) override;
  double EvaluateDraw(Rng& rng) const override;
  Payload ExportPayload() const override { return {x_}; }
  void ImportPayload(const Payload& payload) override;

  double x() const { return x_; }

 private:
  double sigma() const { return hyperparams_[sigma_index_]; }

  std::size_t sigma_index_;
  TwoBasinParams params_;
  double x_ = 0.0;
};

class QuadraticLrTrainable : public Trainable {
 public:
  // Throws ConfigError if `space` has no "lr" entry or the curvature is invalid.
  QuadraticLrTrainable(const HyperparamSpace& space, QuadraticParams params);

  void Init(Rng& init_rng, const HyperparamVector& hyperparams) override;
  void Train(int num_steps, Rng& rng) override;
  double EvaluateDraw(Rng& rng) const override;
  Payload ExportPayload() const override { return theta_; }
  void ImportPayload(const Payload& payload) override;

  double loss() const { return QuadraticLoss(theta_, params_.curvature); }

 private:
  std::size_t lr_index_;
  QuadraticParams params_;
  std::vector<double> theta_;
};

// Hyperparameters are ignored; the drift rate is fixed per initial seed and
// travels with the payload.
class SeedLotteryTrainable : public Trainable {
 public:
  explicit SeedLotteryTrainable(SeedLotteryParams params);

  void Init(Rng& init_rng, const HyperparamVector& hyperparams) override;
  void Train(int num_steps, Rng& rng) override;
  double EvaluateDraw(Rng& rng) const override;
  Payload ExportPayload() const override { return {state_.level, state_.drift}; }
  void ImportPayload(const Payload& payload) override;

  const SeedLotteryState& state() const { return state_; }

 private:
  SeedLotteryParams params_;
  SeedLotteryState state_;
};

std::unique_ptr<Trainable> MakeTrainable(const TrainableSpec& spec,
                                         const HyperparamSpace& space);

}  // namespace mfpbt

#endif  // MFPBT_TRAINABLE_H_
