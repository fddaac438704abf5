// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ecgbench/dsp.hpp"
#include "ecgbench/segment.hpp"

namespace ecgbench::embed {

struct EmbeddingVector {
  std::vector<double> values;
  std::string embedder;

  std::size_t dim() const { return values.size(); }
};

/// Fourier-resample to `target_len`, then normalise. Shared input stage of every embedder.
std::vector<double> prepare_beat(std::span<const double> samples, std::size_t target_len,
                                 dsp::Normalization method = dsp::Normalization::zscore);

/// Training-free baseline: the z-scored, length-normalised beat itself. Throws ZeroVariance.
EmbeddingVector morphology_embed(const segment::BeatSegment& seg, std::size_t target_len = 128);

enum class Activation { relu, identity };

/// One hidden layer classifier; weights are row-major.
struct MlpModel {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t classes = 0;
  std::vector<double> w1;  // hidden x input
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // classes x hidden
  std::vector<double> b2;  // classes
  Activation activation = Activation::relu;

  std::size_t parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }
  bool operator==(const MlpModel&) const = default;
};

struct MlpHyperparams {
  std::size_t hidden_dim = 64;
  double lr = 0.05;
  std::size_t epochs = 40;
  std::size_t batch = 32;
  std::uint64_t seed = 0;
};

/// Row-major samples with integer class labels in [0, classes).
struct LabeledSet {
  std::size_t dim = 0;
  std::vector<double> x;
  std::vector<std::size_t> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const { return std::span(x).subspan(i * dim, dim); }
  void add(std::span<const double> sample, std::size_t label);
};

struct TrainResult {
  MlpModel model;
  std::vector<double> epoch_loss;  // full-set mean cross-entropy after each epoch
};

/// He-initialised weights (normal, std sqrt(2 / fan_in)), zero biases.
MlpModel mlp_init(std::size_t input_dim, std::size_t hidden_dim, std::size_t classes, std::uint64_t seed,
                  Activation activation = Activation::relu);

/// Mini-batch gradient descent on softmax cross-entropy. Throws SingleClass, DimensionMismatch.
TrainResult mlp_train(const LabeledSet& train, const MlpHyperparams& hp);

std::vector<double> mlp_probabilities(const MlpModel& model, std::span<const double> x);
double mlp_loss(const MlpModel& model, std::span<const double> x, std::size_t label);
double mlp_loss(const MlpModel& model, const LabeledSet& data);
double mlp_accuracy(const MlpModel& model, const LabeledSet& data);

/// Gradients of the single-sample cross-entropy, laid out like MlpModel.
MlpModel mlp_gradients(const MlpModel& model, std::span<const double> x, std::size_t label);

/// Hidden-layer activation. Throws DimensionMismatch.
EmbeddingVector mlp_embed(const MlpModel& model, std::span<const double> x);

/// Max over all parameters of |g_a - g_n| / max(|g_a| + |g_n|, 1e-12), with g_n from central
/// differences of step `fd_step`.
double gradient_check(const MlpModel& model, std::span<const double> x, std::size_t label, double fd_step);

/// Little-endian binary: 8 magic bytes, four u64 (input, hidden, classes, activation), then
/// w1, b1, w2, b2 as f64.
void save_model(const MlpModel& model, std::ostream& out);
MlpModel load_model(std::istream& in);

/// Pluggable extractor over prepared (fixed-length) inputs.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual EmbeddingVector embed(std::span<const double> prepared) const = 0;
};

class MorphologyEmbedder final : public Embedder {
 public:
  std::string name() const override { return "morphology"; }
  EmbeddingVector embed(std::span<const double> prepared) const override;
};

class MlpEmbedder final : public Embedder {
 public:
  explicit MlpEmbedder(MlpModel model) : model_(std::move(model)) {}
  std::string name() const override { return "mlp"; }
  EmbeddingVector embed(std::span<const double> prepared) const override { return mlp_embed(model_, prepared); }
  const MlpModel& model() const { return model_; }

 private:
  MlpModel model_;
};

/// Embeds every input; OpenMP over inputs with pre-assigned output slots.
std::vector<EmbeddingVector> embed_batch(const Embedder& embedder, const std::vector<std::vector<double>>& inputs);
std::vector<EmbeddingVector> embed_batch_serial(const Embedder& embedder,
                                                const std::vector<std::vector<double>>& inputs);

}  // namespace ecgbench::embed
