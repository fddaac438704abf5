// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/embed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

#include "ecgbench/error.hpp"
#include "ecgbench/random.hpp"

namespace ecgbench::embed {

std::vector<double> prepare_beat(std::span<const double> samples, std::size_t target_len,
                                 dsp::Normalization method) {
  require(target_len >= 8, ErrorCode::InvalidArgument, "target length must be >= 8");
  if (samples.size() == target_len) return dsp::normalize(samples, method);
  return dsp::normalize(dsp::resample_fourier(samples, target_len), method);
}

EmbeddingVector morphology_embed(const segment::BeatSegment& seg, std::size_t target_len) {
  return {prepare_beat(seg.samples, target_len, dsp::Normalization::zscore), "morphology"};
}

EmbeddingVector MorphologyEmbedder::embed(std::span<const double> prepared) const {
  return {std::vector<double>(prepared.begin(), prepared.end()), "morphology"};
}

void LabeledSet::add(std::span<const double> sample, std::size_t label) {
  if (labels.empty() && dim == 0) dim = sample.size();
  require(sample.size() == dim, ErrorCode::DimensionMismatch,
          "sample of length " + std::to_string(sample.size()) + " in a set of dim " + std::to_string(dim));
  x.insert(x.end(), sample.begin(), sample.end());
  labels.push_back(label);
}

MlpModel mlp_init(std::size_t input_dim, std::size_t hidden_dim, std::size_t classes, std::uint64_t seed,
                  Activation activation) {
  require(input_dim > 0 && hidden_dim > 0 && classes > 0, ErrorCode::InvalidArgument, "mlp dims must be positive");
  MlpModel m;
  m.input_dim = input_dim;
  m.hidden_dim = hidden_dim;
  m.classes = classes;
  m.activation = activation;
  Rng rng(derive_seed(seed, "mlp-init"));
  std::normal_distribution<double> n1(0.0, std::sqrt(2.0 / static_cast<double>(input_dim)));
  std::normal_distribution<double> n2(0.0, std::sqrt(2.0 / static_cast<double>(hidden_dim)));
  m.w1.resize(hidden_dim * input_dim);
  for (auto& w : m.w1) w = n1(rng);
  m.b1.assign(hidden_dim, 0.0);
  m.w2.resize(classes * hidden_dim);
  for (auto& w : m.w2) w = n2(rng);
  m.b2.assign(classes, 0.0);
  return m;
}

namespace {

struct Forward {
  std::vector<double> pre;     // hidden pre-activation
  std::vector<double> hidden;  // post-activation
  std::vector<double> logits;
};

Forward forward(const MlpModel& m, std::span<const double> x) {
  require(x.size() == m.input_dim, ErrorCode::DimensionMismatch,
          "input of length " + std::to_string(x.size()) + " for a model expecting " + std::to_string(m.input_dim));
  Forward f;
  f.pre.resize(m.hidden_dim);
  f.hidden.resize(m.hidden_dim);
  for (std::size_t h = 0; h < m.hidden_dim; ++h) {
    const double* w = &m.w1[h * m.input_dim];
    double acc = m.b1[h];
    for (std::size_t d = 0; d < m.input_dim; ++d) acc += w[d] * x[d];
    f.pre[h] = acc;
    f.hidden[h] = m.activation == Activation::relu ? std::max(acc, 0.0) : acc;
  }
  f.logits.resize(m.classes);
  for (std::size_t c = 0; c < m.classes; ++c) {
    const double* w = &m.w2[c * m.hidden_dim];
    double acc = m.b2[c];
    for (std::size_t h = 0; h < m.hidden_dim; ++h) acc += w[h] * f.hidden[h];
    f.logits[c] = acc;
  }
  return f;
}

// Max-subtracted softmax.
std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) total += (p[i] = std::exp(logits[i] - top));
  for (auto& v : p) v /= total;
  return p;
}

double cross_entropy(const std::vector<double>& logits, std::size_t label) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double l : logits) total += std::exp(l - top);
  return top + std::log(total) - logits[label];
}

// Adds the single-sample gradient into `g`.
void accumulate_gradients(const MlpModel& m, std::span<const double> x, std::size_t label, MlpModel& g) {
  const Forward f = forward(m, x);
  std::vector<double> delta = softmax(f.logits);
  delta[label] -= 1.0;
  std::vector<double> back(m.hidden_dim, 0.0);
  for (std::size_t c = 0; c < m.classes; ++c) {
    const double d = delta[c];
    g.b2[c] += d;
    double* gw = &g.w2[c * m.hidden_dim];
    const double* w = &m.w2[c * m.hidden_dim];
    for (std::size_t h = 0; h < m.hidden_dim; ++h) {
      gw[h] += d * f.hidden[h];
      back[h] += d * w[h];
    }
  }
  for (std::size_t h = 0; h < m.hidden_dim; ++h) {
    if (m.activation == Activation::relu && f.pre[h] <= 0.0) continue;
    const double d = back[h];
    g.b1[h] += d;
    double* gw = &g.w1[h * m.input_dim];
    for (std::size_t i = 0; i < m.input_dim; ++i) gw[i] += d * x[i];
  }
}

MlpModel zeros_like(const MlpModel& m) {
  MlpModel g = m;
  for (auto* v : {&g.w1, &g.b1, &g.w2, &g.b2}) std::fill(v->begin(), v->end(), 0.0);
  return g;
}

std::vector<double*> parameters(MlpModel& m) {
  std::vector<double*> out;
  out.reserve(m.parameter_count());
  for (auto* v : {&m.w1, &m.b1, &m.w2, &m.b2}) {
    for (auto& p : *v) out.push_back(&p);
  }
  return out;
}

}  // namespace

std::vector<double> mlp_probabilities(const MlpModel& model, std::span<const double> x) {
  return softmax(forward(model, x).logits);
}

double mlp_loss(const MlpModel& model, std::span<const double> x, std::size_t label) {
  require(label < model.classes, ErrorCode::InvalidArgument, "label out of range");
  return cross_entropy(forward(model, x).logits, label);
}

double mlp_loss(const MlpModel& model, const LabeledSet& data) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) total += mlp_loss(model, data.row(i), data.labels[i]);
  return data.size() ? total / static_cast<double>(data.size()) : 0.0;
}

double mlp_accuracy(const MlpModel& model, const LabeledSet& data) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto logits = forward(model, data.row(i)).logits;
    const auto best = static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    hits += best == data.labels[i];
  }
  return data.size() ? static_cast<double>(hits) / static_cast<double>(data.size()) : 0.0;
}

MlpModel mlp_gradients(const MlpModel& model, std::span<const double> x, std::size_t label) {
  require(label < model.classes, ErrorCode::InvalidArgument, "label out of range");
  MlpModel g = zeros_like(model);
  accumulate_gradients(model, x, label, g);
  return g;
}

TrainResult mlp_train(const LabeledSet& train, const MlpHyperparams& hp) {
  require(train.size() > 0, ErrorCode::SingleClass, "empty training set");
  require(train.x.size() == train.size() * train.dim, ErrorCode::DimensionMismatch, "ragged training set");
  const std::size_t classes = *std::max_element(train.labels.begin(), train.labels.end()) + 1;
  std::vector<bool> seen(classes, false);
  for (auto l : train.labels) seen[l] = true;
  const auto distinct = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
  require(distinct >= 2, ErrorCode::SingleClass, "training data holds a single class");
  require(hp.batch >= 1 && hp.lr > 0.0 && hp.hidden_dim >= 1, ErrorCode::InvalidArgument,
          "mlp hyperparameters must be positive");

  TrainResult result;
  result.model = mlp_init(train.dim, hp.hidden_dim, classes, hp.seed);
  MlpModel& m = result.model;
  Rng rng(derive_seed(hp.seed, "mlp-shuffle"));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += hp.batch) {
      const std::size_t stop = std::min(order.size(), start + hp.batch);
      MlpModel g = zeros_like(m);
      for (std::size_t i = start; i < stop; ++i) accumulate_gradients(m, train.row(order[i]), train.labels[order[i]], g);
      const double step = hp.lr / static_cast<double>(stop - start);
      auto params = parameters(m);
      auto grads = parameters(g);
      for (std::size_t p = 0; p < params.size(); ++p) *params[p] -= step * *grads[p];
    }
    result.epoch_loss.push_back(mlp_loss(m, train));
  }
  return result;
}

EmbeddingVector mlp_embed(const MlpModel& model, std::span<const double> x) {
  return {forward(model, x).hidden, "mlp"};
}

double gradient_check(const MlpModel& model, std::span<const double> x, std::size_t label, double fd_step) {
  require(fd_step > 0.0, ErrorCode::InvalidArgument, "fd_step must be positive");
  MlpModel analytic = mlp_gradients(model, x, label);
  MlpModel probe = model;
  auto params = parameters(probe);
  auto grads = parameters(analytic);
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double saved = *params[p];
    *params[p] = saved + fd_step;
    const double up = mlp_loss(probe, x, label);
    *params[p] = saved - fd_step;
    const double down = mlp_loss(probe, x, label);
    *params[p] = saved;
    const double numeric = (up - down) / (2.0 * fd_step);
    const double ga = *grads[p];
    worst = std::max(worst, std::abs(ga - numeric) / std::max(std::abs(ga) + std::abs(numeric), 1e-12));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Serialisation

namespace {

constexpr char kMagic[8] = {'E', 'C', 'G', 'M', 'L', 'P', '0', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  std::uint64_t bits;
  static_assert(sizeof(T) == sizeof(bits));
  std::memcpy(&bits, &value, sizeof bits);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

template <class T>
T get_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  require(in.gcount() == 8, ErrorCode::TruncatedData, "model file truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, sizeof value);
  return value;
}

}  // namespace

void save_model(const MlpModel& model, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put_le<std::uint64_t>(out, model.input_dim);
  put_le<std::uint64_t>(out, model.hidden_dim);
  put_le<std::uint64_t>(out, model.classes);
  put_le<std::uint64_t>(out, model.activation == Activation::relu ? 0 : 1);
  for (const auto* v : {&model.w1, &model.b1, &model.w2, &model.b2}) {
    for (double p : *v) put_le<double>(out, p);
  }
  require(static_cast<bool>(out), ErrorCode::IoError, "model write failed");
}

MlpModel load_model(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  require(in.gcount() == 8 && std::equal(magic, magic + 8, kMagic), ErrorCode::FormatMismatch, "not an MLP model file");
  MlpModel m;
  m.input_dim = get_le<std::uint64_t>(in);
  m.hidden_dim = get_le<std::uint64_t>(in);
  m.classes = get_le<std::uint64_t>(in);
  const auto act = get_le<std::uint64_t>(in);
  require(act <= 1, ErrorCode::FormatMismatch, "unknown activation code");
  require(m.input_dim > 0 && m.hidden_dim > 0 && m.classes > 0 && m.input_dim < (1u << 24) &&
              m.hidden_dim < (1u << 24) && m.classes < (1u << 24),
          ErrorCode::FormatMismatch, "implausible model dimensions");
  m.activation = act == 0 ? Activation::relu : Activation::identity;
  m.w1.resize(m.hidden_dim * m.input_dim);
  m.b1.resize(m.hidden_dim);
  m.w2.resize(m.classes * m.hidden_dim);
  m.b2.resize(m.classes);
  for (auto* v : {&m.w1, &m.b1, &m.w2, &m.b2}) {
    for (auto& p : *v) p = get_le<double>(in);
  }
  return m;
}

// ---------------------------------------------------------------------------

std::vector<EmbeddingVector> embed_batch_serial(const Embedder& embedder,
                                                const std::vector<std::vector<double>>& inputs) {
  std::vector<EmbeddingVector> out(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = embedder.embed(inputs[i]);
  return out;
}

std::vector<EmbeddingVector> embed_batch(const Embedder& embedder, const std::vector<std::vector<double>>& inputs) {
  std::vector<EmbeddingVector> out(inputs.size());
  const auto n = static_cast<std::ptrdiff_t>(inputs.size());
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = embedder.embed(inputs[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  // Re-run serially to surface the first error with its message.
  if (failed) return embed_batch_serial(embedder, inputs);
  return out;
}

}  // namespace ecgbench::embed
