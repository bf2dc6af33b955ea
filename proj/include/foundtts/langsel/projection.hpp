// Copyright 2026 The foundtts Authors.
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "foundtts/error.hpp"
#include "foundtts/langsel/distance.hpp"
#include "foundtts/langsel/embedding.hpp"
#include "foundtts/langsel/triplets.hpp"
#include "foundtts/rng.hpp"

namespace foundtts {

/// Fully connected network with rectifier activations on every hidden layer
/// and a linear output layer. Parameters live in one flat vector, laid out
/// per layer as W (out x in, row major) followed by b (out).
class ProjectionModel {
 public:
  ProjectionModel() = default;
  ProjectionModel(std::vector<std::size_t> widths, double margin, DistanceKind distance)
      : widths_(std::move(widths)), margin_(margin), distance_(distance) {
    if (widths_.size() < 2) throw ConfigError("projection needs an input and an output width");
    for (auto w : widths_)
      if (w == 0) throw ConfigError("projection layer width must be positive");
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
      offsets_.push_back(n);
      n += widths_[l + 1] * widths_[l] + widths_[l + 1];
    }
    params_.assign(n, 0.0);
  }

  const std::vector<std::size_t>& widths() const { return widths_; }
  std::size_t input_dim() const { return widths_.front(); }
  std::size_t output_dim() const { return widths_.back(); }
  std::size_t layer_count() const { return widths_.size() - 1; }
  double margin() const { return margin_; }
  DistanceKind distance_kind() const { return distance_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  double* weights(std::size_t l) { return params_.data() + offsets_[l]; }
  const double* weights(std::size_t l) const { return params_.data() + offsets_[l]; }
  double* bias(std::size_t l) { return weights(l) + widths_[l + 1] * widths_[l]; }
  const double* bias(std::size_t l) const { return weights(l) + widths_[l + 1] * widths_[l]; }
  std::size_t layer_offset(std::size_t l) const { return offsets_[l]; }

  /// Activations of every layer; acts[0] is the input, acts.back() the output.
  std::vector<Vec> forward_all(std::span<const double> x) const {
    if (x.size() != input_dim())
      throw InputError("projection input has dimension " + std::to_string(x.size()) + ", expected " +
                       std::to_string(input_dim()));
    std::vector<Vec> acts{Vec(x.begin(), x.end())};
    for (std::size_t l = 0; l < layer_count(); ++l) {
      const std::size_t in = widths_[l], out = widths_[l + 1];
      const double* W = weights(l);
      const double* b = bias(l);
      Vec y(out);
      for (std::size_t o = 0; o < out; ++o) {
        double s = b[o];
        for (std::size_t i = 0; i < in; ++i) s += W[o * in + i] * acts[l][i];
        y[o] = (l + 1 < layer_count() && s < 0.0) ? 0.0 : s;
      }
      acts.push_back(std::move(y));
    }
    return acts;
  }

  Vec forward(std::span<const double> x) const { return forward_all(x).back(); }

  /// Adds d(loss)/d(params) to `grad`, given d(loss)/d(output).
  void backward(const std::vector<Vec>& acts, Vec grad_out, std::span<double> grad) const {
    for (std::size_t l = layer_count(); l-- > 0;) {
      const std::size_t in = widths_[l], out = widths_[l + 1];
      if (l + 1 < layer_count())
        for (std::size_t o = 0; o < out; ++o)
          if (acts[l + 1][o] <= 0.0) grad_out[o] = 0.0;
      double* gW = grad.data() + offsets_[l];
      double* gb = gW + out * in;
      const double* W = weights(l);
      Vec grad_in(in, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        const double g = grad_out[o];
        if (g == 0.0) continue;
        gb[o] += g;
        for (std::size_t i = 0; i < in; ++i) {
          gW[o * in + i] += g * acts[l][i];
          grad_in[i] += g * W[o * in + i];
        }
      }
      grad_out = std::move(grad_in);
    }
  }

  friend bool operator==(const ProjectionModel&, const ProjectionModel&) = default;

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
  double margin_ = 0.2;
  DistanceKind distance_ = DistanceKind::kCosine;
};

/// Triplet loss of one (anchor, positive, negative) input triple through the
/// model; when `grad` is non-empty the parameter gradient is added to it.
inline double triplet_loss_and_gradient(const ProjectionModel& m, std::span<const double> a,
                                        std::span<const double> p, std::span<const double> n,
                                        std::span<double> grad = {}) {
  const auto fa = m.forward_all(a), fp = m.forward_all(p), fn = m.forward_all(n);
  const auto& ya = fa.back();
  const auto& yp = fp.back();
  const auto& yn = fn.back();
  const double loss = triplet_loss(ya, yp, yn, m.margin(), m.distance_kind());
  if (grad.empty() || loss <= 0.0) return loss;
  const std::size_t d = m.output_dim();
  Vec ga(d, 0.0), gp(d, 0.0), gn(d, 0.0);
  distance_gradient(m.distance_kind(), ya, yp, 1.0, ga, gp);
  distance_gradient(m.distance_kind(), ya, yn, -1.0, ga, gn);
  m.backward(fa, std::move(ga), grad);
  m.backward(fp, std::move(gp), grad);
  m.backward(fn, std::move(gn), grad);
  return loss;
}

struct TrainingConfig {
  /// Hidden and output widths after the input dimension; the last entry is
  /// the embedding size.
  std::vector<std::size_t> layers = {128, 64};
  double margin = 0.2;
  DistanceKind distance = DistanceKind::kCosine;
  double learning_rate = 1e-3;
  /// Learning rate multiplier applied after every epoch.
  double lr_decay = 1.0;
  std::size_t epochs = 20;
  std::size_t batch = 32;
  std::size_t triplets_per_epoch = 1024;
  std::size_t heldout_triplets = 512;
  double heldout_fraction = 0.2;
  std::uint64_t seed = 0;

  void validate() const {
    if (layers.empty()) throw ConfigError("training: at least one layer width required");
    if (margin < 0.0) throw ConfigError("training: margin must be >= 0");
    if (!(learning_rate > 0.0)) throw ConfigError("training: learning rate must be positive");
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("training: lr_decay must be in (0, 1]");
    if (batch == 0) throw ConfigError("training: batch must be positive");
    if (heldout_triplets == 0) throw ConfigError("training: heldout_triplets must be positive");
    if (!(heldout_fraction > 0.0 && heldout_fraction < 1.0))
      throw ConfigError("training: heldout_fraction must be in (0, 1)");
  }
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double heldout_loss = 0.0;
};

struct TrainingResult {
  ProjectionModel model;  // the parameters with the lowest held-out loss
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
};

/// He-normal weights, zero biases.
inline ProjectionModel init_projection(std::size_t input_dim, const TrainingConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> widths{input_dim};
  widths.insert(widths.end(), cfg.layers.begin(), cfg.layers.end());
  ProjectionModel m(widths, cfg.margin, cfg.distance);
  Rng rng(cfg.seed);
  for (std::size_t l = 0; l < m.layer_count(); ++l) {
    const std::size_t in = widths[l], out = widths[l + 1];
    const double scale = std::sqrt((l + 1 < m.layer_count() ? 2.0 : 1.0) / static_cast<double>(in));
    double* W = m.weights(l);
    for (std::size_t k = 0; k < in * out; ++k) W[k] = rng.normal() * scale;
  }
  return m;
}

inline double mean_triplet_loss(const ProjectionModel& m, const LanguageSet& ls,
                                const std::vector<TripletRef>& triplets) {
  if (triplets.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : triplets) {
    const auto& al = ls.languages.at(t.anchor_lang);
    s += triplet_loss_and_gradient(m, al[t.anchor].vector, al[t.positive].vector,
                                   ls.languages.at(t.negative_lang)[t.negative].vector);
  }
  return s / static_cast<double>(triplets.size());
}

namespace detail {

/// Per-language split into training and held-out utterances. Languages with
/// fewer than four utterances are shared by both sides.
inline void split_heldout(const LanguageSet& ls, double fraction, std::uint64_t seed, LanguageSet& train,
                          LanguageSet& heldout) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  for (const auto& [label, utts] : ls.languages) {
    if (utts.size() < 4) {
      train.languages[label] = utts;
      heldout.languages[label] = utts;
      continue;
    }
    std::vector<std::size_t> idx(utts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx.begin(), idx.end());
    std::size_t h = static_cast<std::size_t>(std::lround(fraction * utts.size()));
    h = std::clamp<std::size_t>(h, 2, utts.size() - 2);
    std::sort(idx.begin(), idx.begin() + h);
    std::sort(idx.begin() + h, idx.end());
    for (std::size_t i = 0; i < idx.size(); ++i) (i < h ? heldout : train).languages[label].push_back(utts[idx[i]]);
  }
}

inline bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace detail

/// Adam on the mean triplet loss over uniformly sampled triplets. The model
/// returned is the one with the lowest held-out loss seen, including the
/// initialization, so held-out loss never ends above its starting value.
inline TrainingResult train_projection(const LanguageSet& ls, const TrainingConfig& cfg) {
  cfg.validate();
  ls.validate(2);
  LanguageSet train, heldout;
  detail::split_heldout(ls, cfg.heldout_fraction, cfg.seed, train, heldout);
  const auto heldout_set = sample_triplets(heldout, cfg.heldout_triplets, cfg.seed + 1);
  const auto monitor_set = sample_triplets(train, cfg.heldout_triplets, cfg.seed + 2);

  TrainingResult res;
  ProjectionModel m = init_projection(ls.dimension(), cfg);
  double best = mean_triplet_loss(m, heldout, heldout_set);
  res.log.push_back({0, mean_triplet_loss(m, train, monitor_set), best});
  res.model = m;

  const std::size_t n = m.params().size();
  std::vector<double> grad(n), mom(n, 0.0), var(n, 0.0);
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  long step = 0;
  double lr = cfg.learning_rate;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto triplets = sample_triplets(train, cfg.triplets_per_epoch, cfg.seed + 1000 + epoch);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < triplets.size(); start += cfg.batch) {
      const std::size_t end = std::min(triplets.size(), start + cfg.batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t t = start; t < end; ++t) {
        const auto& tr = triplets[t];
        const auto& al = train.languages.at(tr.anchor_lang);
        batch_loss += triplet_loss_and_gradient(m, al[tr.anchor].vector, al[tr.positive].vector,
                                                train.languages.at(tr.negative_lang)[tr.negative].vector, grad);
      }
      ++step;
      const double inv = 1.0 / static_cast<double>(end - start);
      if (!std::isfinite(batch_loss)) throw TrainingError("non-finite triplet loss", step);
      epoch_loss += batch_loss;
      auto& p = m.params();
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
      for (std::size_t k = 0; k < n; ++k) {
        const double g = grad[k] * inv;
        mom[k] = b1 * mom[k] + (1.0 - b1) * g;
        var[k] = b2 * var[k] + (1.0 - b2) * g * g;
        p[k] -= lr * (mom[k] / c1) / (std::sqrt(var[k] / c2) + eps);
      }
      if (!detail::all_finite(p)) throw TrainingError("non-finite weights", step);
    }
    lr *= cfg.lr_decay;
    const double h = mean_triplet_loss(m, heldout, heldout_set);
    if (!std::isfinite(h)) throw TrainingError("non-finite held-out loss", step);
    res.log.push_back({epoch, triplets.empty() ? 0.0 : epoch_loss / static_cast<double>(triplets.size()), h});
    if (h < best) {
      best = h;
      res.model = m;
      res.best_epoch = epoch;
    }
  }
  return res;
}

inline std::string render_training_log_csv(const std::vector<EpochLog>& log) {
  std::ostringstream os;
  os.precision(10);
  os << "epoch,train_loss,heldout_loss\n";
  for (const auto& e : log) os << e.epoch << ',' << e.train_loss << ',' << e.heldout_loss << '\n';
  return os.str();
}

/// Mean of the projected utterance vectors.
inline Vec language_centroid(const ProjectionModel& m, const std::vector<UtteranceEmbedding>& utts) {
  if (utts.empty()) throw InputError("centroid of an empty utterance list");
  Vec c(m.output_dim(), 0.0);
  for (const auto& u : utts) {
    const auto y = m.forward(u.vector);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += y[i];
  }
  for (auto& v : c) v /= static_cast<double>(utts.size());
  return c;
}

}  // namespace foundtts
