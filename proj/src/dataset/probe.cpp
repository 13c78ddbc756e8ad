#include "textfx/dataset/probe.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>

#include "textfx/core/error.hpp"
#include "textfx/core/parallel.hpp"
#include "textfx/core/random.hpp"
#include "textfx/dataset/filters.hpp"
#include "textfx/dataset/merge.hpp"
#include "textfx/evalkit/embed.hpp"

namespace textfx::dataset {
namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

struct Model {
  MatrixXd w;
  RowVectorXd b;
  RowVectorXd mean;
  RowVectorXd scale;
};

MatrixXd softmax_rows(MatrixXd z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    z.row(i).array() -= z.row(i).maxCoeff();
    z.row(i) = z.row(i).array().exp().matrix();
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

Model train(const MatrixXd& x_raw, const std::vector<std::size_t>& y, std::size_t classes, const ProbeConfig& cfg) {
  Model m;
  const auto n = static_cast<double>(x_raw.rows());
  m.mean = x_raw.colwise().mean();
  MatrixXd x = x_raw.rowwise() - m.mean;
  m.scale = (x.array().square().colwise().sum() / n).sqrt().matrix();
  for (Eigen::Index j = 0; j < m.scale.size(); ++j) m.scale[j] = m.scale[j] > 1e-12 ? 1.0 / m.scale[j] : 0.0;
  x = x.array().rowwise() * m.scale.array();

  MatrixXd onehot = MatrixXd::Zero(x.rows(), static_cast<Eigen::Index>(classes));
  for (std::size_t i = 0; i < y.size(); ++i) onehot(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(y[i])) = 1.0;

  m.w = MatrixXd::Zero(x.cols(), static_cast<Eigen::Index>(classes));
  m.b = RowVectorXd::Zero(static_cast<Eigen::Index>(classes));
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const MatrixXd p = softmax_rows((x * m.w).rowwise() + m.b);
    const MatrixXd err = (p - onehot) / n;
    m.w -= cfg.learning_rate * (x.transpose() * err + cfg.l2 * m.w);
    m.b -= cfg.learning_rate * err.colwise().sum();
  }
  return m;
}

std::size_t predict(const Model& m, const VectorXd& row) {
  const RowVectorXd z = ((row.transpose() - m.mean).array() * m.scale.array()).matrix() * m.w + m.b;
  Eigen::Index best = 0;
  z.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

MatrixXd to_matrix(const std::vector<evalkit::Embedding>& x) {
  MatrixXd m(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(x.front().size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[i][j];
  return m;
}

}  // namespace

std::vector<double> cross_validated_f1(const std::vector<evalkit::Embedding>& x, const std::vector<std::size_t>& labels,
                                       std::size_t classes, const ProbeConfig& cfg) {
  if (x.size() != labels.size() || x.empty()) fail(ErrorCode::InvalidArgument, "probe needs one label per embedding");
  if (cfg.folds < 2) fail(ErrorCode::InvalidArgument, "probe needs at least two folds");

  // Stratified assignment: each class is shuffled and dealt round-robin, the
  // dealing position carrying over between classes to balance fold sizes.
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class.at(labels[i]).push_back(i);
  std::vector<std::size_t> fold(x.size());
  Rng rng(derive_seed(cfg.seed, "folds"));
  std::size_t deal = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (by_class[c].size() < cfg.folds)
      fail(ErrorCode::InsufficientData, "class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                                            " samples, fewer than " + std::to_string(cfg.folds) + " folds");
    shuffle(by_class[c].begin(), by_class[c].end(), rng);
    for (std::size_t i : by_class[c]) fold[i] = deal++ % cfg.folds;
  }

  const MatrixXd all = to_matrix(x);
  std::vector<std::size_t> predicted(x.size());
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    std::vector<Eigen::Index> train_rows;
    std::vector<std::size_t> train_labels;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (fold[i] != f) {
        train_rows.push_back(static_cast<Eigen::Index>(i));
        train_labels.push_back(labels[i]);
      }
    const Model m = train(all(train_rows, Eigen::all), train_labels, classes, cfg);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (fold[i] == f) predicted[i] = predict(m, all.row(static_cast<Eigen::Index>(i)).transpose());
  }

  std::vector<double> f1(classes, 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const bool truth = labels[i] == c;
      const bool pred = predicted[i] == c;
      tp += truth && pred;
      fp += !truth && pred;
      fn += truth && !pred;
    }
    f1[c] = tp > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
  }
  return f1;
}

ProbeScores probe_scores(const std::vector<evalkit::Embedding>& x, const std::vector<std::size_t>& labels,
                         const std::vector<std::string>& words, const ProbeConfig& cfg) {
  ProbeScores s;
  s.words = words;
  s.f1 = cross_validated_f1(x, labels, words.size(), cfg);

  Rng rng(derive_seed(cfg.seed, "random-embeddings"));
  std::vector<evalkit::Embedding> noise(x.size(), evalkit::Embedding(x.front().size()));
  for (auto& row : noise)
    for (double& v : row) v = rng.normal();
  s.baseline_f1 = cross_validated_f1(noise, labels, words.size(), cfg);
  for (double v : s.baseline_f1) s.baseline_macro_f1 += v;
  s.baseline_macro_f1 /= static_cast<double>(words.size());

  for (std::size_t c = 0; c < words.size(); ++c) (s.f1[c] > s.baseline_macro_f1 ? s.kept : s.dropped).push_back(words[c]);
  return s;
}

evalkit::AnyParams native_params(const RawExample& ex) {
  if (ex.params_native.size() != native_param_count(ex.fx))
    fail(ErrorCode::SchemaError, "example " + ex.source_id + " has a malformed parameter vector");
  if (ex.fx == fx::FxType::Eq) {
    fx::GraphicEqParams g;
    std::copy(ex.params_native.begin(), ex.params_native.end(), g.gains_db.begin());
    return g;
  }
  std::array<double, fx::ReverbParams::kFieldCount> v{};
  std::copy(ex.params_native.begin(), ex.params_native.end(), v.begin());
  return fx::ReverbParams::from_array(v);
}

ProbeOutcome probe_filter(const std::vector<RawExample>& examples, fx::FxType fx,
                          const std::vector<evalkit::Fixture>& fixtures, const ProbeConfig& cfg,
                          std::uint64_t render_seed, std::size_t parallelism, evalkit::RenderCache* cache) {
  std::vector<RawExample> same_fx;
  for (const auto& ex : examples)
    if (ex.fx == fx) same_fx.push_back(ex);
  ProbeOutcome out;
  if (same_fx.empty()) return out;
  if (fixtures.empty()) fail(ErrorCode::MissingFixture, "probe filter needs at least one dry fixture");

  evalkit::RenderCache local;
  evalkit::RenderCache& rc = cache ? *cache : local;
  const std::size_t nf = fixtures.size();
  const auto feats = parallel_map<features::DspFeatures>(same_fx.size() * nf, parallelism, [&](std::size_t i) {
    return rc.features(fixtures[i % nf], native_params(same_fx[i / nf]), render_seed);
  });

  std::vector<evalkit::Embedding> per_example(same_fx.size());
  for (std::size_t f = 0; f < nf; ++f) {
    std::vector<features::DspFeatures> column;
    for (std::size_t e = 0; e < same_fx.size(); ++e) column.push_back(feats[e * nf + f]);
    const auto stats = evalkit::Standardizer::fit(column);
    for (std::size_t e = 0; e < same_fx.size(); ++e) {
      const auto z = stats.apply(column[e]);
      per_example[e].insert(per_example[e].end(), z.begin(), z.end());
    }
  }

  const auto vocab = vocabulary(same_fx, fx);
  if (vocab.size() < 2) {
    // Nothing to discriminate against; the probe keeps a lone word.
    out.scores.words = out.scores.kept = vocab;
    out.examples = same_fx;
    return out;
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) index[vocab[i]] = i;
  std::vector<evalkit::Embedding> x;
  std::vector<std::size_t> labels;
  for (std::size_t e = 0; e < same_fx.size(); ++e)
    for (const auto& d : same_fx[e].descriptors) {
      x.push_back(per_example[e]);
      labels.push_back(index.at(d));
    }

  out.scores = probe_scores(x, labels, vocab, cfg);
  out.examples = restrict_vocabulary(same_fx, out.scores.kept);
  return out;
}

}  // namespace textfx::dataset
