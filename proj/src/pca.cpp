#include "riskcore/pca.hpp"

#include <cmath>

#include "riskcore/logistic.hpp"
#include "riskcore/metrics.hpp"

namespace riskcore::pca {

Matrix PcaModel::transform(const Matrix& x) const {
  if (x.cols() != mean.size())
    throw DimensionMismatch("PCA transform width mismatch");
  return (x.rowwise() - mean.transpose()) * axes;
}

namespace {

// Leading eigenvector of a symmetric PSD matrix by power iteration.
Vector power_iterate(const Matrix& cov, double tol, int max_iters,
                     double* eigenvalue) {
  const Index d = cov.rows();
  // Deterministic, non-degenerate start direction.
  Vector v(d);
  for (Index i = 0; i < d; ++i)
    v[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector next = cov * v;
    const double norm = next.norm();
    if (norm < 1e-300) {  // null operator; any direction is an eigenvector
      lambda = 0.0;
      break;
    }
    next /= norm;
    const double delta = (next - v).norm();
    const double delta_flip = (next + v).norm();
    v = next;
    lambda = v.dot(cov * v);
    if (std::min(delta, delta_flip) < tol) break;
  }
  *eigenvalue = std::max(0.0, lambda);
  return v;
}

void fix_sign(Vector& v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

PcaModel pca_fit(const Matrix& x, double tol, int max_iters) {
  if (x.rows() < 3) throw TooFewSamples("PCA needs n >= 3");
  if (x.cols() < 2) throw DimensionMismatch("PCA needs d >= 2");

  PcaModel m;
  m.mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - m.mean.transpose();
  const Matrix cov = centered.transpose() * centered /
                     static_cast<double>(x.rows() - 1);

  double l1 = 0.0, l2 = 0.0;
  Vector a1 = power_iterate(cov, tol, max_iters, &l1);
  const Matrix deflated = cov - l1 * a1 * a1.transpose();
  Vector a2 = power_iterate(deflated, tol, max_iters, &l2);
  // Re-orthogonalize against the first axis before normalizing.
  a2 -= a1.dot(a2) * a1;
  if (a2.norm() < 1e-12) {
    // Degenerate spectrum; pick any unit vector orthogonal to a1.
    a2 = Vector::Zero(cov.rows());
    Index arg = 0;
    a1.cwiseAbs().minCoeff(&arg);
    a2[arg] = 1.0;
    a2 -= a1.dot(a2) * a1;
  }
  a2.normalize();
  l2 = std::max(0.0, a2.dot(cov * a2));

  fix_sign(a1);
  fix_sign(a2);
  m.axes.resize(cov.rows(), 2);
  m.axes.col(0) = a1;
  m.axes.col(1) = a2;
  m.explained_variance.resize(2);
  m.explained_variance[0] = l1;
  m.explained_variance[1] = l2;
  m.rank_deficient = l2 < 1e-12 * std::max(1.0, l1);
  return m;
}

std::vector<LayerProjection> project_layers(const mlp::MlpModel& model,
                                            const Matrix& features) {
  const auto acts = model.forward_activations(features);
  std::vector<LayerProjection> out;
  // Input plus every hidden layer; the scalar output is skipped.
  for (size_t l = 0; l + 1 < acts.size(); ++l) {
    LayerProjection proj;
    proj.layer_name = l == 0 ? "input" : "hidden" + std::to_string(l);
    const Matrix& a = acts[l];
    proj.degenerate =
        (a.rowwise() - a.row(0)).cwiseAbs().maxCoeff() < 1e-15;
    proj.pca = pca_fit(a);
    proj.coordinates = proj.pca.transform(a);
    out.push_back(std::move(proj));
  }
  return out;
}

double separability_probe(const Matrix& coordinates,
                          const std::vector<int>& labels) {
  data::LabeledDataset d;
  d.features = coordinates;
  d.labels = labels;
  const long pos = d.count_label(1);
  if (pos == 0 || pos == d.rows())
    throw MissingClass("probe needs both classes");
  const auto model = models::lr_fit(d, {});
  std::vector<int> pred;
  pred.reserve(labels.size());
  for (Index i = 0; i < coordinates.rows(); ++i)
    pred.push_back(
        models::lr_predict_proba(model, coordinates.row(i).transpose()) >= 0.5
            ? 1
            : 0);
  const auto counts = metrics::confusion(labels, pred);
  return static_cast<double>(counts.tp + counts.tn) /
         static_cast<double>(counts.total());
}

}  // namespace riskcore::pca
