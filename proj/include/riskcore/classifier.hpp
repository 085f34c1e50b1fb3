#pragma once

#include <string>
#include <vector>

#include "riskcore/dataset.hpp"
#include "riskcore/types.hpp"

namespace riskcore::models {

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual void fit(const data::LabeledDataset& train) = 0;

  // Score in [0,1]; hard 0/1 for methods without probabilities.
  virtual double predict_proba(const Vector& x) const = 0;

  int predict(const Vector& x) const {
    return predict_proba(x) >= 0.5 ? 1 : 0;
  }

  // Whether scores are calibrated enough to report an AUC.
  virtual bool probabilistic() const = 0;

  virtual std::string name() const = 0;

  std::vector<double> score_rows(const Matrix& x) const {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i)
      out.push_back(predict_proba(x.row(i).transpose()));
    return out;
  }

  std::vector<int> predict_rows(const Matrix& x) const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i)
      out.push_back(predict(x.row(i).transpose()));
    return out;
  }
};

}  // namespace riskcore::models
