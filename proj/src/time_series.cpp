#include "bts/time_series.hpp"

#include <stdexcept>

namespace bts {

CentralizeResult centralize(const TimeSeriesMatrix& series) {
  if (series.rows() == 0 || series.cols() == 0) {
    throw std::invalid_argument("empty input");
  }
  if (series.rows() < 2) {
    throw std::invalid_argument("centralize: need at least 2 rows");
  }
  CentralizeResult out;
  out.means = series.values.colwise().mean();
  out.series.values = series.values.rowwise() - out.means.transpose();
  out.series.labels = series.labels;
  return out;
}

}  // namespace bts
