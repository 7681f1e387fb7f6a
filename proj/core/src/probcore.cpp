#include "mutualcover/probcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "mutualcover/spectrum.hpp"

namespace mutualcover {

struct PmfAccess {
  static Pmf pmf(Labels labels, std::vector<double> probs) {
    return Pmf(std::move(labels), std::move(probs));
  }
  static JointPmf joint(std::vector<double> data, Pmf pu, Pmf pv) {
    return JointPmf(std::move(data), std::move(pu), std::move(pv));
  }
};

namespace {

void check_distinct(const Labels& labels, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    require(seen.insert(l).second, ErrorKind::kDuplicateLabel,
            std::string(what) + " label '" + l + "' repeated");
  }
}

double checked_total(std::span<const double> values) {
  double total = 0.0;
  for (double x : values) {
    require(std::isfinite(x), ErrorKind::kInvalidArgument,
            "probability entries must be finite");
    require(x >= 0.0, ErrorKind::kNegativeEntry,
            "negative probability " + std::to_string(x));
    total += x;
  }
  require(std::abs(total - 1.0) <= kNormTolerance, ErrorKind::kNotNormalized,
          "masses sum to " + std::to_string(total));
  return total;
}

JointPmf assemble(std::vector<double> data, std::size_t rows, std::size_t cols,
                  Labels u_labels, Labels v_labels) {
  const double total = std::accumulate(data.begin(), data.end(), 0.0);
  for (double& x : data) x /= total;
  std::vector<double> pu(rows, 0.0), pv(cols, 0.0);
  for (std::size_t u = 0; u < rows; ++u) {
    for (std::size_t v = 0; v < cols; ++v) {
      pu[u] += data[u * cols + v];
      pv[v] += data[u * cols + v];
    }
  }
  return PmfAccess::joint(std::move(data),
                          PmfAccess::pmf(std::move(u_labels), std::move(pu)),
                          PmfAccess::pmf(std::move(v_labels), std::move(pv)));
}

}  // namespace

Labels index_labels(std::size_t n) {
  Labels out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

Pmf Pmf::make(Labels labels, std::vector<double> probs) {
  require(!probs.empty(), ErrorKind::kInvalidArgument, "empty pmf");
  if (labels.empty()) labels = index_labels(probs.size());
  require(labels.size() == probs.size(), ErrorKind::kShapeMismatch,
          "label count differs from probability count");
  check_distinct(labels, "pmf");
  const double total = checked_total(probs);
  for (double& p : probs) p /= total;
  return Pmf(std::move(labels), std::move(probs));
}

Pmf Pmf::uniform(std::size_t n) {
  return make({}, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Matrix JointPmf::matrix() const {
  Matrix m(rows(), std::vector<double>(cols()));
  for (std::size_t u = 0; u < rows(); ++u)
    for (std::size_t v = 0; v < cols(); ++v) m[u][v] = (*this)(u, v);
  return m;
}

JointPmf JointPmf::product(const Pmf& pu, const Pmf& pv) {
  std::vector<double> data(pu.size() * pv.size());
  for (std::size_t u = 0; u < pu.size(); ++u)
    for (std::size_t v = 0; v < pv.size(); ++v)
      data[u * pv.size() + v] = pu[u] * pv[v];
  return assemble(std::move(data), pu.size(), pv.size(), pu.labels(),
                  pv.labels());
}

JointPmf build_joint(const Matrix& matrix, Labels u_labels, Labels v_labels) {
  require(!matrix.empty() && !matrix.front().empty(), ErrorKind::kShapeMismatch,
          "joint matrix must be non-empty");
  const std::size_t rows = matrix.size();
  const std::size_t cols = matrix.front().size();
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& row : matrix) {
    require(row.size() == cols, ErrorKind::kShapeMismatch,
            "joint matrix is not rectangular");
    data.insert(data.end(), row.begin(), row.end());
  }
  if (u_labels.empty()) u_labels = index_labels(rows);
  if (v_labels.empty()) v_labels = index_labels(cols);
  require(u_labels.size() == rows && v_labels.size() == cols,
          ErrorKind::kShapeMismatch, "label counts differ from matrix shape");
  check_distinct(u_labels, "u");
  check_distinct(v_labels, "v");
  checked_total(data);
  return assemble(std::move(data), rows, cols, std::move(u_labels),
                  std::move(v_labels));
}

JointPmf make_joint_unchecked(std::vector<double> data, const Labels& u_labels,
                              const Labels& v_labels) {
  return assemble(std::move(data), u_labels.size(), v_labels.size(), u_labels,
                  v_labels);
}

CondPmf CondPmf::make(Labels in_labels, Labels out_labels, const Matrix& rows) {
  require(!rows.empty() && !rows.front().empty(), ErrorKind::kShapeMismatch,
          "channel matrix must be non-empty");
  if (in_labels.empty()) in_labels = index_labels(rows.size());
  if (out_labels.empty()) out_labels = index_labels(rows.front().size());
  require(in_labels.size() == rows.size(), ErrorKind::kShapeMismatch,
          "channel input labels differ from row count");
  check_distinct(in_labels, "channel input");
  check_distinct(out_labels, "channel output");
  std::vector<double> data;
  for (const auto& row : rows) {
    require(row.size() == out_labels.size(), ErrorKind::kShapeMismatch,
            "channel row length differs from output alphabet");
    const double total = checked_total(row);
    for (double x : row) data.push_back(x / total);
  }
  return CondPmf(std::move(in_labels), std::move(out_labels), std::move(data));
}

MultivarPmf::MultivarPmf(Labels z, std::vector<Labels> v, std::vector<double> t)
    : z_labels_(std::move(z)), v_labels_(std::move(v)), tensor_(std::move(t)) {
  for (const auto& l : v_labels_) block_ *= l.size();
}

MultivarPmf MultivarPmf::make(Labels z_labels, std::vector<Labels> v_labels,
                              std::vector<double> tensor) {
  require(!z_labels.empty() && !v_labels.empty(), ErrorKind::kShapeMismatch,
          "multivariate pmf needs a Z alphabet and at least one V coordinate");
  check_distinct(z_labels, "z");
  std::size_t cells = z_labels.size();
  for (const auto& l : v_labels) {
    require(!l.empty(), ErrorKind::kShapeMismatch, "empty V alphabet");
    check_distinct(l, "v");
    cells *= l.size();
  }
  require(tensor.size() == cells, ErrorKind::kShapeMismatch,
          "tensor size differs from alphabet product");
  const double total = checked_total(tensor);
  for (double& x : tensor) x /= total;
  return MultivarPmf(std::move(z_labels), std::move(v_labels),
                     std::move(tensor));
}

void MultivarPmf::decode(std::size_t offset, std::span<std::size_t> out) const {
  for (std::size_t i = arity(); i-- > 0;) {
    out[i] = offset % v_labels_[i].size();
    offset /= v_labels_[i].size();
  }
}

InfoDensityTable info_density(const JointPmf& j) {
  InfoDensityTable t{j.rows(), j.cols(), std::vector<double>(j.atoms())};
  for (std::size_t u = 0; u < j.rows(); ++u) {
    for (std::size_t v = 0; v < j.cols(); ++v) {
      const double p = j(u, v);
      t.values[u * j.cols() + v] =
          p > 0.0 ? std::log(p) - std::log(j.pu()[u]) - std::log(j.pv()[v])
                  : kNegInf;
    }
  }
  return t;
}

double mutual_information(const JointPmf& j) {
  const auto dens = info_density(j);
  double acc = 0.0;
  for (std::size_t i = 0; i < j.atoms(); ++i)
    if (j.data()[i] > 0.0) acc += j.data()[i] * dens.values[i];
  return acc;
}

double varentropy(const JointPmf& j) {
  const auto dens = info_density(j);
  const double mean = mutual_information(j);
  double acc = 0.0;
  for (std::size_t i = 0; i < j.atoms(); ++i) {
    if (j.data()[i] > 0.0) {
      const double d = dens.values[i] - mean;
      acc += j.data()[i] * d * d;
    }
  }
  return std::sqrt(acc);
}

double log_moment(const JointPmf& j, double alpha) {
  return info_spectrum(j).log_moment(alpha);
}

double renyi_divergence(const JointPmf& j, double alpha) {
  require(alpha > 0.0, ErrorKind::kUnsupportedOrder,
          "Renyi order must be positive");
  require(alpha != 1.0, ErrorKind::kUnsupportedOrder,
          "order 1 is the mutual information; use mutual_information");
  return log_moment(j, alpha - 1.0) / (alpha - 1.0);
}

JointPmf tilted_distribution(const JointPmf& j, double rho) {
  require(rho >= 0.0, ErrorKind::kInvalidArgument, "tilt must be >= 0");
  if (rho == 0.0) return j;
  const auto dens = info_density(j);
  std::vector<double> logw(j.atoms(), kNegInf);
  double top = kNegInf;
  for (std::size_t i = 0; i < j.atoms(); ++i) {
    if (j.data()[i] > 0.0) {
      logw[i] = std::log(j.data()[i]) + rho * dens.values[i];
      top = std::max(top, logw[i]);
    }
  }
  std::vector<double> w(j.atoms(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < j.atoms(); ++i) {
    if (logw[i] != kNegInf) w[i] = std::exp(logw[i] - top);
    total += w[i];
  }
  require(total > 0.0 && std::isfinite(total), ErrorKind::kDegenerateTilt,
          "tilted normalizer is not a positive finite number");
  return make_joint_unchecked(std::move(w), j.u_labels(), j.v_labels());
}

double tilted_rate(const JointPmf& j, double rho) {
  require(rho >= 0.0, ErrorKind::kInvalidArgument, "tilt must be >= 0");
  const auto tilted = tilted_distribution(j, rho);
  const auto dens = info_density(j);
  double acc = 0.0;
  for (std::size_t i = 0; i < j.atoms(); ++i)
    if (tilted.data()[i] > 0.0) acc += tilted.data()[i] * dens.values[i];
  return acc;
}

double smooth_mutual_information(const JointPmf& j, double eps) {
  require(eps >= 0.0 && eps < 1.0, ErrorKind::kInvalidArgument,
          "eps must lie in [0, 1)");
  const auto dens = info_density(j);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < j.atoms(); ++i)
    if (j.data()[i] > 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dens.values[a] > dens.values[b];
  });
  double removed = 0.0;
  std::size_t k = 0;
  // Keep at least one atom: the retained set must carry mass >= 1 - eps > 0.
  while (k + 1 < order.size() &&
         removed + j.data()[order[k]] <= eps + 1e-12) {
    removed += j.data()[order[k]];
    ++k;
  }
  return dens.values[order[k]];
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

JointPmf tensor_power(const JointPmf& j, int n, std::size_t cap) {
  require(n >= 1, ErrorKind::kInvalidArgument, "tensor power needs n >= 1");
  cap = effective_cap(cap);
  double cells = 1.0;
  for (int i = 0; i < n; ++i) cells *= static_cast<double>(j.atoms());
  require(cells <= static_cast<double>(cap), ErrorKind::kSizeCapExceeded,
          "tensor power would hold " + std::to_string(cells) + " entries");

  std::vector<double> data(j.data().begin(), j.data().end());
  Labels ul = j.u_labels(), vl = j.v_labels();
  std::size_t rows = j.rows(), cols = j.cols();
  for (int step = 1; step < n; ++step) {
    const std::size_t nr = rows * j.rows(), nc = cols * j.cols();
    std::vector<double> next(nr * nc);
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t u = 0; u < j.rows(); ++u)
        for (std::size_t b = 0; b < cols; ++b)
          for (std::size_t v = 0; v < j.cols(); ++v)
            next[(a * j.rows() + u) * nc + b * j.cols() + v] =
                data[a * cols + b] * j(u, v);
    Labels nul, nvl;
    for (const auto& x : ul)
      for (const auto& y : j.u_labels()) nul.push_back(x + "," + y);
    for (const auto& x : vl)
      for (const auto& y : j.v_labels()) nvl.push_back(x + "," + y);
    data = std::move(next);
    ul = std::move(nul);
    vl = std::move(nvl);
    rows = nr;
    cols = nc;
  }
  return make_joint_unchecked(std::move(data), ul, vl);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  require(p.size() == q.size(), ErrorKind::kShapeMismatch,
          "divergence arguments differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kPosInf;
    acc += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return std::max(acc, 0.0);
}

}  // namespace mutualcover
