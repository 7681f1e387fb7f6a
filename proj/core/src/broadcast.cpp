#include "mutualcover/broadcast.hpp"

#include <algorithm>
#include <cmath>

#include "density_compare.hpp"

namespace mutualcover {

namespace {

void check_channels(const JointPmf& joint, const CondPmf& y_channel,
                    const CondPmf& z_channel,
                    const std::vector<std::size_t>& x_map) {
  require(x_map.size() == joint.atoms(), ErrorKind::kShapeMismatch,
          "x map must have one entry per (u,v)");
  require(y_channel.inputs() == z_channel.inputs(), ErrorKind::kShapeMismatch,
          "both channels must share the input alphabet");
  for (std::size_t x : x_map)
    require(x < y_channel.inputs(), ErrorKind::kShapeMismatch,
            "x map entry out of range");
}

void check_theta(double theta) {
  require(theta >= 0.0 && theta <= 1.0, ErrorKind::kInvalidArgument,
          "theta must lie in [0,1]");
}

std::vector<double> output_law(const Pmf& input, const CondPmf& channel) {
  std::vector<double> out(channel.outputs(), 0.0);
  for (std::size_t a = 0; a < input.size(); ++a)
    for (std::size_t y = 0; y < channel.outputs(); ++y)
      out[y] += input[a] * channel(a, y);
  return out;
}

// Channel from one auxiliary to one output: side 0 conditions on u, side 1
// on v.
CondPmf induce(const JointPmf& j, const CondPmf& w,
               const std::vector<std::size_t>& x_map, int side) {
  const std::size_t na = side == 0 ? j.rows() : j.cols();
  const std::size_t nb = side == 0 ? j.cols() : j.rows();
  const Pmf& marginal = side == 0 ? j.pu() : j.pv();
  Matrix rows(na, std::vector<double>(w.outputs(), 0.0));
  for (std::size_t a = 0; a < na; ++a) {
    const double pa = marginal[a];
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t u = side == 0 ? a : b, v = side == 0 ? b : a;
      const double weight = pa > 0.0 ? j(u, v) / pa : 1.0 / nb;
      if (weight == 0.0) continue;
      const std::size_t x = x_map[u * j.cols() + v];
      for (std::size_t y = 0; y < w.outputs(); ++y)
        rows[a][y] += weight * w(x, y);
    }
    double total = 0.0;
    for (double p : rows[a]) total += p;
    for (double& p : rows[a]) p /= total;
  }
  return CondPmf::make(side == 0 ? j.u_labels() : j.v_labels(),
                       w.out_labels(), rows);
}

ScoreFunction make_scores(const Pmf& input, const CondPmf& channel,
                          double theta) {
  const auto py = output_law(input, channel);
  ScoreFunction s;
  s.rows = input.size();
  s.cols = channel.outputs();
  s.values.resize(s.rows * s.cols);
  for (std::size_t a = 0; a < s.rows; ++a) {
    for (std::size_t y = 0; y < s.cols; ++y) {
      const double w = channel(a, y);
      double h = 0.0;
      if (w > 0.0 && py[y] > 0.0)
        h = std::exp((std::log(w) - std::log(py[y])) / (1.0 + theta));
      if (!(h >= kScoreFloor)) {
        h = kScoreFloor;
        ++s.floored;
      }
      s.values[a * s.cols + y] = h;
    }
  }
  return s;
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

void BroadcastSpec::validate() const {
  check_channels(joint, y_channel, z_channel, x_map);
  for (double s : {m1, m2, n1, n2})
    require(std::isfinite(s) && s >= 1.0, ErrorKind::kInvalidArgument,
            "message and list sizes must be finite and >= 1");
  check_theta(theta1);
  check_theta(theta2);
  require(std::isfinite(gamma), ErrorKind::kInvalidArgument,
          "gamma must be finite");
}

double gallager_e0(const Pmf& input, const CondPmf& channel, double theta) {
  check_theta(theta);
  require(input.size() == channel.inputs(), ErrorKind::kShapeMismatch,
          "input law and channel disagree on the alphabet");
  const double rho = 1.0 + theta;
  double acc = 0.0;
  for (std::size_t y = 0; y < channel.outputs(); ++y) {
    double inner = 0.0;
    for (std::size_t a = 0; a < input.size(); ++a) {
      const double w = channel(a, y);
      if (input[a] > 0.0 && w > 0.0) inner += input[a] * std::pow(w, 1.0 / rho);
    }
    acc += std::pow(inner, rho);
  }
  return -std::log(acc);
}

double channel_mutual_information(const Pmf& input, const CondPmf& channel) {
  require(input.size() == channel.inputs(), ErrorKind::kShapeMismatch,
          "input law and channel disagree on the alphabet");
  const auto py = output_law(input, channel);
  double acc = 0.0;
  for (std::size_t a = 0; a < input.size(); ++a)
    for (std::size_t y = 0; y < channel.outputs(); ++y) {
      const double w = channel(a, y);
      if (input[a] > 0.0 && w > 0.0)
        acc += input[a] * w * (std::log(w) - std::log(py[y]));
    }
  return acc;
}

std::pair<CondPmf, CondPmf> induced_channels(
    const JointPmf& joint, const CondPmf& y_channel, const CondPmf& z_channel,
    const std::vector<std::size_t>& x_map) {
  check_channels(joint, y_channel, z_channel, x_map);
  return {induce(joint, y_channel, x_map, 0), induce(joint, z_channel, x_map, 1)};
}

std::pair<ScoreFunction, ScoreFunction> default_scores(
    const BroadcastSpec& spec) {
  spec.validate();
  const auto [py_u, pz_v] =
      induced_channels(spec.joint, spec.y_channel, spec.z_channel, spec.x_map);
  return {make_scores(spec.joint.pu(), py_u, spec.theta1),
          make_scores(spec.joint.pv(), pz_v, spec.theta2)};
}

std::vector<double> phi(const BroadcastSpec& spec, int which,
                        const ScoreFunction& scores) {
  spec.validate();
  require(which == 1 || which == 2, ErrorKind::kInvalidArgument,
          "phi index must be 1 or 2");
  const JointPmf& j = spec.joint;
  const bool first = which == 1;
  const CondPmf& w = first ? spec.y_channel : spec.z_channel;
  const Pmf& aux = first ? j.pu() : j.pv();
  const double theta = first ? spec.theta1 : spec.theta2;
  require(scores.rows == aux.size() && scores.cols == w.outputs(),
          ErrorKind::kShapeMismatch, "score table shape mismatch");
  for (double s : scores.values)
    require(s > 0.0 && std::isfinite(s), ErrorKind::kInvalidArgument,
            "scores must be positive and finite");

  // E[h(Ū, y)] with Ū drawn from the auxiliary's marginal.
  std::vector<double> mean_score(w.outputs(), 0.0);
  for (std::size_t a = 0; a < aux.size(); ++a)
    for (std::size_t y = 0; y < w.outputs(); ++y)
      mean_score[y] += aux[a] * scores(a, y);

  std::vector<double> out(j.atoms());
  for (std::size_t u = 0; u < j.rows(); ++u) {
    for (std::size_t v = 0; v < j.cols(); ++v) {
      const std::size_t x = spec.x_map[u * j.cols() + v];
      const std::size_t a = first ? u : v;
      double acc = 0.0;
      for (std::size_t y = 0; y < w.outputs(); ++y) {
        const double p = w(x, y);
        if (p > 0.0) acc += p * std::pow(mean_score[y] / scores(a, y), theta);
      }
      out[u * j.cols() + v] = std::log(acc);
    }
  }
  return out;
}

Lemma6Report lemma6_bound(const BroadcastSpec& spec, const ScoreFunction& h,
                          const ScoreFunction& g) {
  const JointPmf& j = spec.joint;
  const auto phi1 = phi(spec, 1, h);
  const auto phi2 = phi(spec, 2, g);
  Lemma6Report rep;
  for (std::size_t i = 0; i < j.atoms(); ++i) {
    if (j.data()[i] == 0.0) continue;
    rep.mean_phi1 += j.data()[i] * phi1[i];
    rep.mean_phi2 += j.data()[i] * phi2[i];
  }
  std::vector<std::uint8_t> mask(j.atoms());
  for (std::size_t i = 0; i < j.atoms(); ++i)
    mask[i] = detail::at_most(phi1[i], rep.mean_phi1 + spec.gamma) &&
              detail::at_most(phi2[i], rep.mean_phi2 + spec.gamma);
  rep.f = CoveringSet::from_mask(j.rows(), j.cols(), std::move(mask));

  const double threshold = std::log(spec.n1) + std::log(spec.n2) - spec.gamma;
  const double mass = truncated_mass(j, rep.f, threshold);
  const double denom =
      4.0 * std::exp(-spec.gamma) + 2.0 / spec.n1 + 2.0 / spec.n2;
  const double log_cover = -mass / denom;
  rep.covering_term = std::exp(log_cover);

  const auto make = [&](const char* name, double m, double n, double theta,
                        double mean_phi) {
    const double log_second =
        theta * (std::log(m) + std::log(n)) + mean_phi + spec.gamma;
    BoundReport r;
    r.name = name;
    r.log_value = log_add(log_cover, log_second);
    const double raw = std::exp(r.log_value);
    r.value = std::min(1.0, raw);
    if (raw > 1.0) {
      r.clamped = true;
      r.notes.push_back("clamped to [0,1]");
    }
    r.params = {{"gamma", spec.gamma},
                {"theta", theta},
                {"covering_term", rep.covering_term},
                {"channel_term", std::exp(log_second)},
                {"truncated_mass", mass},
                {"mean_phi", mean_phi}};
    if (spec.theta1 == 0.0 && spec.theta2 == 0.0)
      r.notes.push_back("degenerate: theta1 = theta2 = 0");
    if (h.floored + g.floored > 0)
      r.notes.push_back("score table has floored cells");
    return r;
  };
  rep.bound1 = make("lemma6_decoder1", spec.m1, spec.n1, spec.theta1,
                    rep.mean_phi1);
  rep.bound2 = make("lemma6_decoder2", spec.m2, spec.n2, spec.theta2,
                    rep.mean_phi2);
  return rep;
}

BroadcastExponent theorem2_exponent(const JointPmf& joint,
                                    const CondPmf& y_channel,
                                    const CondPmf& z_channel,
                                    const std::vector<std::size_t>& x_map,
                                    const RatePair& rates) {
  require(std::isfinite(rates.r1) && std::isfinite(rates.r2) &&
              rates.r1 >= 0.0 && rates.r2 >= 0.0,
          ErrorKind::kInvalidArgument, "rates must be finite and >= 0");
  const auto [py_u, pz_v] =
      induced_channels(joint, y_channel, z_channel, x_map);
  BroadcastExponent out;
  out.i_uy = channel_mutual_information(joint.pu(), py_u);
  out.i_vz = channel_mutual_information(joint.pv(), pz_v);
  out.i_uv = mutual_information(joint);

  struct Terms {
    double t1, t2, t3;
    double min() const { return std::min({t1, t2, t3}); }
  };
  const auto terms = [&](double theta) {
    const double ey = gallager_e0(joint.pu(), py_u, theta);
    const double ez = gallager_e0(joint.pv(), pz_v, theta);
    return Terms{ey - theta * rates.r1, ez - theta * rates.r2,
                 0.5 * (ey + ez - theta * (rates.r1 + rates.r2 + out.i_uv))};
  };

  constexpr int kGrid = 1000;
  double best_theta = 0.0;
  Terms best = terms(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double theta = static_cast<double>(i) / kGrid;
    const Terms t = terms(theta);
    if (t.min() > best.min()) {
      best = t;
      best_theta = theta;
    }
  }

  // Golden-section refinement around the best grid point.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::max(0.0, best_theta - 1.0 / kGrid);
  double hi = std::min(1.0, best_theta + 1.0 / kGrid);
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = terms(c).min(), fd = terms(d).min();
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = terms(c).min();
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = terms(d).min();
    }
  }
  const double refined = 0.5 * (lo + hi);
  const Terms rt = terms(refined);
  if (rt.min() > best.min()) {
    best = rt;
    best_theta = refined;
  }

  out.theta = best_theta;
  out.term1 = best.t1;
  out.term2 = best.t2;
  out.term3 = best.t3;
  out.value = best.min();
  if (!(out.value > 0.0)) {
    out.value = 0.0;
    out.notes.push_back("no positive exponent: floored at 0");
  }
  return out;
}

}  // namespace mutualcover
