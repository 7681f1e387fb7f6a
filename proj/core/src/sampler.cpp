#include "mutualcover/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mutualcover/maxflow.hpp"
#include "mutualcover/rng.hpp"
#include "parallel.hpp"

namespace mutualcover {

namespace {

struct Codebook {
  std::vector<std::size_t> us;
  std::vector<std::size_t> vs;
};

std::size_t realization_count(const JointPmf& j, int m, int l) {
  double count = std::pow(static_cast<double>(j.rows()), m) *
                 std::pow(static_cast<double>(j.cols()), l);
  require(count <= static_cast<double>(effective_cap(kRealizationCap)),
          ErrorKind::kSizeCapExceeded,
          "codebook realization space has " + std::to_string(count) +
              " elements");
  return static_cast<std::size_t>(count);
}

void check_pair_shape(const JointPmf& j, int m, int l) {
  require(m >= 1 && l >= 1, ErrorKind::kInvalidArgument,
          "codebook sizes must be >= 1");
  require(j.atoms() <= effective_cap(kMaskAtomCap),
          ErrorKind::kSizeCapExceeded, "pair sampler needs |U||V| <= 20");
}

// Mixed radix with u_1 most significant and v_l least significant.
void decode(std::size_t r, std::size_t nu, std::size_t nv, Codebook& cb) {
  for (std::size_t p = cb.vs.size(); p-- > 0;) {
    cb.vs[p] = r % nv;
    r /= nv;
  }
  for (std::size_t p = cb.us.size(); p-- > 0;) {
    cb.us[p] = r % nu;
    r /= nu;
  }
}

std::size_t encode(const Codebook& cb, std::size_t nu, std::size_t nv) {
  std::size_t r = 0;
  for (std::size_t u : cb.us) r = r * nu + u;
  for (std::size_t v : cb.vs) r = r * nv + v;
  return r;
}

std::string codebook_key(const JointPmf& j, const Codebook& cb) {
  std::string key = "u=(";
  for (std::size_t i = 0; i < cb.us.size(); ++i)
    key += (i ? "," : "") + j.u_labels()[cb.us[i]];
  key += ");v=(";
  for (std::size_t i = 0; i < cb.vs.size(); ++i)
    key += (i ? "," : "") + j.v_labels()[cb.vs[i]];
  return key + ")";
}

double half_l1(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

void fill_weighted_row(const JointPmf& j, const Codebook& cb,
                       std::span<double> row, bool& fallback) {
  const std::size_t l = cb.vs.size();
  double total = 0.0;
  for (std::size_t i = 0; i < cb.us.size(); ++i) {
    for (std::size_t k = 0; k < l; ++k) {
      const std::size_t u = cb.us[i], v = cb.vs[k];
      const double p = j(u, v);
      const double w = p > 0.0 ? p / (j.pu()[u] * j.pv()[v]) : 0.0;
      row[i * l + k] = w;
      total += w;
    }
  }
  fallback = !(total > 0.0);
  if (fallback) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
  } else {
    for (double& x : row) x /= total;
  }
}

std::size_t draw_index(std::span<const double> row, double u) {
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] <= 0.0) continue;
    acc += row[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

template <typename RowFn>
TvEstimate mc_tv(const JointPmf& j, const CodebookSpec& spec, unsigned workers,
                 RowFn&& row_of) {
  require(spec.m >= 1 && spec.l >= 1 && spec.n_samples >= 1,
          ErrorKind::kInvalidArgument, "invalid codebook spec");
  workers = std::max(1u, workers);
  const std::size_t atoms = j.atoms();
  const DiscreteSampler su(j.pu().probs()), sv(j.pv().probs());
  std::vector<std::vector<std::uint64_t>> counts(
      workers, std::vector<std::uint64_t>(atoms, 0));
  detail::parallel_chunks(
      spec.n_samples, workers,
      [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
        Codebook cb{std::vector<std::size_t>(spec.m),
                    std::vector<std::size_t>(spec.l)};
        std::vector<double> row(static_cast<std::size_t>(spec.m) * spec.l);
        for (std::uint64_t s = begin; s < end; ++s) {
          PhiloxStream rng(spec.seed, s);
          for (auto& u : cb.us) u = su.draw(rng.uniform());
          for (auto& v : cb.vs) v = sv.draw(rng.uniform());
          const auto r = row_of(cb, std::span<double>(row));
          const std::size_t idx = draw_index(r, rng.uniform());
          const std::size_t i = idx / spec.l, k = idx % spec.l;
          ++counts[w][cb.us[i] * j.cols() + cb.vs[k]];
        }
      });
  std::vector<double> freq(atoms, 0.0);
  const double n = static_cast<double>(spec.n_samples);
  for (std::size_t a = 0; a < atoms; ++a) {
    std::uint64_t c = 0;
    for (const auto& wc : counts) c += wc[a];
    freq[a] = static_cast<double>(c) / n;
  }
  TvEstimate out;
  out.estimate.mean = half_l1(freq, j.data());
  out.estimate.std_error = std::sqrt(1.0 / (2.0 * n));
  out.estimate.n_samples = spec.n_samples;
  out.estimate.seed = spec.seed;
  out.estimate.worker_count = workers;
  out.bias_bound = std::sqrt(static_cast<double>(atoms) / (2.0 * n));
  return out;
}

}  // namespace

std::size_t SelectionRule::flagged_rows() const {
  return static_cast<std::size_t>(
      std::count(flagged.begin(), flagged.end(), 1));
}

KTypeQuantization quantize(std::span<const double> probs, std::int64_t k) {
  require(k >= 1, ErrorKind::kInvalidArgument, "k must be >= 1");
  double total = 0.0;
  for (double p : probs) {
    require(p >= 0.0 && std::isfinite(p), ErrorKind::kNegativeEntry,
            "quantize needs nonnegative finite masses");
    total += p;
  }
  require(total > 0.0, ErrorKind::kNotNormalized, "quantize needs mass > 0");
  KTypeQuantization q;
  q.k = k;
  q.counts.resize(probs.size());
  std::vector<double> rem(probs.size());
  std::int64_t used = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double scaled = static_cast<double>(k) * probs[i] / total;
    const double fl = std::floor(scaled);
    q.counts[i] = static_cast<std::int64_t>(fl);
    rem[i] = scaled - fl;
    used += q.counts[i];
  }
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; used < k; ++i, ++used) ++q.counts[order[i % order.size()]];
  return q;
}

SamplerResult select_from_sequence(const SequenceLaw& law, const Pmf& target,
                                   std::int64_t k) {
  require(k >= 1000, ErrorKind::kInvalidArgument, "k must be at least 1000");
  require(target.size() == law.alphabet, ErrorKind::kShapeMismatch,
          "target alphabet differs from the sequence alphabet");
  require(law.sequences.size() == law.probs.size() && !law.probs.empty(),
          ErrorKind::kShapeMismatch, "one probability per realization");
  require(law.keys.empty() || law.keys.size() == law.sequences.size(),
          ErrorKind::kShapeMismatch, "one key per realization");
  const std::size_t nr = law.sequences.size(), na = law.alphabet;
  require(static_cast<double>(nr) * static_cast<double>(law.length) <=
              static_cast<double>(effective_cap(kSequenceCap)),
          ErrorKind::kSizeCapExceeded,
          "realization space times N exceeds the sequence cap");
  for (const auto& seq : law.sequences) {
    require(seq.size() == law.length, ErrorKind::kShapeMismatch,
            "sequence length differs from N");
    for (std::size_t z : seq)
      require(z < na, ErrorKind::kShapeMismatch, "symbol out of range");
  }

  const auto q = quantize(law.probs, k);
  const auto t = quantize(target.probs(), k);

  FlowNetwork net(nr + na + 2);
  const std::size_t source = 0, sink = nr + na + 1;
  const auto rnode = [](std::size_t r) { return 1 + r; };
  const auto znode = [nr](std::size_t z) { return 1 + nr + z; };

  // first[r][z]: first index carrying symbol z, or npos.
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> first(nr);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> arcs(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    net.add_edge(source, rnode(r), q.counts[r]);
    first[r].assign(na, npos);
    for (std::size_t i = 0; i < law.length; ++i)
      if (first[r][law.sequences[r][i]] == npos) first[r][law.sequences[r][i]] = i;
    for (std::size_t z = 0; z < na; ++z)
      if (first[r][z] != npos)
        arcs[r].push_back({z, net.add_edge(rnode(r), znode(z), k)});
  }
  std::vector<std::size_t> to_sink(na);
  for (std::size_t z = 0; z < na; ++z)
    to_sink[z] = net.add_edge(znode(z), sink, t.counts[z]);

  const auto matched = net.solve(source, sink);
  const std::int64_t deficiency = k - matched;

  // Mass that cannot be matched within the targets is routed through an
  // overflow node whose sink capacity is exactly the deficiency.
  std::vector<std::size_t> to_overflow(nr, npos);
  if (deficiency > 0) {
    const std::size_t over = net.add_node();
    for (std::size_t r = 0; r < nr; ++r)
      if (q.counts[r] > 0)
        to_overflow[r] =
            net.add_edge(rnode(r), over, std::min(q.counts[r], deficiency));
    net.add_edge(over, sink, deficiency);
    const auto extra = net.solve(source, sink);
    require(matched + extra == k, ErrorKind::kInfeasibleFlow,
            "overflow network did not route all mass");
  }

  SamplerResult out;
  out.k = k;
  out.quantized_gap = static_cast<double>(deficiency) / static_cast<double>(k);
  out.overflow_units = deficiency;
  out.network_edges = net.edges();

  std::vector<std::int64_t> deficit(na);
  for (std::size_t z = 0; z < na; ++z)
    deficit[z] = t.counts[z] - net.flow(to_sink[z]);

  SelectionRule& rule = out.rule;
  rule.indices = law.length;
  rule.probs.assign(nr * law.length, 0.0);
  rule.flagged.assign(nr, 0);
  rule.keys.resize(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    if (law.keys.empty()) {
      std::string key = "(";
      for (std::size_t i = 0; i < law.length; ++i)
        key += (i ? "," : "") + target.labels()[law.sequences[r][i]];
      rule.keys[r] = key + ")";
    } else {
      rule.keys[r] = law.keys[r];
    }
    auto row = std::span<double>(rule.probs).subspan(r * law.length, law.length);
    if (q.counts[r] == 0) {
      row[0] = 1.0;
      rule.flagged[r] = 1;
      continue;
    }
    const double qr = static_cast<double>(q.counts[r]);
    for (const auto& [z, e] : arcs[r])
      row[first[r][z]] += static_cast<double>(net.flow(e)) / qr;
    if (to_overflow[r] != npos && net.flow(to_overflow[r]) > 0) {
      const auto amount = net.flow(to_overflow[r]);
      std::size_t pick = arcs[r].front().first;
      for (const auto& [z, e] : arcs[r])
        if (deficit[z] > deficit[pick]) pick = z;
      deficit[pick] -= amount;
      row[first[r][pick]] += static_cast<double>(amount) / qr;
      rule.flagged[r] = 1;
    }
  }

  const auto produced = output_distribution(law, rule);
  out.achieved_tv = half_l1(produced, target.probs());
  return out;
}

std::vector<double> output_distribution(const SequenceLaw& law,
                                        const SelectionRule& rule) {
  require(rule.realizations() == law.sequences.size() &&
              rule.indices == law.length,
          ErrorKind::kShapeMismatch, "rule shape differs from the law");
  std::vector<double> out(law.alphabet, 0.0);
  for (std::size_t r = 0; r < law.sequences.size(); ++r)
    for (std::size_t i = 0; i < law.length; ++i)
      out[law.sequences[r][i]] += law.probs[r] * rule(r, i);
  return out;
}

SequenceLaw pair_sequence_law(const JointPmf& j, int m, int l) {
  check_pair_shape(j, m, l);
  const std::size_t nr = realization_count(j, m, l);
  const std::size_t nu = j.rows(), nv = j.cols();
  SequenceLaw law;
  law.alphabet = j.atoms();
  law.length = static_cast<std::size_t>(m) * static_cast<std::size_t>(l);
  law.sequences.resize(nr);
  law.probs.resize(nr);
  law.keys.resize(nr);
  Codebook cb{std::vector<std::size_t>(m), std::vector<std::size_t>(l)};
  for (std::size_t r = 0; r < nr; ++r) {
    decode(r, nu, nv, cb);
    double p = 1.0;
    for (std::size_t u : cb.us) p *= j.pu()[u];
    for (std::size_t v : cb.vs) p *= j.pv()[v];
    law.probs[r] = p;
    auto& seq = law.sequences[r];
    seq.resize(law.length);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < l; ++k) seq[i * l + k] = cb.us[i] * nv + cb.vs[k];
    law.keys[r] = codebook_key(j, cb);
  }
  return law;
}

SamplerResult optimal_pair_sampler(const JointPmf& j, int m, int l,
                                   std::int64_t k) {
  const auto law = pair_sequence_law(j, m, l);
  Labels pair_labels;
  for (const auto& u : j.u_labels())
    for (const auto& v : j.v_labels()) pair_labels.push_back(u + "," + v);
  const auto target = Pmf::make(std::move(pair_labels),
                                {j.data().begin(), j.data().end()});
  auto out = select_from_sequence(law, target, k);
  out.achieved_tv = exact_tv_of_rule(j, out.rule, m, l);
  return out;
}

SelectionRule weighted_sampler_rule(const JointPmf& j, int m, int l) {
  check_pair_shape(j, m, l);
  const std::size_t nr = realization_count(j, m, l);
  SelectionRule rule;
  rule.indices = static_cast<std::size_t>(m) * static_cast<std::size_t>(l);
  rule.keys.resize(nr);
  rule.probs.resize(nr * rule.indices);
  rule.flagged.assign(nr, 0);
  Codebook cb{std::vector<std::size_t>(m), std::vector<std::size_t>(l)};
  for (std::size_t r = 0; r < nr; ++r) {
    decode(r, j.rows(), j.cols(), cb);
    rule.keys[r] = codebook_key(j, cb);
    bool fallback = false;
    fill_weighted_row(
        j, cb,
        std::span<double>(rule.probs).subspan(r * rule.indices, rule.indices),
        fallback);
    rule.flagged[r] = fallback;
  }
  return rule;
}

double exact_tv_of_rule(const JointPmf& j, const SelectionRule& rule, int m,
                        int l) {
  check_pair_shape(j, m, l);
  const std::size_t nr = realization_count(j, m, l);
  require(rule.realizations() == nr &&
              rule.indices == static_cast<std::size_t>(m) * l,
          ErrorKind::kShapeMismatch, "rule shape differs from the codebook");
  std::vector<double> out(j.atoms(), 0.0);
  Codebook cb{std::vector<std::size_t>(m), std::vector<std::size_t>(l)};
  for (std::size_t r = 0; r < nr; ++r) {
    decode(r, j.rows(), j.cols(), cb);
    double p = 1.0;
    for (std::size_t u : cb.us) p *= j.pu()[u];
    for (std::size_t v : cb.vs) p *= j.pv()[v];
    if (p == 0.0) continue;
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < l; ++k)
        out[cb.us[i] * j.cols() + cb.vs[k]] += p * rule(r, i * l + k);
  }
  return half_l1(out, j.data());
}

TvEstimate mc_tv_of_rule(const JointPmf& j, const SelectionRule& rule,
                         const CodebookSpec& spec, unsigned workers) {
  check_pair_shape(j, spec.m, spec.l);
  const std::size_t nr = realization_count(j, spec.m, spec.l);
  require(rule.realizations() == nr &&
              rule.indices == static_cast<std::size_t>(spec.m) * spec.l,
          ErrorKind::kShapeMismatch, "rule shape differs from the codebook");
  return mc_tv(j, spec, workers, [&](const Codebook& cb, std::span<double>) {
    return rule.row(encode(cb, j.rows(), j.cols()));
  });
}

TvEstimate mc_tv_weighted(const JointPmf& j, const CodebookSpec& spec,
                          unsigned workers) {
  return mc_tv(j, spec, workers,
               [&](const Codebook& cb, std::span<double> row) {
                 bool fallback = false;
                 fill_weighted_row(j, cb, row, fallback);
                 return std::span<const double>(row);
               });
}

DualityReport duality_check(const JointPmf& j, int m, int l, std::int64_t k,
                            unsigned workers) {
  DualityReport rep;
  const auto worst = worstcase_gap_exact(j, m, l, workers);
  rep.sup_side = worst.gap;
  rep.worst_set = worst.argmax;
  rep.sampler = optimal_pair_sampler(j, m, l, k);
  rep.inf_side = rep.sampler.achieved_tv;
  const double nr = static_cast<double>(rep.sampler.rule.realizations());
  rep.slack = 4.0 * (static_cast<double>(j.atoms()) + nr) / static_cast<double>(k);
  rep.ordered = rep.sup_side <= rep.inf_side + 1e-12;
  rep.within_slack = std::abs(rep.sup_side - rep.inf_side) <= rep.slack;
  return rep;
}

}  // namespace mutualcover
