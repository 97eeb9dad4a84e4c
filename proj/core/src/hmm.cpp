#include "tnprob/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "tnprob/autodiff.hpp"
#include "tnprob/rng.hpp"

namespace tnprob {

Family family_from_name(const std::string& name) {
  if (name == "ugm") return Family::UgmMixture;
  if (name == "dbm") return Family::DbmMixture;
  throw LearnError("unknown family: " + name);
}

std::string family_name(Family f) {
  return f == Family::UgmMixture ? "ugm" : "dbm";
}

namespace {

void append_tables(std::vector<double>& out, const HmmTables& t) {
  out.insert(out.end(), t.log_trans.begin(), t.log_trans.end());
  out.insert(out.end(), t.log_emit.begin(), t.log_emit.end());
  out.insert(out.end(), t.log_init.begin(), t.log_init.end());
}

std::size_t read_tables(HmmTables& t, std::span<const double> flat,
                        std::size_t off, std::size_t n, std::size_t d) {
  t.log_trans.assign(flat.begin() + static_cast<std::ptrdiff_t>(off),
                     flat.begin() + static_cast<std::ptrdiff_t>(off + n * n));
  off += n * n;
  t.log_emit.assign(flat.begin() + static_cast<std::ptrdiff_t>(off),
                    flat.begin() + static_cast<std::ptrdiff_t>(off + n * d));
  off += n * d;
  t.log_init.assign(flat.begin() + static_cast<std::ptrdiff_t>(off),
                    flat.begin() + static_cast<std::ptrdiff_t>(off + n));
  return off + n;
}

}  // namespace

std::vector<double> HmmMixtureParams::flatten() const {
  std::vector<double> out;
  out.reserve(param_count());
  if (family == Family::UgmMixture) {
    append_tables(out, phi1);
    append_tables(out, phi2);
  } else {
    append_tables(out, phi3);
    append_tables(out, theta3);
  }
  out.push_back(mix_logit);
  return out;
}

void HmmMixtureParams::unflatten(std::span<const double> flat) {
  if (flat.size() != param_count())
    throw LearnError("flat parameter vector has wrong length");
  std::size_t off = 0;
  if (family == Family::UgmMixture) {
    off = read_tables(phi1, flat, off, hidden_dim, alphabet);
    off = read_tables(phi2, flat, off, hidden_dim, alphabet);
  } else {
    off = read_tables(phi3, flat, off, hidden_dim, alphabet);
    off = read_tables(theta3, flat, off, hidden_dim, alphabet);
  }
  mix_logit = flat[off];
}

HmmMixtureParams init_params(Family family, std::size_t hidden_dim,
                             std::size_t alphabet, std::size_t seq_len,
                             std::uint64_t seed) {
  if (hidden_dim < 1 || alphabet < 1 || seq_len < 1)
    throw LearnError("invalid model dimensions");
  HmmMixtureParams p;
  p.family = family;
  p.hidden_dim = hidden_dim;
  p.alphabet = alphabet;
  p.seq_len = seq_len;
  Rng rng(seed);
  auto fill_normal = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (auto& x : v) x = rng.normal();
  };
  auto fill_uniform = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (auto& x : v) x = rng.uniform01();
  };
  const std::size_t nn = hidden_dim * hidden_dim;
  const std::size_t nd = hidden_dim * alphabet;
  if (family == Family::UgmMixture) {
    fill_normal(p.phi1.log_trans, nn);
    fill_normal(p.phi1.log_emit, nd);
    fill_normal(p.phi1.log_init, hidden_dim);
    fill_normal(p.phi2.log_trans, nn);
    fill_normal(p.phi2.log_emit, nd);
    fill_normal(p.phi2.log_init, hidden_dim);
  } else {
    fill_normal(p.phi3.log_trans, nn);
    fill_normal(p.phi3.log_emit, nd);
    fill_normal(p.phi3.log_init, hidden_dim);
    fill_uniform(p.theta3.log_trans, nn);
    fill_uniform(p.theta3.log_emit, nd);
    fill_uniform(p.theta3.log_init, hidden_dim);
  }
  p.mix_logit = rng.normal();
  return p;
}

// ---------------------------------------------------------------------------
// Likelihood engines, templated over the scalar (double for evaluation,
// ad::Var for gradients). Tables are exponentiated once with a constant
// max-shift folded into `shift`, so gradients stay exact and values finite.
// ---------------------------------------------------------------------------

namespace {

using ad::softplus;
using ad::value_of;
using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <class S>
using CS = ad::Cplx<S>;

double max_value(std::span<const double> v) {
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  return m;
}

template <class S>
struct TablesT {
  std::vector<S> log_trans, log_emit, log_init;
};

template <class S>
S logsumexp2(const S& a, const S& b) {
  const double m = std::max(value_of(a), value_of(b));
  return m + log(exp(a - m) + exp(b - m));
}

/// Forward pass for the unnormalized-potential chain in the linear domain
/// with per-step rescaling. logw(seq) and logz() both include `shift`, so
/// their difference is the exact log marginal probability.
template <class S>
struct RealChain {
  std::size_t n, d, t_len;
  std::vector<S> tlin, hlin, vlin;  // exp(log - max)
  std::vector<S> esum;              // per-state emission sums (for Z)
  double shift;

  RealChain(const TablesT<S>& tab, std::span<const double> raw_trans,
            std::span<const double> raw_emit, std::span<const double> raw_init,
            std::size_t n_, std::size_t d_, std::size_t t)
      : n(n_), d(d_), t_len(t) {
    const double mt = n > 0 ? max_value(raw_trans) : 0.0;
    const double mh = max_value(raw_emit);
    const double mv = max_value(raw_init);
    shift = mv + static_cast<double>(t_len - 1) * mt +
            static_cast<double>(t_len) * mh;
    tlin.reserve(n * n);
    for (const auto& x : tab.log_trans) tlin.push_back(exp(x - mt));
    hlin.reserve(n * d);
    for (const auto& x : tab.log_emit) hlin.push_back(exp(x - mh));
    vlin.reserve(n);
    for (const auto& x : tab.log_init) vlin.push_back(exp(x - mv));
    for (std::size_t h = 0; h < n; ++h) {
      S s = hlin[h * d];
      for (std::size_t o = 1; o < d; ++o) s = s + hlin[h * d + o];
      esum.push_back(s);
    }
  }

  // emit(h, t) must return the per-state factor for step t.
  template <class EmitFn>
  S forward(EmitFn emit) const {
    std::vector<S> f(n);
    for (std::size_t h = 0; h < n; ++h) f[h] = vlin[h] * emit(h, 0);
    S acc = rescale(f);
    std::vector<S> g(n);
    for (std::size_t step = 1; step < t_len; ++step) {
      for (std::size_t k = 0; k < n; ++k) {
        S s = f[0] * tlin[0 * n + k];
        for (std::size_t h = 1; h < n; ++h) s = s + f[h] * tlin[h * n + k];
        g[k] = s * emit(k, step);
      }
      f = g;
      acc = acc + rescale(f);
    }
    return acc + shift;
  }

  S logw(std::span<const std::uint8_t> seq) const {
    return forward([&](std::size_t h, std::size_t step) {
      return hlin[h * d + (seq[step] - 1)];
    });
  }

  S logz() const {
    return forward([&](std::size_t h, std::size_t) { return esum[h]; });
  }

 private:
  S rescale(std::vector<S>& f) const {
    S s = f[0];
    for (std::size_t h = 1; h < n; ++h) s = s + f[h];
    if (!(value_of(s) > 0.0) || !std::isfinite(value_of(s)))
      throw LearnError("non-finite or zero forward message");
    const S inv = 1.0 / s;
    for (auto& x : f) x = x * inv;
    return log(s);
  }
};

/// Born-machine component on the same chain: complex amplitude forward pass
/// for |psi(O)|^2 and a density-matrix pass for the normalizer
/// sum_O |psi(O)|^2. Cores are exp(2*pi*i*theta) * sqrt(exp(log_phi)); the
/// half-shift makes |core|^2 match the RealChain shift exactly.
template <class S>
struct BornChain {
  std::size_t n, d, t_len;
  std::vector<CS<S>> tlin, hlin, vlin;
  std::vector<CS<S>> e;  // E[g,g'] = sum_o H[g,o] conj(H[g',o])
  double shift;

  BornChain(const TablesT<S>& mag, const TablesT<S>& theta,
            std::span<const double> raw_trans, std::span<const double> raw_emit,
            std::span<const double> raw_init, std::size_t n_, std::size_t d_,
            std::size_t t)
      : n(n_), d(d_), t_len(t) {
    const double mt = max_value(raw_trans);
    const double mh = max_value(raw_emit);
    const double mv = max_value(raw_init);
    shift = mv + static_cast<double>(t_len - 1) * mt +
            static_cast<double>(t_len) * mh;
    auto core = [](const S& lphi, const S& th, double m) {
      const S mag = exp((lphi - m) * 0.5);
      const S ang = th * (2.0 * std::numbers::pi);
      return CS<S>{mag * cos(ang), mag * sin(ang)};
    };
    for (std::size_t i = 0; i < n * n; ++i)
      tlin.push_back(core(mag.log_trans[i], theta.log_trans[i], mt));
    for (std::size_t i = 0; i < n * d; ++i)
      hlin.push_back(core(mag.log_emit[i], theta.log_emit[i], mh));
    for (std::size_t i = 0; i < n; ++i)
      vlin.push_back(core(mag.log_init[i], theta.log_init[i], mv));
    e.resize(n * n);
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t g2 = 0; g2 < n; ++g2) {
        CS<S> s = hlin[g * d] * conj(hlin[g2 * d]);
        for (std::size_t o = 1; o < d; ++o)
          s = s + hlin[g * d + o] * conj(hlin[g2 * d + o]);
        e[g * n + g2] = s;
      }
  }

  S log_amp2(std::span<const std::uint8_t> seq) const {
    std::vector<CS<S>> f(n);
    for (std::size_t h = 0; h < n; ++h)
      f[h] = vlin[h] * hlin[h * d + (seq[0] - 1)];
    S acc = rescale_amp(f);
    std::vector<CS<S>> g(n);
    for (std::size_t step = 1; step < t_len; ++step) {
      for (std::size_t k = 0; k < n; ++k) {
        CS<S> s = f[0] * tlin[0 * n + k];
        for (std::size_t h = 1; h < n; ++h) s = s + f[h] * tlin[h * n + k];
        g[k] = s * hlin[k * d + (seq[step] - 1)];
      }
      f = g;
      acc = acc + rescale_amp(f);
    }
    CS<S> psi = f[0];
    for (std::size_t h = 1; h < n; ++h) psi = psi + f[h];
    return acc + log(psi.abs2() + 1e-300) + shift;
  }

  S logz() const {
    std::vector<CS<S>> rho(n * n);
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t h2 = 0; h2 < n; ++h2)
        rho[h * n + h2] = vlin[h] * conj(vlin[h2]) * e[h * n + h2];
    S acc = rescale_rho(rho);
    std::vector<CS<S>> a(n * n), b(n * n);
    for (std::size_t step = 1; step < t_len; ++step) {
      // rho' = (T^T rho T*) o E, done as two matrix products.
      for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h2 = 0; h2 < n; ++h2) {
          CS<S> s = tlin[0 * n + g] * rho[0 * n + h2];
          for (std::size_t h = 1; h < n; ++h)
            s = s + tlin[h * n + g] * rho[h * n + h2];
          a[g * n + h2] = s;
        }
      for (std::size_t g = 0; g < n; ++g)
        for (std::size_t g2 = 0; g2 < n; ++g2) {
          CS<S> s = a[g * n + 0] * conj(tlin[0 * n + g2]);
          for (std::size_t h2 = 1; h2 < n; ++h2)
            s = s + a[g * n + h2] * conj(tlin[h2 * n + g2]);
          b[g * n + g2] = s * e[g * n + g2];
        }
      rho = b;
      acc = acc + rescale_rho(rho);
    }
    S z = rho[0].re;
    bool started = false;
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t h2 = 0; h2 < n; ++h2) {
        if (!started) {
          z = rho[h * n + h2].re;
          started = true;
        } else {
          z = z + rho[h * n + h2].re;
        }
      }
    return acc + log(z) + shift;  // squared cores carry exp(-shift) in total
  }

 private:
  S rescale_amp(std::vector<CS<S>>& f) const {
    S s = f[0].abs2();
    for (std::size_t h = 1; h < f.size(); ++h) s = s + f[h].abs2();
    if (!(value_of(s) > 0.0) || !std::isfinite(value_of(s)))
      throw LearnError("non-finite or zero amplitude message");
    const S inv = 1.0 / sqrt(s);
    for (auto& x : f) x = x * inv;
    return log(s);
  }
  S rescale_rho(std::vector<CS<S>>& rho) const {
    S tr = rho[0].re;
    for (std::size_t h = 1; h < n; ++h) tr = tr + rho[h * n + h].re;
    if (!(value_of(tr) > 0.0) || !std::isfinite(value_of(tr)))
      throw LearnError("non-finite or zero density trace");
    const S inv = 1.0 / tr;
    for (auto& x : rho) x = x * inv;
    return log(tr);
  }
};

template <class S>
struct MixtureEngine {
  Family family;
  std::unique_ptr<RealChain<S>> c1, c2;
  std::unique_ptr<BornChain<S>> cb;
  S log_z1, log_z2;
  S log_lambda, log_1m_lambda;

  MixtureEngine(Family fam, const TablesT<S>& set1, const TablesT<S>& set2,
                const S& mix_logit, const HmmMixtureParams& raw)
      : family(fam),
        log_z1(S{}),
        log_z2(S{}),
        log_lambda(S{}),
        log_1m_lambda(S{}) {
    const std::size_t n = raw.hidden_dim, d = raw.alphabet, t = raw.seq_len;
    if (family == Family::UgmMixture) {
      c1 = std::make_unique<RealChain<S>>(set1, raw.phi1.log_trans,
                                          raw.phi1.log_emit, raw.phi1.log_init,
                                          n, d, t);
      c2 = std::make_unique<RealChain<S>>(set2, raw.phi2.log_trans,
                                          raw.phi2.log_emit, raw.phi2.log_init,
                                          n, d, t);
      log_z2 = c2->logz();
    } else {
      c1 = std::make_unique<RealChain<S>>(set1, raw.phi3.log_trans,
                                          raw.phi3.log_emit, raw.phi3.log_init,
                                          n, d, t);
      cb = std::make_unique<BornChain<S>>(set1, set2, raw.phi3.log_trans,
                                          raw.phi3.log_emit, raw.phi3.log_init,
                                          n, d, t);
      log_z2 = cb->logz();
    }
    log_z1 = c1->logz();
    log_lambda = 0.0 - softplus(0.0 - mix_logit);
    log_1m_lambda = 0.0 - softplus(mix_logit);
  }

  S seq_log_prob(std::span<const std::uint8_t> seq) const {
    const S lp1 = log_lambda + c1->logw(seq) - log_z1;
    const S lp2 = family == Family::UgmMixture
                      ? log_1m_lambda + c2->logw(seq) - log_z2
                      : log_1m_lambda + cb->log_amp2(seq) - log_z2;
    return logsumexp2(lp1, lp2);
  }
};

TablesT<double> as_tables(const HmmTables& t) {
  return TablesT<double>{t.log_trans, t.log_emit, t.log_init};
}

void check_sequence(const HmmMixtureParams& p,
                    std::span<const std::uint8_t> seq) {
  if (seq.size() != p.seq_len)
    throw LearnError("sequence length does not match the model");
  for (auto s : seq)
    if (s < 1 || s > p.alphabet) throw LearnError("symbol out of range");
}

MixtureEngine<double> make_double_engine(const HmmMixtureParams& p) {
  if (p.family == Family::UgmMixture)
    return MixtureEngine<double>(p.family, as_tables(p.phi1), as_tables(p.phi2),
                                 p.mix_logit, p);
  return MixtureEngine<double>(p.family, as_tables(p.phi3), as_tables(p.theta3),
                               p.mix_logit, p);
}

std::map<std::vector<std::uint8_t>, std::size_t> dedup_weights(
    const SequenceDataset& ds) {
  std::map<std::vector<std::uint8_t>, std::size_t> w;
  for (const auto& s : ds.sequences) ++w[s];
  return w;
}

}  // namespace

double mixture_log_prob(const HmmMixtureParams& p,
                        std::span<const std::uint8_t> seq) {
  check_sequence(p, seq);
  MixtureEngine<double> eng = make_double_engine(p);
  return eng.seq_log_prob(seq);
}

double mixture_prob(const HmmMixtureParams& p,
                    std::span<const std::uint8_t> seq) {
  return std::exp(mixture_log_prob(p, seq));
}

double nll(const HmmMixtureParams& p, const SequenceDataset& ds) {
  if (ds.sequences.empty()) throw LearnError("empty dataset");
  MixtureEngine<double> eng = make_double_engine(p);
  double total = 0.0;
  for (std::size_t i = 0; i < ds.sequences.size(); ++i) {
    check_sequence(p, ds.sequences[i]);
    const double lp = eng.seq_log_prob(ds.sequences[i]);
    if (!std::isfinite(lp))
      throw LearnError("zero-probability sequence",
                       static_cast<std::ptrdiff_t>(i));
    total -= lp;
  }
  return total / static_cast<double>(ds.sequences.size());
}

NllGradient nll_grad(const HmmMixtureParams& p, const SequenceDataset& ds) {
  if (ds.sequences.empty()) throw LearnError("empty dataset");
  ad::Tape tape;
  const std::vector<double> flat = p.flatten();
  std::vector<ad::Var> leaves;
  leaves.reserve(flat.size());
  for (double v : flat) leaves.push_back(ad::make_var(tape, v));

  const std::size_t nn = p.hidden_dim * p.hidden_dim;
  const std::size_t nd = p.hidden_dim * p.alphabet;
  auto take_tables = [&](std::size_t off, TablesT<ad::Var>& t) {
    t.log_trans.assign(leaves.begin() + static_cast<std::ptrdiff_t>(off),
                       leaves.begin() + static_cast<std::ptrdiff_t>(off + nn));
    off += nn;
    t.log_emit.assign(leaves.begin() + static_cast<std::ptrdiff_t>(off),
                      leaves.begin() + static_cast<std::ptrdiff_t>(off + nd));
    off += nd;
    t.log_init.assign(
        leaves.begin() + static_cast<std::ptrdiff_t>(off),
        leaves.begin() + static_cast<std::ptrdiff_t>(off + p.hidden_dim));
    return off + p.hidden_dim;
  };
  TablesT<ad::Var> set1, set2;
  std::size_t off = take_tables(0, set1);
  off = take_tables(off, set2);
  const ad::Var logit = leaves[off];

  MixtureEngine<ad::Var> eng(p.family, set1, set2, logit, p);
  ad::Var loss = ad::make_var(tape, 0.0);
  std::size_t index = 0;
  for (const auto& [seq, count] : dedup_weights(ds)) {
    check_sequence(p, seq);
    const ad::Var lp = eng.seq_log_prob(seq);
    if (!std::isfinite(lp.val()))
      throw LearnError("zero-probability sequence",
                       static_cast<std::ptrdiff_t>(index));
    loss = loss - lp * static_cast<double>(count);
    ++index;
  }
  loss = loss / static_cast<double>(ds.sequences.size());

  NllGradient out;
  out.value = loss.val();
  const std::vector<double> adj = tape.gradient(loss.idx);
  out.grad.resize(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i)
    out.grad[i] = adj[static_cast<std::size_t>(leaves[i].idx)];
  return out;
}

// ---------------------------------------------------------------------------
// Chain networks for cross-checking against the models machinery.
// ---------------------------------------------------------------------------

namespace {

const HmmTables& component_tables(const HmmMixtureParams& p, int component) {
  switch (component) {
    case 1:
      return p.family == Family::UgmMixture ? p.phi1 : p.phi3;
    case 2:
      if (p.family != Family::UgmMixture)
        throw LearnError("component 2 requires the UGM mixture family");
      return p.phi2;
    default:
      throw LearnError("component must be 1 or 2");
  }
}

DenseTensor real_table(std::span<const double> logvals,
                       std::vector<std::size_t> shape) {
  std::vector<double> v(logvals.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(logvals[i]);
  return DenseTensor::from_real(std::move(shape), v);
}

}  // namespace

Ugm build_hmm_ugm(const HmmMixtureParams& p, int component) {
  const HmmTables& t = component_tables(p, component);
  const std::size_t n = p.hidden_dim, d = p.alphabet, tl = p.seq_len;
  std::vector<Distribution::Variable> vars;
  for (std::size_t i = 1; i <= tl; ++i)
    vars.push_back({"h" + std::to_string(i), n});
  for (std::size_t i = 1; i <= tl; ++i)
    vars.push_back({"o" + std::to_string(i), d});
  std::vector<CliqueSpec> cliques;
  cliques.push_back({{"h1"}, real_table(t.log_init, {n})});
  for (std::size_t i = 1; i < tl; ++i)
    cliques.push_back({{"h" + std::to_string(i), "h" + std::to_string(i + 1)},
                       real_table(t.log_trans, {n, n})});
  for (std::size_t i = 1; i <= tl; ++i)
    cliques.push_back({{"h" + std::to_string(i), "o" + std::to_string(i)},
                       real_table(t.log_emit, {n, d})});
  return ugm_from_cliques(vars, cliques);
}

BornMachine build_hmm_bm(const HmmMixtureParams& p) {
  if (p.family != Family::DbmMixture)
    throw LearnError("build_hmm_bm requires the DBM mixture family");
  const std::size_t n = p.hidden_dim, d = p.alphabet, tl = p.seq_len;
  auto core = [&](std::span<const double> lphi, std::span<const double> th,
                  std::vector<std::size_t> shape) {
    std::vector<cplx> v(lphi.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double mag = std::exp(0.5 * lphi[i]);
      const double ang = 2.0 * std::numbers::pi * th[i];
      v[i] = cplx{mag * std::cos(ang), mag * std::sin(ang)};
    }
    return DenseTensor(std::move(shape), std::move(v));
  };
  TensorNetwork net;
  auto add_node = [&](const std::string& id, DenseTensor c,
                      std::vector<std::string> modes) {
    net.graph.nodes.push_back(id);
    net.cores[id] = std::move(c);
    net.mode_edges[id] = std::move(modes);
  };
  auto add_hidden = [&](const std::string& id, const std::string& a,
                        const std::string& b, std::size_t dim) {
    net.graph.edges.push_back(Edge{id, {a, b}, dim});
  };
  // Latent chain variables become copy-tensor nodes with no visible edge,
  // so hidden paths are summed at the amplitude level.
  add_node("init", core(p.phi3.log_init, p.theta3.log_init, {n}),
           {"e.init.h1"});
  add_hidden("e.init.h1", "init", "h1", n);
  for (std::size_t i = 1; i <= tl; ++i) {
    const std::string hi = "h" + std::to_string(i);
    std::vector<std::string> modes;
    if (i == 1)
      modes.push_back("e.init.h1");
    else
      modes.push_back("e.t" + std::to_string(i - 1) + "." + hi);
    if (i < tl) {
      const std::string tn = "t" + std::to_string(i);
      const std::string hj = "h" + std::to_string(i + 1);
      add_node(tn, core(p.phi3.log_trans, p.theta3.log_trans, {n, n}),
               {"e." + hi + "." + tn, "e." + tn + "." + hj});
      add_hidden("e." + hi + "." + tn, hi, tn, n);
      add_hidden("e." + tn + "." + hj, tn, hj, n);
      modes.push_back("e." + hi + "." + tn);
    }
    const std::string en = "m" + std::to_string(i);
    add_node(en, core(p.phi3.log_emit, p.theta3.log_emit, {n, d}),
             {"e." + hi + "." + en, "o" + std::to_string(i)});
    add_hidden("e." + hi + "." + en, hi, en, n);
    net.graph.edges.push_back(Edge{"o" + std::to_string(i), {en}, d});
    net.graph.visible_order.push_back("o" + std::to_string(i));
    modes.push_back("e." + hi + "." + en);
    add_node(hi, copy_tensor(modes.size(), n), modes);
  }
  BornMachine bm{std::move(net)};
  ValidationReport rep = validate_model(Model{bm});
  if (!rep.ok()) throw LearnError("invalid chain BM:\n" + rep.to_string());
  return bm;
}

}  // namespace tnprob
