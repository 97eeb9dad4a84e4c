#include "tnprob/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tnprob/hmm.hpp"

namespace tnprob {

std::string SuiteResult::to_string() const {
  std::ostringstream os;
  os << "suite " << suite << " (trials=" << trials << ")";
  if (vacuous) {
    os << ": WARNING vacuous pass, 0 trials\n";
    return os.str();
  }
  os << "\n";
  for (const auto& c : checks) {
    os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name
       << ": residual " << c.residual << " vs bound " << c.bound;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

double dist_residual(const Distribution& p, const Distribution& q) {
  if (p.table.size() != q.table.size())
    throw ModelError("distributions have different sizes");
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < p.table.size(); ++i) {
    scale = std::max({scale, p.table[i], q.table[i]});
    diff = std::max(diff, std::abs(p.table[i] - q.table[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

// ---------------------------------------------------------------------------
// Random model generators
// ---------------------------------------------------------------------------

namespace {

struct NetOpts {
  std::size_t max_nodes = 5;
  std::size_t max_dim = 3;
  bool every_node_visible = false;
  bool nonneg = false;
};

DenseTensor random_core(Rng& rng, std::vector<std::size_t> shape, bool nonneg) {
  DenseTensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = nonneg ? cplx{rng.uniform01(), 0.0}
                  : cplx{rng.normal(), rng.normal()};
  return t;
}

TensorNetwork random_network(Rng& rng, const NetOpts& o) {
  TensorNetwork net;
  const std::size_t n = 1 + rng.below(o.max_nodes);
  std::map<std::string, std::vector<std::string>> inc;
  std::map<std::string, std::size_t> dim_of;
  for (std::size_t i = 0; i < n; ++i) {
    net.graph.nodes.push_back("n" + std::to_string(i));
    inc[net.graph.nodes.back()];
  }
  auto add_edge = [&](const std::string& id, std::vector<std::string> nodes,
                      std::size_t dim) {
    dim_of[id] = dim;
    for (const auto& v : nodes) inc[v].push_back(id);
    net.graph.edges.push_back(Edge{id, std::move(nodes), dim});
  };
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t p = rng.below(i);
    add_edge("h" + std::to_string(i),
             {"n" + std::to_string(p), "n" + std::to_string(i)},
             1 + rng.below(o.max_dim));
  }
  if (n >= 2 && rng.below(2) == 0) {
    const std::size_t a = rng.below(n);
    std::size_t b = rng.below(n);
    while (b == a) b = rng.below(n);
    add_edge("x0", {"n" + std::to_string(a), "n" + std::to_string(b)},
             1 + rng.below(o.max_dim));
  }
  bool any_visible = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (o.every_node_visible || rng.below(2) == 0) {
      const std::string id = "v" + std::to_string(i);
      add_edge(id, {"n" + std::to_string(i)}, 1 + rng.below(o.max_dim));
      net.graph.visible_order.push_back(id);
      any_visible = true;
    }
  }
  if (!any_visible) {
    add_edge("v0", {"n0"}, 1 + rng.below(o.max_dim));
    net.graph.visible_order.push_back("v0");
  }
  for (const auto& node : net.graph.nodes) {
    std::vector<std::size_t> shape;
    for (const auto& e : inc[node]) shape.push_back(dim_of[e]);
    net.cores[node] = random_core(rng, shape, o.nonneg);
    net.mode_edges[node] = inc[node];
  }
  return net;
}

std::set<std::string> hidden_ids(const TensorNetwork& net) {
  std::set<std::string> out;
  for (const auto& e : net.graph.edges)
    if (e.hidden()) out.insert(e.id);
  return out;
}

}  // namespace

BornMachine random_bm(Rng& rng) {
  return BornMachine{random_network(rng, NetOpts{})};
}

DecoheredBM random_fdbm(Rng& rng) {
  BornMachine bm = random_bm(rng);
  std::set<std::string> dec = hidden_ids(bm.net);
  return DecoheredBM{std::move(bm), std::move(dec)};
}

Ugm random_ugm(Rng& rng) {
  NetOpts o;
  o.nonneg = true;
  return Ugm{random_network(rng, o)};
}

PhaseAssignment random_phases(Rng& rng, const TensorNetwork& net) {
  PhaseAssignment ph;
  for (const auto& [node, core] : net.cores) {
    DenseTensor t(core.shape());
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = cplx{rng.uniform01(), 0.0};
    ph.theta[node] = std::move(t);
  }
  return ph;
}

DecoheredBM random_one_visible_dbm(Rng& rng) {
  NetOpts o;
  o.every_node_visible = true;
  BornMachine bm{random_network(rng, o)};
  std::set<std::string> dec;
  for (const auto& e : hidden_ids(bm.net))
    if (rng.below(2) == 0) dec.insert(e);
  return DecoheredBM{std::move(bm), std::move(dec)};
}

Lps random_lps(Rng& rng) {
  Lps out;
  TensorNetwork& net = out.net;
  const std::size_t n = 1 + rng.below(3);
  std::map<std::string, std::vector<std::string>> inc;
  std::map<std::string, std::size_t> dim_of;
  auto add_edge = [&](const std::string& id, std::vector<std::string> nodes,
                      std::size_t dim) {
    dim_of[id] = dim;
    for (const auto& v : nodes) inc[v].push_back(id);
    net.graph.edges.push_back(Edge{id, std::move(nodes), dim});
  };
  for (std::size_t i = 0; i < n; ++i)
    net.graph.nodes.push_back("n" + std::to_string(i));
  for (std::size_t i = 1; i < n; ++i)
    add_edge("h" + std::to_string(i),
             {"n" + std::to_string(rng.below(i)), "n" + std::to_string(i)},
             1 + rng.below(3));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string node = "n" + std::to_string(i);
    const std::string v = "v" + std::to_string(i);
    const std::string p = "p" + std::to_string(i);
    add_edge(v, {node}, 1 + rng.below(3));
    net.graph.visible_order.push_back(v);
    add_edge(p, {node}, 1 + rng.below(3));
    net.graph.visible_order.push_back(p);
    out.purification.insert(p);
  }
  for (const auto& node : net.graph.nodes) {
    std::vector<std::size_t> shape;
    for (const auto& e : inc[node]) shape.push_back(dim_of[e]);
    net.cores[node] = random_core(rng, shape, false);
    net.mode_edges[node] = inc[node];
  }
  return out;
}

CutDbm random_cut_dbm(Rng& rng) {
  CutDbm out;
  TensorNetwork net;
  std::map<std::string, std::vector<std::string>> inc;
  std::map<std::string, std::size_t> dim_of;
  auto add_edge = [&](const std::string& id, std::vector<std::string> nodes,
                      std::size_t dim) {
    dim_of[id] = dim;
    for (const auto& v : nodes) inc[v].push_back(id);
    net.graph.edges.push_back(Edge{id, std::move(nodes), dim});
  };
  std::set<std::string> internal;
  auto component = [&](const std::string& tag) {
    const std::size_t k = 1 + rng.below(2);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) {
      names.push_back(tag + std::to_string(i));
      net.graph.nodes.push_back(names.back());
      inc[names.back()];
    }
    if (k == 2) {
      add_edge("h" + tag, {names[0], names[1]}, 1 + rng.below(3));
      internal.insert("h" + tag);
    }
    // one guaranteed visible variable per side, extras at random
    for (std::size_t i = 0; i < k; ++i) {
      if (i == 0 || rng.below(2) == 0) {
        const std::string v = "v" + names[i];
        add_edge(v, {names[i]}, 1 + rng.below(3));
        net.graph.visible_order.push_back(v);
      }
    }
    return names;
  };
  auto a = component("a");
  auto b = component("b");
  const std::size_t bridges = 1 + rng.below(2);
  for (std::size_t i = 0; i < bridges; ++i) {
    const std::string id = "c" + std::to_string(i);
    add_edge(id, {a[rng.below(a.size())], b[rng.below(b.size())]},
             1 + rng.below(3));
    out.cut_edges.insert(id);
  }
  for (const auto& node : net.graph.nodes) {
    std::vector<std::size_t> shape;
    for (const auto& e : inc[node]) shape.push_back(dim_of[e]);
    net.cores[node] = random_core(rng, shape, false);
    net.mode_edges[node] = inc[node];
  }
  out.model.bm.net = std::move(net);
  out.model.decohered = out.cut_edges;
  for (const auto& e : internal)
    if (rng.below(2) == 0) out.model.decohered.insert(e);
  return out;
}

// ---------------------------------------------------------------------------
// Frozen witnesses
// ---------------------------------------------------------------------------

BornMachine observer_witness() {
  TensorNetwork net;
  net.graph.nodes = {"u", "w"};
  net.graph.edges = {Edge{"x", {"u"}, 2}, Edge{"e", {"u", "w"}, 2},
                     Edge{"y", {"w"}, 2}};
  net.graph.visible_order = {"x", "y"};
  const double s = 1.0 / std::sqrt(2.0);
  net.cores["u"] = DenseTensor({2, 2}, {s, s, s, -s});
  net.cores["w"] = DenseTensor({2, 2}, {1, 1, 0, 1});
  net.mode_edges["u"] = {"x", "e"};
  net.mode_edges["w"] = {"e", "y"};
  return BornMachine{std::move(net)};
}

DecoheredBM gauge_witness() { return DecoheredBM{observer_witness(), {"e"}}; }

GaugeTransform gauge_witness_transform() {
  return GaugeTransform{"e", {{cplx{1, 0}, cplx{1, 0}}, {cplx{1, 0}, cplx{-1, 0}}}};
}

DecoheredBM dependence_counterexample() {
  TensorNetwork net;
  net.graph.nodes = {"u", "w"};
  net.graph.edges = {Edge{"x", {"u"}, 2}, Edge{"e1", {"u", "w"}, 2},
                     Edge{"e2", {"u", "w"}, 2}, Edge{"y", {"w"}, 2}};
  net.graph.visible_order = {"x", "y"};
  // u: delta(x, e2); w: delta(e2, y). The coherent edge e2 copies x into y,
  // so conditioning on the readout of e1 cannot break the dependence.
  DenseTensor a({2, 2, 2}), b({2, 2, 2});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t z = 0; z < 2; ++z)
      for (std::size_t h = 0; h < 2; ++h) {
        a.set({x, z, h}, x == h ? cplx{1, 0} : cplx{0, 0});
        b.set({z, h, x}, h == x ? cplx{1, 0} : cplx{0, 0});
      }
  net.cores["u"] = std::move(a);
  net.cores["w"] = std::move(b);
  net.mode_edges["u"] = {"x", "e1", "e2"};
  net.mode_edges["w"] = {"e1", "e2", "y"};
  return DecoheredBM{BornMachine{std::move(net)}, {"e1"}};
}

double counterexample_residual() {
  DecoheredBM m = dependence_counterexample();
  Distribution full = dbm_prob(readout_edge(m, "e1"));  // vars: x, y, Z@e1
  const std::size_t dx = full.variables[0].dim, dy = full.variables[1].dim,
                    dz = full.variables[2].dim;
  double worst = 0.0;
  for (std::size_t z = 0; z < dz; ++z) {
    double pz = 0.0;
    for (std::size_t x = 0; x < dx; ++x)
      for (std::size_t y = 0; y < dy; ++y)
        pz += full.table[(x * dy + y) * dz + z];
    if (pz <= 1e-12) continue;
    std::vector<double> px(dx, 0.0), py(dy, 0.0);
    for (std::size_t x = 0; x < dx; ++x)
      for (std::size_t y = 0; y < dy; ++y) {
        const double p = full.table[(x * dy + y) * dz + z] / pz;
        px[x] += p;
        py[y] += p;
      }
    for (std::size_t x = 0; x < dx; ++x)
      for (std::size_t y = 0; y < dy; ++y)
        worst = std::max(worst,
                         std::abs(full.table[(x * dy + y) * dz + z] / pz -
                                  px[x] * py[y]));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

namespace {

void track_raw(SuiteResult& sr, const Distribution& d) {
  sr.min_raw_entry = std::min(sr.min_raw_entry, d.min_entry_raw);
}

void add_check(SuiteResult& sr, const std::string& name, bool passed,
               double residual, double bound, const std::string& detail = "") {
  sr.checks.push_back(CheckResult{name, passed, residual, bound, detail});
}

SuiteResult suite_thm1(std::size_t trials, std::uint64_t seed, double tol) {
  SuiteResult sr{.suite = "thm1", .trials = trials};
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::mix(seed, t));
    DecoheredBM m = random_fdbm(rng);
    Distribution p = dbm_prob(m);
    track_raw(sr, p);
    Distribution q = ugm_prob(fdbm_to_ugm(m));
    worst = std::max(worst, dist_residual(p, q));
  }
  add_check(sr, "fully decohered BM equals its converted UGM", worst <= tol,
            worst, tol);
  return sr;
}

SuiteResult suite_cor1(std::size_t trials, std::uint64_t seed, double tol) {
  SuiteResult sr{.suite = "cor1", .trials = trials};
  double worst_inv = 0.0, worst_rt = 0.0;
  const double rt_tol = 1e-12;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::mix(seed, t));
    Ugm u = random_ugm(rng);
    Distribution base = ugm_prob(u);
    for (int k = 0; k < 5; ++k) {
      PhaseAssignment ph = random_phases(rng, u.net);
      DecoheredBM f = ugm_to_fdbm(u, ph);
      Distribution d = dbm_prob(f);
      track_raw(sr, d);
      worst_inv = std::max(worst_inv, dist_residual(base, d));
      Ugm back = fdbm_to_ugm(f);
      for (const auto& [node, core] : u.net.cores) {
        const DenseTensor& rt = back.net.cores.at(node);
        for (std::size_t i = 0; i < core.size(); ++i) {
          const double orig = core[i].real();
          worst_rt = std::max(worst_rt, std::abs(rt[i].real() - orig) /
                                            std::max(orig, 1e-300));
        }
      }
    }
  }
  add_check(sr, "distribution is phase independent", worst_inv <= tol,
            worst_inv, tol);
  add_check(sr, "potentials round-trip through the conversion",
            worst_rt <= rt_tol, worst_rt, rt_tol);
  return sr;
}

SuiteResult suite_thm2(std::size_t trials, std::uint64_t seed, double tol) {
  SuiteResult sr{.suite = "thm2", .trials = trials};
  double worst = 0.0;
  std::size_t not_cut = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::mix(seed, t));
    CutDbm cd = random_cut_dbm(rng);
    track_raw(sr, dbm_prob(cd.model));
    CondIndependenceReport rep =
        check_cond_independence(cd.model, cd.cut_edges);
    if (!rep.conditioning_edges_cut_graph) ++not_cut;
    worst = std::max(worst, rep.max_residual);
  }
  add_check(sr, "generated conditioning sets cut the graph", not_cut == 0,
            static_cast<double>(not_cut), 0.0);
  add_check(sr, "decohered cut set gives conditional independence",
            worst <= tol, worst, tol);
  const double ce = counterexample_residual();
  add_check(sr, "coherent cross-edge keeps variables dependent (residual > bound)",
            ce > 0.01, ce, 0.01);
  return sr;
}

SuiteResult suite_lps(std::size_t trials, std::uint64_t seed, double tol) {
  SuiteResult sr{.suite = "lps", .trials = trials};
  double worst_fwd = 0.0, worst_bwd = 0.0;
  std::size_t count_mismatch = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::mix(seed, t));
    Lps l = random_lps(rng);
    Distribution pl = lps_prob(l);
    track_raw(sr, pl);
    DecoheredBM d = lps_to_dbm(l);
    Distribution pd = dbm_prob(d);
    track_raw(sr, pd);
    worst_fwd = std::max(worst_fwd, dist_residual(pl, pd));

    const std::size_t n = l.net.graph.nodes.size();
    std::size_t m_hidden = 0;
    for (const auto& e : l.net.graph.edges)
      if (e.hidden()) ++m_hidden;
    std::size_t out_vis = 0, out_hid = 0;
    for (const auto& e : d.bm.net.graph.edges)
      (e.visible() ? out_vis : out_hid)++;
    if (d.bm.net.graph.nodes.size() != 2 * n || out_vis != n ||
        out_hid != m_hidden + n)
      ++count_mismatch;

    DecoheredBM d2 = random_one_visible_dbm(rng);
    Distribution pd2 = dbm_prob(d2);
    track_raw(sr, pd2);
    Lps l2 = dbm_to_lps(d2);
    Distribution pl2 = lps_prob(l2);
    track_raw(sr, pl2);
    worst_bwd = std::max(worst_bwd, dist_residual(pd2, pl2));
  }
  add_check(sr, "lps to dbm preserves the distribution", worst_fwd <= tol,
            worst_fwd, tol);
  add_check(sr, "lps to dbm graph counts (2n nodes, n visible, m+n hidden)",
            count_mismatch == 0, static_cast<double>(count_mismatch), 0.0);
  add_check(sr, "dbm to lps preserves the distribution", worst_bwd <= tol,
            worst_bwd, tol);
  return sr;
}

SuiteResult suite_observer(std::size_t trials, std::uint64_t seed,
                           double /*tol*/) {
  SuiteResult sr{.suite = "observer", .trials = trials};
  ReadoutResult r = force_readout_bm(observer_witness(), "e");
  track_raw(sr, r.after);
  add_check(sr, "witness readout moves the distribution (TV >= bound)",
            r.tv_distance >= 0.05, r.tv_distance, 0.05);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::mix(seed, t));
    DecoheredBM f = ugm_to_fdbm(random_ugm(rng));
    if (f.decohered.empty()) continue;
    Distribution before = dbm_prob(f);
    track_raw(sr, before);
    for (const auto& e : f.decohered) {
      DecoheredBM read = readout_edge(f, e);
      Distribution after = marginalize(Model{read}, {"Z@" + e});
      worst = std::max(worst, total_variation(before, after));
    }
  }
  add_check(sr, "non-negative decohered controls are unchanged",
            worst <= 1e-12, worst, 1e-12);
  return sr;
}

SuiteResult suite_gauge(std::size_t trials, std::uint64_t seed, double tol) {
  SuiteResult sr{.suite = "gauge", .trials = trials};
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::mix(seed, t));
    BornMachine bm = random_bm(rng);
    std::vector<const Edge*> hidden;
    for (const auto& e : bm.net.graph.edges)
      if (e.hidden()) hidden.push_back(&e);
    if (hidden.empty()) continue;
    const Edge* e = hidden[rng.below(hidden.size())];
    TensorNetwork gauged;
    for (int attempt = 0;; ++attempt) {
      GaugeTransform g;
      g.edge = e->id;
      g.matrix.assign(e->dim, std::vector<cplx>(e->dim));
      for (auto& row : g.matrix)
        for (auto& x : row) x = cplx{rng.normal(), rng.normal()};
      try {
        gauged = apply_gauge(bm.net, g);
        break;
      } catch (const NetworkError&) {
        if (attempt >= 5) throw;
      }
    }
    Distribution p = bm_prob(bm);
    Distribution q = bm_prob(BornMachine{gauged});
    track_raw(sr, p);
    track_raw(sr, q);
    worst = std::max(worst, dist_residual(p, q));
  }
  add_check(sr, "BM distribution is gauge invariant", worst <= tol, worst,
            tol);
  DecoheredBM g = gauge_witness();
  Distribution before = dbm_prob(g);
  DecoheredBM gg{BornMachine{apply_gauge(g.bm.net, gauge_witness_transform())},
                 g.decohered};
  Distribution after = dbm_prob(gg);
  track_raw(sr, before);
  track_raw(sr, after);
  const double tv = total_variation(before, after);
  add_check(sr, "non-PD gauge moves a decohered model (TV > bound)", tv > 0.01,
            tv, 0.01);
  return sr;
}

SuiteResult suite_nonneg(std::size_t trials, std::uint64_t seed,
                         double /*tol*/) {
  SuiteResult sr{.suite = "nonneg", .trials = trials};
  std::size_t disagreements = 0;
  double worst_recon = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::mix(seed, t));
    const std::size_t d = 1 + rng.below(3);
    std::vector<std::vector<cplx>> m(d, std::vector<cplx>(d));
    const std::uint64_t kind = rng.below(3);
    if (kind == 0) {  // monomial: guaranteed factorable
      std::vector<std::size_t> perm(d);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
      for (std::size_t j = 0; j < d; ++j)
        m[perm[j]][j] = cplx{0.1 + 2.0 * rng.uniform01(), 0.0};
    } else if (kind == 1) {  // dense non-negative: inverse decides
      for (auto& row : m)
        for (auto& x : row) x = cplx{rng.uniform01(), 0.0};
    } else {  // general real
      for (auto& row : m)
        for (auto& x : row) x = cplx{rng.normal(), 0.0};
    }
    // sign-check oracle: factorable iff M and M^{-1} are entrywise >= 0
    Eigen::MatrixXcd em(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) em(static_cast<int>(i), static_cast<int>(j)) = m[i][j];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(em);
    if (!lu.isInvertible()) continue;
    Eigen::MatrixXcd inv = lu.inverse();
    bool oracle = true;
    for (std::size_t i = 0; i < d && oracle; ++i)
      for (std::size_t j = 0; j < d && oracle; ++j) {
        auto nonneg = [](cplx v) {
          return v.real() >= -1e-12 && std::abs(v.imag()) <= 1e-12;
        };
        oracle = nonneg(m[i][j]) && nonneg(inv(static_cast<int>(i), static_cast<int>(j)));
      }
    auto fac = factor_nonneg_gauge(m);
    if (fac.has_value() != oracle) {
      ++disagreements;
      continue;
    }
    if (fac) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          const double pd = (fac->perm[j] == i) ? fac->diag[j] : 0.0;
          worst_recon = std::max(worst_recon, std::abs(m[i][j] - cplx{pd, 0}));
        }
    }
  }
  add_check(sr, "factorization agrees with the sign-check oracle",
            disagreements == 0, static_cast<double>(disagreements), 0.0);
  add_check(sr, "P*D reproduces the factored matrix", worst_recon <= 1e-12,
            worst_recon, 1e-12);
  return sr;
}

SuiteResult suite_grad(std::size_t trials, std::uint64_t seed, double tol) {
  SuiteResult sr{.suite = "grad", .trials = trials};
  double worst = 0.0;
  const double h = 1e-5;
  for (std::size_t t = 0; t < trials; ++t) {
    for (Family fam : {Family::UgmMixture, Family::DbmMixture}) {
      const std::uint64_t sub =
          Rng::mix(seed, 2 * t + (fam == Family::UgmMixture ? 0 : 1));
      Rng rng(sub);
      const std::size_t n = 2 + rng.below(3);
      const std::size_t tl = 2 + rng.below(7);
      HmmMixtureParams p = init_params(fam, n, 2, tl, Rng::mix(sub, 1));
      SequenceDataset ds;
      ds.seq_len = tl;
      ds.alphabet = 2;
      const std::size_t m = 3 + rng.below(4);
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::uint8_t> seq(tl);
        for (auto& s : seq) s = static_cast<std::uint8_t>(1 + rng.below(2));
        ds.sequences.push_back(std::move(seq));
      }
      NllGradient g = nll_grad(p, ds);
      std::vector<double> theta = p.flatten();
      HmmMixtureParams q = p;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const double keep = theta[i];
        theta[i] = keep + h;
        q.unflatten(theta);
        const double up = nll(q, ds);
        theta[i] = keep - h;
        q.unflatten(theta);
        const double dn = nll(q, ds);
        theta[i] = keep;
        const double fd = (up - dn) / (2.0 * h);
        const double rel = std::abs(g.grad[i] - fd) /
                           std::max({std::abs(g.grad[i]), std::abs(fd), 1e-6});
        worst = std::max(worst, rel);
      }
      q.unflatten(theta);
    }
  }
  add_check(sr, "reverse mode matches central differences", worst <= tol,
            worst, tol);
  return sr;
}

double default_tol(const std::string& suite) {
  if (suite == "gauge") return 1e-8;
  if (suite == "grad") return 1e-4;
  return 1e-10;
}

}  // namespace

std::size_t default_suite_trials(const std::string& suite) {
  if (suite == "thm1" || suite == "cor1") return 50;
  if (suite == "nonneg") return 100;
  if (suite == "grad") return 20;
  return 30;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "thm1", "cor1", "thm2", "lps", "observer", "gauge", "nonneg", "grad"};
  return names;
}

SuiteResult run_suite(const std::string& suite, std::size_t trials,
                      std::uint64_t seed, double tol) {
  if (tol <= 0.0) tol = default_tol(suite);
  if (trials == 0) return SuiteResult{.suite = suite, .vacuous = true};
  if (suite == "thm1") return suite_thm1(trials, seed, tol);
  if (suite == "cor1") return suite_cor1(trials, seed, tol);
  if (suite == "thm2") return suite_thm2(trials, seed, tol);
  if (suite == "lps") return suite_lps(trials, seed, tol);
  if (suite == "observer") return suite_observer(trials, seed, tol);
  if (suite == "gauge") return suite_gauge(trials, seed, tol);
  if (suite == "nonneg") return suite_nonneg(trials, seed, tol);
  if (suite == "grad") return suite_grad(trials, seed, tol);
  throw ModelError("unknown suite: " + suite);
}

std::vector<SuiteResult> run_suites(const std::string& suite_or_all,
                                    std::size_t trials, std::uint64_t seed,
                                    double tol) {
  std::vector<SuiteResult> out;
  if (suite_or_all == "all") {
    for (const auto& s : suite_names())
      out.push_back(run_suite(s, trials, seed, tol));
  } else {
    out.push_back(run_suite(suite_or_all, trials, seed, tol));
  }
  return out;
}

}  // namespace tnprob
