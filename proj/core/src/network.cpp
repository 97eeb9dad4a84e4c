#include "tnprob/network.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>

namespace tnprob {

const Edge* TnGraph::find_edge(const std::string& id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

bool TnGraph::has_node(const std::string& id) const {
  return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

std::vector<std::string> TnGraph::incident_edges(const std::string& node) const {
  std::vector<std::string> out;
  for (const auto& e : edges)
    for (const auto& n : e.nodes)
      if (n == node) out.push_back(e.id);
  return out;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v << "\n";
  return os.str();
}

ValidationReport validate(const TensorNetwork& net) {
  ValidationReport rep;
  auto fail = [&](const std::string& m) { rep.violations.push_back(m); };
  const TnGraph& g = net.graph;

  std::set<std::string> node_set(g.nodes.begin(), g.nodes.end());
  if (node_set.size() != g.nodes.size()) fail("duplicate node id");

  std::set<std::string> edge_ids;
  std::set<std::string> visible_ids;
  for (const auto& e : g.edges) {
    if (!edge_ids.insert(e.id).second) fail("duplicate edge id: " + e.id);
    if (e.dim < 1) fail("edge " + e.id + ": dimension must be >= 1");
    if (e.nodes.size() != 1 && e.nodes.size() != 2)
      fail("edge " + e.id + ": must have one or two endpoints");
    if (e.nodes.size() == 2 && e.nodes[0] == e.nodes[1])
      fail("edge " + e.id + ": self-loop endpoints");
    for (const auto& n : e.nodes)
      if (!node_set.count(n)) fail("edge " + e.id + ": unknown endpoint " + n);
    if (e.visible()) visible_ids.insert(e.id);
  }

  std::set<std::string> order_ids(g.visible_order.begin(), g.visible_order.end());
  if (order_ids.size() != g.visible_order.size())
    fail("visible_order contains duplicates");
  if (order_ids != visible_ids)
    fail("visible_order is not a bijection onto the visible edges");

  for (const auto& n : g.nodes) {
    auto inc = g.incident_edges(n);
    if (inc.empty()) fail("node " + n + ": degree 0");
    auto cit = net.cores.find(n);
    auto mit = net.mode_edges.find(n);
    if (cit == net.cores.end()) {
      fail("node " + n + ": missing core");
      continue;
    }
    if (mit == net.mode_edges.end()) {
      fail("node " + n + ": missing mode-edge order");
      continue;
    }
    std::multiset<std::string> a(inc.begin(), inc.end());
    std::multiset<std::string> b(mit->second.begin(), mit->second.end());
    if (a != b) {
      fail("node " + n + ": mode-edge order does not match incident edges");
      continue;
    }
    const DenseTensor& core = cit->second;
    if (core.order() != mit->second.size()) {
      fail("node " + n + ": core order does not match degree");
      continue;
    }
    for (std::size_t i = 0; i < mit->second.size(); ++i) {
      const Edge* e = g.find_edge(mit->second[i]);
      if (e && core.dim(i) != e->dim) {
        std::ostringstream os;
        os << "node " << n << ": core mode " << i << " has dim " << core.dim(i)
           << " but edge " << e->id << " has dim " << e->dim;
        fail(os.str());
      }
    }
  }
  for (const auto& [n, _] : net.cores)
    if (!node_set.count(n)) fail("core for unknown node " + n);
  return rep;
}

std::size_t contraction_budget() {
  if (const char* env = std::getenv("TNPROB_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 100'000'000;
}

DenseTensor evaluate(const TensorNetwork& net) {
  return evaluate(net, contraction_budget());
}

DenseTensor evaluate(const TensorNetwork& net, std::size_t budget) {
  ValidationReport rep = validate(net);
  if (!rep.ok()) throw NetworkError("invalid network:\n" + rep.to_string());
  std::map<std::string, std::int64_t> label_of;
  std::int64_t next = 0;
  for (const auto& e : net.graph.edges) label_of[e.id] = next++;
  std::vector<LabeledTensor> lts;
  for (const auto& n : net.graph.nodes) {
    LabeledTensor lt;
    lt.tensor = net.cores.at(n);
    for (const auto& eid : net.mode_edges.at(n)) lt.labels.push_back(label_of[eid]);
    lts.push_back(std::move(lt));
  }
  std::vector<std::int64_t> out;
  for (const auto& eid : net.graph.visible_order) out.push_back(label_of[eid]);
  return contract_network(std::move(lts), out, budget);
}

std::vector<std::set<std::string>> components_after_removal(
    const TnGraph& g, const std::set<std::string>& removed) {
  std::map<std::string, std::string> parent;
  for (const auto& n : g.nodes) parent[n] = n;
  std::function<std::string(const std::string&)> find =
      [&](const std::string& x) -> std::string {
    std::string r = x;
    while (parent[r] != r) r = parent[r];
    parent[x] = r;
    return r;
  };
  for (const auto& e : g.edges) {
    if (!e.hidden() || removed.count(e.id)) continue;
    parent[find(e.nodes[0])] = find(e.nodes[1]);
  }
  std::map<std::string, std::set<std::string>> comps;
  for (const auto& n : g.nodes) comps[find(n)].insert(n);
  std::vector<std::set<std::string>> out;
  for (auto& [_, c] : comps) out.push_back(std::move(c));
  return out;
}

bool is_cut_set(const TnGraph& g, const std::set<std::string>& edges) {
  for (const auto& id : edges)
    if (!g.find_edge(id)) throw NetworkError("unknown edge id: " + id);
  return components_after_removal(g, edges).size() >= 2;
}

namespace {

using CMatE = Eigen::MatrixXcd;

CMatE to_eigen(const std::vector<std::vector<cplx>>& m) {
  const auto n = m.size();
  if (n == 0) throw NetworkError("empty gauge matrix");
  CMatE out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw NetworkError("gauge matrix is not square");
    for (std::size_t j = 0; j < n; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
  }
  return out;
}

DenseTensor matrix_tensor(const CMatE& m) {
  const auto r = static_cast<std::size_t>(m.rows());
  const auto c = static_cast<std::size_t>(m.cols());
  DenseTensor t({r, c});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      t[i * c + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return t;
}

// Contract a matrix into one mode of a core, keeping the mode position.
// side_row == true contracts the matrix's row index with the core's mode, so
// the new mode carries the column index (A' = A . M); side_row == false
// contracts the column index (B' = M . B in that mode).
DenseTensor fold_matrix(const DenseTensor& core, std::size_t mode,
                        const CMatE& m, bool side_row) {
  DenseTensor mt = matrix_tensor(side_row ? m : CMatE(m.transpose()));
  DenseTensor out = contract(core, mode, mt, 0);
  // contract moved the new mode to the back; rotate it home.
  std::vector<std::size_t> perm;
  for (std::size_t i = 0, src = 0; i < core.order(); ++i) {
    if (i == mode)
      perm.push_back(core.order() - 1);
    else
      perm.push_back(src++);
  }
  return out.permuted(std::span<const std::size_t>(perm));
}

}  // namespace

TensorNetwork apply_gauge(const TensorNetwork& net, const GaugeTransform& t) {
  const Edge* e = net.graph.find_edge(t.edge);
  if (!e) throw NetworkError("unknown edge id: " + t.edge);
  if (!e->hidden()) throw NetworkError("gauge transform on visible edge " + t.edge);
  CMatE m = to_eigen(t.matrix);
  if (static_cast<std::size_t>(m.rows()) != e->dim)
    throw NetworkError("gauge matrix dimension does not match edge");
  Eigen::JacobiSVD<CMatE> svd(m);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double smax = svd.singularValues()(0);
  if (smin <= 0.0 || smax / smin > 1e12)
    throw NetworkError("gauge matrix is singular or too ill-conditioned");
  CMatE minv = m.inverse();

  TensorNetwork out = net;
  const std::string& u = e->nodes[0];
  const std::string& w = e->nodes[1];
  auto mode_of = [&](const std::string& node) {
    const auto& me = net.mode_edges.at(node);
    for (std::size_t i = 0; i < me.size(); ++i)
      if (me[i] == t.edge) return i;
    throw NetworkError("edge not found in node mode order");
  };
  // A' = A . M on u's mode; B' = M^{-1} . B on w's mode. Contracting A' and
  // B' over the edge then reproduces A M M^{-1} B.
  out.cores.at(u) = fold_matrix(net.cores.at(u), mode_of(u), m, true);
  out.cores.at(w) = fold_matrix(net.cores.at(w), mode_of(w), minv, false);
  return out;
}

std::optional<NonnegGaugeFactors> factor_nonneg_gauge(
    const std::vector<std::vector<cplx>>& m) {
  CMatE em = to_eigen(m);
  Eigen::FullPivLU<CMatE> lu(em);
  if (!lu.isInvertible()) throw NetworkError("singular matrix");
  CMatE inv = lu.inverse();
  const double tol = 1e-12;
  auto entrywise_nonneg = [&](const CMatE& x) {
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (std::abs(x(i, j).imag()) > tol) return false;
        if (x(i, j).real() < -tol) return false;
      }
    return true;
  };
  if (!entrywise_nonneg(em) || !entrywise_nonneg(inv)) return std::nullopt;
  // Non-negativity of both M and M^{-1} forces one positive entry per column.
  const std::size_t n = m.size();
  NonnegGaugeFactors f;
  f.perm.resize(n);
  f.diag.resize(n);
  std::vector<bool> row_taken(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t nz = 0, row = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(m[i][j]) > tol) {
        ++nz;
        row = i;
      }
    }
    if (nz != 1 || row_taken[row]) return std::nullopt;
    row_taken[row] = true;
    f.perm[j] = row;
    f.diag[j] = m[row][j].real();
  }
  return f;
}

TensorNetwork promote_hidden_edge(const TensorNetwork& net,
                                  const std::string& edge,
                                  const std::string& new_visible_id) {
  const Edge* e = net.graph.find_edge(edge);
  if (!e) throw NetworkError("unknown edge id: " + edge);
  if (!e->hidden()) throw NetworkError("cannot promote visible edge " + edge);
  const std::string vis = new_visible_id.empty() ? "Z@" + edge : new_visible_id;
  const std::string cnode = "copy@" + edge;
  const std::string half = edge + "#b";
  if (net.graph.find_edge(vis) || net.graph.find_edge(half) ||
      net.graph.has_node(cnode))
    throw NetworkError("promotion id collision on edge " + edge);

  TensorNetwork out = net;
  const std::string u = e->nodes[0];
  const std::string w = e->nodes[1];
  for (auto& ge : out.graph.edges)
    if (ge.id == edge) ge.nodes = {u, cnode};  // edge keeps its id on u's side
  out.graph.edges.push_back(Edge{half, {cnode, w}, e->dim});
  out.graph.edges.push_back(Edge{vis, {cnode}, e->dim});
  out.graph.nodes.push_back(cnode);
  out.graph.visible_order.push_back(vis);
  out.cores[cnode] = copy_tensor(3, e->dim);
  out.mode_edges[cnode] = {edge, half, vis};
  auto& wm = out.mode_edges.at(w);
  for (auto& id : wm)
    if (id == edge) id = half;
  return out;
}

TensorNetwork attach_vector(const TensorNetwork& net, const std::string& edge,
                            const DenseTensor& vec, const std::string& node_id) {
  const Edge* e = net.graph.find_edge(edge);
  if (!e) throw NetworkError("unknown edge id: " + edge);
  if (!e->visible()) throw NetworkError("attach_vector requires a visible edge");
  if (vec.order() != 1 || vec.dim(0) != e->dim)
    throw NetworkError("attached vector dimension mismatch on edge " + edge);
  const std::string node = node_id.empty() ? "pin@" + edge : node_id;
  if (net.graph.has_node(node)) throw NetworkError("attach id collision: " + node);
  TensorNetwork out = net;
  for (auto& ge : out.graph.edges)
    if (ge.id == edge) ge.nodes.push_back(node);
  out.graph.nodes.push_back(node);
  out.cores[node] = vec;
  out.mode_edges[node] = {edge};
  auto& vo = out.graph.visible_order;
  vo.erase(std::remove(vo.begin(), vo.end(), edge), vo.end());
  return out;
}

}  // namespace tnprob
