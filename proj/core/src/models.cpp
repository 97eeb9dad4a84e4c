#include "tnprob/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tnprob {

std::size_t Distribution::linear_index(std::span<const std::size_t> outcome) const {
  if (outcome.size() != variables.size())
    throw ModelError("outcome arity mismatch");
  std::size_t lin = 0;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (outcome[i] >= variables[i].dim) throw ModelError("outcome out of range");
    lin = lin * variables[i].dim + outcome[i];
  }
  return lin;
}

double Distribution::prob(std::span<const std::size_t> outcome) const {
  return table[linear_index(outcome)];
}

Distribution Distribution::from_unnormalized(std::vector<Variable> vars,
                                             const DenseTensor& t,
                                             double imag_tol) {
  Distribution d;
  d.variables = std::move(vars);
  std::size_t expect = 1;
  for (const auto& v : d.variables) expect *= v.dim;
  if (t.size() != expect) throw ModelError("table size does not match variables");

  double max_abs = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    max_abs = std::max(max_abs, std::abs(t[i]));
  double z = 0.0;
  d.table.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(t[i].imag()) > imag_tol * std::max(1.0, max_abs))
      throw ModelError("probability table has a non-real entry");
    d.table[i] = t[i].real();
    z += d.table[i];
  }
  if (!(z > 0.0)) throw ModelError("degenerate model: normalizer Z is zero");
  d.log_z = std::log(z);
  d.min_entry_raw = 0.0;
  for (auto& p : d.table) {
    p /= z;
    d.min_entry_raw = std::min(d.min_entry_raw, p);
    if (p < 0.0) {
      if (p < -1e-10) throw ModelError("probability table has a negative entry");
      p = 0.0;
    }
  }
  return d;
}

std::string Distribution::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& v : variables) os << v.name << ",";
  os << "probability\n";
  std::vector<std::size_t> idx(variables.size(), 0);
  for (std::size_t lin = 0; lin < table.size(); ++lin) {
    for (std::size_t i = 0; i < idx.size(); ++i) os << idx[i] + 1 << ",";
    os << table[lin] << "\n";
    for (std::size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < variables[i].dim) break;
      idx[i] = 0;
    }
  }
  return os.str();
}

double total_variation(const Distribution& a, const Distribution& b) {
  if (a.table.size() != b.table.size())
    throw ModelError("total variation over mismatched tables");
  double s = 0.0;
  for (std::size_t i = 0; i < a.table.size(); ++i)
    s += std::abs(a.table[i] - b.table[i]);
  return 0.5 * s;
}

namespace {

std::vector<Distribution::Variable> visible_variables(const TensorNetwork& net) {
  std::vector<Distribution::Variable> vars;
  for (const auto& id : net.graph.visible_order)
    vars.push_back({id, net.graph.find_edge(id)->dim});
  return vars;
}

std::set<std::string> hidden_edges(const TensorNetwork& net) {
  std::set<std::string> out;
  for (const auto& e : net.graph.edges)
    if (e.hidden()) out.insert(e.id);
  return out;
}

}  // namespace

ValidationReport validate_model(const Model& m) {
  return std::visit(
      [](const auto& mm) -> ValidationReport {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, Ugm>) {
          ValidationReport rep = validate(mm.net);
          for (const auto& [n, core] : mm.net.cores) {
            for (std::size_t i = 0; i < core.size(); ++i) {
              if (std::abs(core[i].imag()) > 1e-12 || core[i].real() < 0.0) {
                rep.violations.push_back("ugm core " + n +
                                         " has a negative or complex entry");
                break;
              }
            }
          }
          return rep;
        } else if constexpr (std::is_same_v<T, BornMachine>) {
          return validate(mm.net);
        } else if constexpr (std::is_same_v<T, DecoheredBM>) {
          ValidationReport rep = validate(mm.bm.net);
          auto hid = hidden_edges(mm.bm.net);
          for (const auto& id : mm.decohered)
            if (!hid.count(id))
              rep.violations.push_back("decohered edge " + id +
                                       " is not a hidden edge");
          return rep;
        } else {
          ValidationReport rep = validate(mm.net);
          std::size_t n = mm.net.graph.nodes.size();
          std::size_t nv = mm.net.graph.visible_order.size();
          if (nv != 2 * n)
            rep.violations.push_back("lps must have 2n visible edges");
          for (const auto& node : mm.net.graph.nodes) {
            std::size_t vis = 0, pur = 0;
            for (const auto& eid : mm.net.graph.incident_edges(node)) {
              const Edge* e = mm.net.graph.find_edge(eid);
              if (e->visible()) {
                ++vis;
                if (mm.purification.count(eid)) ++pur;
              }
            }
            if (vis != 2 || pur != 1)
              rep.violations.push_back(
                  "lps node " + node +
                  " must carry exactly two visible edges, one purification");
          }
          for (const auto& id : mm.purification) {
            const Edge* e = mm.net.graph.find_edge(id);
            if (!e || !e->visible())
              rep.violations.push_back("purification edge " + id +
                                       " is not a visible edge");
          }
          return rep;
        }
      },
      m);
}

Distribution ugm_prob(const Ugm& m) {
  DenseTensor t = evaluate(m.net);
  return Distribution::from_unnormalized(visible_variables(m.net), t);
}

Distribution bm_prob(const BornMachine& m) {
  DenseTensor psi = evaluate(m.net);
  DenseTensor sq(psi.shape());
  for (std::size_t i = 0; i < psi.size(); ++i)
    sq[i] = cplx{std::norm(psi[i]), 0.0};
  return Distribution::from_unnormalized(visible_variables(m.net), sq);
}

namespace {

// Names used inside composite networks. The conjugated copy of node v is
// "v~", the top/bottom halves of a visible edge eta are "eta~t"/"eta~b", a
// non-decohered hidden edge keeps its id on top and gains "eta~c" below.
TensorNetwork composite_impl(const TensorNetwork& net,
                             const std::set<std::string>& decohered) {
  ValidationReport rep = validate(net);
  if (!rep.ok()) throw ModelError("invalid network:\n" + rep.to_string());
  TensorNetwork out;
  auto conj_name = [](const std::string& n) { return n + "~"; };

  for (const auto& n : net.graph.nodes) {
    out.graph.nodes.push_back(n);
    out.graph.nodes.push_back(conj_name(n));
    out.cores[n] = net.cores.at(n);
    out.cores[conj_name(n)] = conjugate(net.cores.at(n));
  }

  std::map<std::string, std::pair<std::string, std::string>> half_names;
  for (const auto& e : net.graph.edges) {
    if (e.visible()) {
      const std::string node = e.nodes[0];
      const std::string top = e.id + "~t", bot = e.id + "~b";
      const std::string merge = "merge@" + e.id;
      out.graph.edges.push_back(Edge{top, {node, merge}, e.dim});
      out.graph.edges.push_back(Edge{bot, {conj_name(node), merge}, e.dim});
      out.graph.edges.push_back(Edge{e.id, {merge}, e.dim});
      out.graph.nodes.push_back(merge);
      out.cores[merge] = copy_tensor(3, e.dim);
      out.mode_edges[merge] = {top, bot, e.id};
      half_names[e.id] = {top, bot};
    } else if (decohered.count(e.id)) {
      const std::string u = e.nodes[0], w = e.nodes[1];
      const std::string deco = "deco@" + e.id;
      const std::string ut = e.id + "~ut", ub = e.id + "~ub";
      const std::string wt = e.id + "~wt", wb = e.id + "~wb";
      out.graph.nodes.push_back(deco);
      out.graph.edges.push_back(Edge{ut, {u, deco}, e.dim});
      out.graph.edges.push_back(Edge{ub, {conj_name(u), deco}, e.dim});
      out.graph.edges.push_back(Edge{wt, {deco, w}, e.dim});
      out.graph.edges.push_back(Edge{wb, {deco, conj_name(w)}, e.dim});
      out.cores[deco] = copy_tensor(4, e.dim);
      out.mode_edges[deco] = {ut, ub, wt, wb};
    } else {
      out.graph.edges.push_back(Edge{e.id, e.nodes, e.dim});
      out.graph.edges.push_back(
          Edge{e.id + "~c", {conj_name(e.nodes[0]), conj_name(e.nodes[1])}, e.dim});
    }
  }
  out.graph.visible_order = net.graph.visible_order;

  for (const auto& n : net.graph.nodes) {
    std::vector<std::string> top_modes, bot_modes;
    for (const auto& eid : net.mode_edges.at(n)) {
      const Edge* e = net.graph.find_edge(eid);
      if (e->visible()) {
        top_modes.push_back(eid + "~t");
        bot_modes.push_back(eid + "~b");
      } else if (decohered.count(eid)) {
        const bool is_u = e->nodes[0] == n;
        top_modes.push_back(eid + (is_u ? "~ut" : "~wt"));
        bot_modes.push_back(eid + (is_u ? "~ub" : "~wb"));
      } else {
        top_modes.push_back(eid);
        bot_modes.push_back(eid + "~c");
      }
    }
    out.mode_edges[n] = top_modes;
    out.mode_edges[conj_name(n)] = bot_modes;
  }
  return out;
}

}  // namespace

TensorNetwork build_composite(const BornMachine& m) {
  return composite_impl(m.net, {});
}

TensorNetwork build_composite(const DecoheredBM& m) {
  ValidationReport rep = validate_model(Model{m});
  if (!rep.ok()) throw ModelError("invalid model:\n" + rep.to_string());
  return composite_impl(m.bm.net, m.decohered);
}

Distribution dbm_prob(const DecoheredBM& m) {
  TensorNetwork comp = build_composite(m);
  DenseTensor t = evaluate(comp);
  return Distribution::from_unnormalized(visible_variables(m.bm.net), t);
}

Distribution lps_prob(const Lps& m) {
  ValidationReport rep = validate_model(Model{m});
  if (!rep.ok()) throw ModelError("invalid model:\n" + rep.to_string());
  TensorNetwork comp = build_composite(BornMachine{m.net});
  for (const auto& pe : m.purification) {
    const Edge* e = comp.graph.find_edge(pe);
    comp = attach_vector(comp, pe, copy_tensor(1, e->dim));
  }
  DenseTensor t = evaluate(comp);
  return Distribution::from_unnormalized(visible_variables(comp), t);
}

Distribution model_prob(const Model& m) {
  return std::visit(
      [](const auto& mm) -> Distribution {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, Ugm>)
          return ugm_prob(mm);
        else if constexpr (std::is_same_v<T, BornMachine>)
          return bm_prob(mm);
        else if constexpr (std::is_same_v<T, DecoheredBM>)
          return dbm_prob(mm);
        else
          return lps_prob(mm);
      },
      m);
}

TensorNetwork prob_network(const Model& m) {
  return std::visit(
      [](const auto& mm) -> TensorNetwork {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, Ugm>) {
          return mm.net;
        } else if constexpr (std::is_same_v<T, BornMachine>) {
          return build_composite(mm);
        } else if constexpr (std::is_same_v<T, DecoheredBM>) {
          return build_composite(mm);
        } else {
          TensorNetwork comp = build_composite(BornMachine{mm.net});
          for (const auto& pe : mm.purification) {
            const Edge* e = comp.graph.find_edge(pe);
            comp = attach_vector(comp, pe, copy_tensor(1, e->dim));
          }
          return comp;
        }
      },
      m);
}

Distribution marginalize(const Model& m, const std::set<std::string>& vars) {
  TensorNetwork pn = prob_network(m);
  for (const auto& v : vars) {
    const Edge* e = pn.graph.find_edge(v);
    if (!e || !e->visible()) throw ModelError("unknown variable: " + v);
    pn = attach_vector(pn, v, copy_tensor(1, e->dim), "marg@" + v);
  }
  DenseTensor t = evaluate(pn);
  return Distribution::from_unnormalized(visible_variables(pn), t);
}

Distribution condition(const Model& m,
                       const std::map<std::string, std::size_t>& assignment) {
  TensorNetwork pn = prob_network(m);
  DenseTensor full = evaluate(pn);
  double z_full = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) z_full += full[i].real();

  for (const auto& [v, outcome] : assignment) {
    const Edge* e = pn.graph.find_edge(v);
    if (!e || !e->visible()) throw ModelError("unknown variable: " + v);
    if (outcome < 1 || outcome > e->dim)
      throw ModelError("outcome out of range for variable " + v);
    pn = attach_vector(pn, v, basis_vector(outcome - 1, e->dim), "cond@" + v);
  }
  DenseTensor t = evaluate(pn);
  double z_cond = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) z_cond += t[i].real();
  if (!(z_cond > 1e-12 * std::max(z_full, 0.0)))
    throw ModelError("undefined conditional: assignment has zero probability");
  return Distribution::from_unnormalized(visible_variables(pn), t);
}

Ugm ugm_from_cliques(const std::vector<Distribution::Variable>& variables,
                     const std::vector<CliqueSpec>& cliques) {
  TensorNetwork net;
  std::map<std::string, std::size_t> var_dim;
  std::map<std::string, std::vector<std::string>> var_edges;  // factor sides
  for (const auto& v : variables) {
    if (var_dim.count(v.name)) throw ModelError("duplicate variable " + v.name);
    var_dim[v.name] = v.dim;
  }
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    const auto& cs = cliques[c];
    const std::string fnode = "phi" + std::to_string(c);
    net.graph.nodes.push_back(fnode);
    if (cs.potential.order() != cs.variables.size())
      throw ModelError("potential order does not match clique variables");
    std::vector<std::string> modes;
    for (std::size_t i = 0; i < cs.variables.size(); ++i) {
      const auto& vn = cs.variables[i];
      auto it = var_dim.find(vn);
      if (it == var_dim.end()) throw ModelError("unknown clique variable " + vn);
      if (cs.potential.dim(i) != it->second)
        throw ModelError("potential dim mismatch on variable " + vn);
      std::string eid = vn + "@phi" + std::to_string(c) + "." + std::to_string(i);
      var_edges[vn].push_back(eid);
      modes.push_back(eid);
    }
    net.cores[fnode] = cs.potential;
    net.mode_edges[fnode] = modes;
  }
  // One copy-tensor node per variable, with an extra visible edge named
  // after the variable.
  for (const auto& v : variables) {
    const std::string vnode = "rv@" + v.name;
    net.graph.nodes.push_back(vnode);
    auto& fe = var_edges[v.name];
    std::vector<std::string> modes = fe;
    modes.push_back(v.name);
    for (const auto& eid : fe) {
      std::string factor = eid.substr(eid.find('@') + 1);
      factor = factor.substr(0, factor.find('.'));
      net.graph.edges.push_back(Edge{eid, {factor, vnode}, v.dim});
    }
    net.graph.edges.push_back(Edge{v.name, {vnode}, v.dim});
    net.graph.visible_order.push_back(v.name);
    net.cores[vnode] = copy_tensor(fe.size() + 1, v.dim);
    net.mode_edges[vnode] = modes;
  }
  Ugm m{std::move(net)};
  ValidationReport rep = validate_model(Model{m});
  if (!rep.ok()) throw ModelError("invalid clique construction:\n" + rep.to_string());
  return m;
}

}  // namespace tnprob
