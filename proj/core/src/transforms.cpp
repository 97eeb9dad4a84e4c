#include "tnprob/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tnprob {

namespace {

std::set<std::string> hidden_edge_ids(const TensorNetwork& net) {
  std::set<std::string> out;
  for (const auto& e : net.graph.edges)
    if (e.hidden()) out.insert(e.id);
  return out;
}

void require_valid(const Model& m, const char* what) {
  ValidationReport rep = validate_model(m);
  if (!rep.ok())
    throw TransformError(std::string("invalid ") + what + ":\n" + rep.to_string());
}

}  // namespace

Ugm fdbm_to_ugm(const DecoheredBM& m) {
  require_valid(Model{m}, "dbm");
  if (m.decohered != hidden_edge_ids(m.bm.net))
    throw TransformError(
        "fully-decohered required (Theorem: a fully-decohered BM is a UGM); "
        "not all hidden edges are decohered");
  Ugm out{m.bm.net};
  for (auto& [n, core] : out.net.cores) {
    for (std::size_t i = 0; i < core.size(); ++i)
      core[i] = cplx{std::norm(core[i]), 0.0};
  }
  return out;
}

DecoheredBM ugm_to_fdbm(const Ugm& m, const PhaseAssignment& phases) {
  require_valid(Model{m}, "ugm");
  DecoheredBM out{BornMachine{m.net}, hidden_edge_ids(m.net)};
  for (auto& [n, core] : out.bm.net.cores) {
    const DenseTensor* th = nullptr;
    auto it = phases.theta.find(n);
    if (it != phases.theta.end()) {
      if (it->second.shape() != core.shape())
        throw TransformError("phase table shape mismatch at node " + n);
      th = &it->second;
    }
    for (std::size_t i = 0; i < core.size(); ++i) {
      const double mag = std::sqrt(core[i].real());
      if (th) {
        const double ang = 2.0 * std::numbers::pi * (*th)[i].real();
        core[i] = cplx{mag * std::cos(ang), mag * std::sin(ang)};
      } else {
        core[i] = cplx{mag, 0.0};
      }
    }
  }
  return out;
}

DecoheredBM readout_edge(const DecoheredBM& m, const std::string& edge) {
  require_valid(Model{m}, "dbm");
  if (!m.decohered.count(edge))
    throw TransformError("edge " + edge + " is not decohered");
  DecoheredBM out;
  out.bm.net = promote_hidden_edge(m.bm.net, edge);
  out.decohered = m.decohered;
  out.decohered.erase(edge);
  return out;
}

ReadoutResult force_readout_bm(const BornMachine& m, const std::string& edge,
                               double change_tol) {
  require_valid(Model{m}, "bm");
  const Edge* e = m.net.graph.find_edge(edge);
  if (!e || !e->hidden()) throw TransformError("edge must be hidden: " + edge);
  ReadoutResult r;
  DecoheredBM single{m, {edge}};
  r.model = readout_edge(single, edge);
  r.before = bm_prob(m);
  r.after = dbm_prob(single);  // readout followed by marginalization
  r.tv_distance = total_variation(r.before, r.after);
  r.distribution_changed = r.tv_distance > change_tol;
  return r;
}

CondIndependenceReport check_cond_independence(
    const DecoheredBM& m, const std::set<std::string>& conditioning_edges,
    double zero_tol) {
  require_valid(Model{m}, "dbm");
  for (const auto& e : conditioning_edges)
    if (!m.decohered.count(e))
      throw TransformError("conditioning edge " + e + " is not decohered");

  CondIndependenceReport rep;
  rep.conditioning_edges_cut_graph =
      is_cut_set(m.bm.net.graph, conditioning_edges);

  // Partition the original nodes by removing the conditioning edges; the
  // first component is side A, the rest side B.
  auto comps = components_after_removal(m.bm.net.graph, conditioning_edges);
  std::set<std::string> side_a = comps.empty() ? std::set<std::string>{} : comps[0];

  const std::size_t nx = m.bm.net.graph.visible_order.size();
  std::vector<bool> x_in_a(nx, false);
  for (std::size_t i = 0; i < nx; ++i) {
    const Edge* e = m.bm.net.graph.find_edge(m.bm.net.graph.visible_order[i]);
    x_in_a[i] = side_a.count(e->nodes[0]) > 0;
  }

  DecoheredBM read = m;
  std::vector<std::string> z_names;
  for (const auto& e : conditioning_edges) {  // set order: deterministic
    read = readout_edge(read, e);
    z_names.push_back("Z@" + e);
  }
  Distribution full = dbm_prob(read);
  // Variables are the original X's followed by the Z's in readout order.
  std::vector<std::size_t> x_dims(nx), z_dims(z_names.size());
  for (std::size_t i = 0; i < nx; ++i) x_dims[i] = full.variables[i].dim;
  for (std::size_t i = 0; i < z_names.size(); ++i) {
    if (full.variables[nx + i].name != z_names[i])
      throw TransformError("unexpected readout variable order");
    z_dims[i] = full.variables[nx + i].dim;
  }
  std::size_t x_size = 1, z_size = 1;
  for (auto d : x_dims) x_size *= d;
  for (auto d : z_dims) z_size *= d;

  for (std::size_t zl = 0; zl < z_size; ++zl) {
    CondIndependenceReport::ZResult zr;
    zr.z.resize(z_dims.size());
    std::size_t rem = zl;
    for (std::size_t i = z_dims.size(); i-- > 0;) {
      zr.z[i] = rem % z_dims[i];
      rem /= z_dims[i];
    }
    std::vector<double> px(x_size);
    double pz = 0.0;
    for (std::size_t xl = 0; xl < x_size; ++xl) {
      px[xl] = full.table[xl * z_size + zl];
      pz += px[xl];
    }
    zr.prob = pz;
    if (pz <= zero_tol) {
      rep.per_z.push_back(std::move(zr));
      continue;
    }
    // Marginals of the conditional over the A / B variable groups.
    std::size_t a_size = 1, b_size = 1;
    for (std::size_t i = 0; i < nx; ++i) (x_in_a[i] ? a_size : b_size) *= x_dims[i];
    std::vector<double> pa(a_size, 0.0), pb(b_size, 0.0);
    std::vector<std::size_t> a_of_x(x_size), b_of_x(x_size);
    {
      std::vector<std::size_t> idx(nx, 0);
      for (std::size_t xl = 0; xl < x_size; ++xl) {
        std::size_t al = 0, bl = 0;
        for (std::size_t i = 0; i < nx; ++i) {
          if (x_in_a[i])
            al = al * x_dims[i] + idx[i];
          else
            bl = bl * x_dims[i] + idx[i];
        }
        a_of_x[xl] = al;
        b_of_x[xl] = bl;
        pa[al] += px[xl] / pz;
        pb[bl] += px[xl] / pz;
        for (std::size_t i = nx; i-- > 0;) {
          if (++idx[i] < x_dims[i]) break;
          idx[i] = 0;
        }
      }
    }
    for (std::size_t xl = 0; xl < x_size; ++xl) {
      double resid = std::abs(px[xl] / pz - pa[a_of_x[xl]] * pb[b_of_x[xl]]);
      zr.residual = std::max(zr.residual, resid);
    }
    rep.max_residual = std::max(rep.max_residual, zr.residual);
    rep.per_z.push_back(std::move(zr));
  }
  return rep;
}

DecoheredBM lps_to_dbm(const Lps& m) {
  require_valid(Model{m}, "lps");
  DecoheredBM out;
  out.bm.net = m.net;
  for (const auto& pe : m.purification) {
    const Edge* e = out.bm.net.graph.find_edge(pe);
    const std::string pad = "pad@" + pe;
    out.bm.net = attach_vector(out.bm.net, pe, copy_tensor(1, e->dim), pad);
    out.decohered.insert(pe);
  }
  return out;
}

Lps dbm_to_lps(const DecoheredBM& m, const EdgeToNodeAssignment& f) {
  require_valid(Model{m}, "dbm");
  const TensorNetwork& net = m.bm.net;
  for (const auto& node : net.graph.nodes) {
    std::size_t vis = 0;
    for (const auto& eid : net.graph.incident_edges(node))
      if (net.graph.find_edge(eid)->visible()) ++vis;
    if (vis != 1)
      throw TransformError(
          "dbm_to_lps requires exactly one visible edge per node (node " +
          node + " has " + std::to_string(vis) + ")");
  }
  // Resolve the edge-to-node assignment, defaulting to the smaller endpoint.
  std::map<std::string, std::vector<std::string>> assigned;  // node -> edges
  for (const auto& eid : m.decohered) {
    const Edge* e = net.graph.find_edge(eid);
    std::string target;
    auto it = f.node_of_edge.find(eid);
    if (it != f.node_of_edge.end()) {
      target = it->second;
      if (target != e->nodes[0] && target != e->nodes[1])
        throw TransformError("assignment maps edge " + eid +
                             " to non-incident node " + target);
    } else {
      target = std::min(e->nodes[0], e->nodes[1]);
    }
    assigned[target].push_back(eid);
  }
  for (auto& [_, edges] : assigned) std::sort(edges.begin(), edges.end());

  Lps out;
  out.net = net;
  for (const auto& node : net.graph.nodes) {
    const auto& modes = net.mode_edges.at(node);
    const DenseTensor& core = net.cores.at(node);
    std::vector<std::string> my_edges;
    if (auto it = assigned.find(node); it != assigned.end()) my_edges = it->second;

    std::size_t pdim = 1;
    std::vector<std::size_t> edge_mode(my_edges.size());
    std::vector<std::size_t> edge_dim(my_edges.size());
    for (std::size_t k = 0; k < my_edges.size(); ++k) {
      auto pos = std::find(modes.begin(), modes.end(), my_edges[k]);
      edge_mode[k] = static_cast<std::size_t>(pos - modes.begin());
      edge_dim[k] = core.dim(edge_mode[k]);
      pdim *= edge_dim[k];
    }
    // New core: old modes plus a purification mode; the copy tensors on the
    // assigned edges force the purification index to mirror those modes.
    std::vector<std::size_t> shape = core.shape();
    shape.push_back(pdim);
    DenseTensor c(shape);
    std::vector<std::size_t> idx(core.order(), 0);
    for (std::size_t lin = 0; lin < core.size(); ++lin) {
      std::size_t pz = 0;
      for (std::size_t k = 0; k < my_edges.size(); ++k)
        pz = pz * edge_dim[k] + idx[edge_mode[k]];
      c[lin * pdim + pz] = core[lin];
      for (std::size_t i = core.order(); i-- > 0;) {
        if (++idx[i] < core.dim(i)) break;
        idx[i] = 0;
      }
    }
    const std::string pe = "P@" + node;
    out.net.graph.edges.push_back(Edge{pe, {node}, pdim});
    out.net.graph.visible_order.push_back(pe);
    out.net.cores[node] = std::move(c);
    out.net.mode_edges[node].push_back(pe);
    out.purification.insert(pe);
  }
  require_valid(Model{out}, "constructed lps");
  return out;
}

}  // namespace tnprob
