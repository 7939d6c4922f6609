#include "sloc/linalg/multifrontal.hpp"

#include <algorithm>
#include <numeric>

namespace sloc {

namespace {

struct Builder {
  const std::vector<std::vector<Index>>& adj;  // group adjacency
  const std::vector<Site>& coords;
  int leaf;
  std::vector<int> side;  // scratch: 0 none, 1 left, 2 right
  // Tree in construction: groups per node, children per node.
  std::vector<std::vector<Index>> groups;
  std::vector<std::vector<int>> children;

  int build(std::vector<Index> set) {
    const int id = static_cast<int>(groups.size());
    groups.emplace_back();
    children.emplace_back();
    if (static_cast<int>(set.size()) <= leaf) {
      groups[id] = std::move(set);
      return id;
    }
    int xmin = INT32_MAX, xmax = INT32_MIN, ymin = INT32_MAX, ymax = INT32_MIN;
    for (Index g : set) {
      xmin = std::min(xmin, coords[g].x);
      xmax = std::max(xmax, coords[g].x);
      ymin = std::min(ymin, coords[g].y);
      ymax = std::max(ymax, coords[g].y);
    }
    const bool use_x = (xmax - xmin) >= (ymax - ymin);
    auto key = [&](Index g) { return use_x ? coords[g].x : coords[g].y; };
    std::vector<int> keys;
    keys.reserve(set.size());
    for (Index g : set) keys.push_back(key(g));
    std::nth_element(keys.begin(), keys.begin() + keys.size() / 2, keys.end());
    int cut = keys[keys.size() / 2];
    if (cut == (use_x ? xmin : ymin)) ++cut;
    std::vector<Index> left, right, sep;
    for (Index g : set) (key(g) < cut ? left : right).push_back(g);
    if (left.empty() || right.empty()) {
      groups[id] = std::move(set);
      return id;
    }
    for (Index g : left) side[g] = 1;
    std::vector<Index> rest;
    for (Index g : right) {
      bool touches = false;
      for (Index h : adj[g])
        if (side[h] == 1) {
          touches = true;
          break;
        }
      (touches ? sep : rest).push_back(g);
    }
    for (Index g : left) side[g] = 0;
    if (sep.size() * 2 > set.size()) {
      groups[id] = std::move(set);
      return id;
    }
    groups[id] = std::move(sep);
    std::vector<int> kids;
    if (!left.empty()) kids.push_back(build(std::move(left)));
    if (!rest.empty()) kids.push_back(build(std::move(rest)));
    children[id] = std::move(kids);
    return id;
  }
};

// Forward substitution with the unit lower factor of a front restricted to
// its first nfs rows, honouring 2x2 pivot blocks.
void front_forward(const CMat& L, const BkPivots& piv, Index nfs, CVec& z) {
  for (Index k = 0; k < nfs; ++k) {
    const Index p = piv.swaps[static_cast<size_t>(k)];
    if (p != k) std::swap(z(k), z(p));
  }
  for (Index k = 0; k < nfs; ++k) {
    const int b = piv.blocks[static_cast<size_t>(k)];
    const Index s = b == 2 ? 2 : 1;
    const Index m = nfs - k - s;
    if (m > 0) {
      z.segment(k + s, m).noalias() -= L.col(k).segment(k + s, m) * z(k);
      if (s == 2) z.segment(k + s, m).noalias() -= L.col(k + 1).segment(k + s, m) * z(k + 1);
    }
    k += s - 1;
  }
}

void front_diag(const CMat& L, const BkPivots& piv, Index nfs, CVec& z) {
  for (Index k = 0; k < nfs; ++k) {
    const int b = piv.blocks[static_cast<size_t>(k)];
    if (b == 1) {
      const double d = L(k, k).real();
      z(k) = d == 0.0 ? cplx(0.0) : z(k) / d;
    } else {
      const double d11 = L(k, k).real(), d22 = L(k + 1, k + 1).real();
      const cplx d21 = L(k + 1, k);
      const double det = d11 * d22 - std::norm(d21);
      const cplx u = z(k), v = z(k + 1);
      z(k) = (d22 * u - std::conj(d21) * v) / det;
      z(k + 1) = (d11 * v - d21 * u) / det;
      ++k;
    }
  }
}

void front_backward(const CMat& L, const BkPivots& piv, Index nfs, CVec& z) {
  for (Index k = nfs - 1; k >= 0; --k) {
    const int b = piv.blocks[static_cast<size_t>(k)];
    const Index first = b == 0 ? k - 1 : k;
    const Index m = nfs - k - 1;
    if (m > 0) {
      z(k) -= L.col(k).segment(k + 1, m).dot(z.segment(k + 1, m));
      if (b == 0) z(first) -= L.col(first).segment(k + 1, m).dot(z.segment(k + 1, m));
    }
    k = first;
  }
  for (Index k = nfs - 1; k >= 0; --k) {
    const Index p = piv.swaps[static_cast<size_t>(k)];
    if (p != k) std::swap(z(k), z(p));
  }
}

}  // namespace

SymbolicAnalysis::SymbolicAnalysis(const SpMat& a, const std::vector<Index>& group_of_var,
                                   const std::vector<Site>& coords, int leaf_groups)
    : n_(a.rows()) {
  const Index ng = static_cast<Index>(coords.size());
  std::vector<std::vector<Index>> vars_of(static_cast<size_t>(ng));
  for (Index i = 0; i < n_; ++i) vars_of[group_of_var[i]].push_back(i);

  std::vector<std::vector<Index>> adj(static_cast<size_t>(ng));
  {
    std::vector<Index> mark(static_cast<size_t>(ng), -1);
    for (Index g = 0; g < ng; ++g) {
      mark[g] = g;
      for (Index j : vars_of[g])
        for (SpMat::InnerIterator it(a, j); it; ++it) {
          const Index h = group_of_var[it.row()];
          if (mark[h] != g) {
            mark[h] = g;
            adj[g].push_back(h);
          }
        }
    }
  }

  Builder b{adj, coords, leaf_groups, std::vector<int>(static_cast<size_t>(ng), 0), {}, {}};
  std::vector<Index> all(static_cast<size_t>(ng));
  std::iota(all.begin(), all.end(), 0);
  const int root = b.build(std::move(all));

  // Postorder and group positions.
  std::vector<int> order;
  {
    std::vector<std::pair<int, size_t>> stack{{root, 0}};
    while (!stack.empty()) {
      auto& [v, c] = stack.back();
      if (c < b.children[v].size()) {
        const int ch = b.children[v][c++];
        stack.push_back({ch, 0});
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> newid(b.groups.size());
  for (size_t i = 0; i < order.size(); ++i) newid[order[i]] = static_cast<int>(i);

  std::vector<Index> gpos(static_cast<size_t>(ng));
  Index p = 0;
  for (int v : order)
    for (Index g : b.groups[v]) gpos[g] = p++;

  nodes_.resize(order.size());
  std::vector<std::vector<Index>> ustruct(order.size());  // groups, by position
  std::vector<Index> mark(static_cast<size_t>(ng), -1);
  for (size_t t = 0; t < order.size(); ++t) {
    const int v = order[t];
    Node& node = nodes_[t];
    for (int c : b.children[v]) node.children.push_back(newid[c]);
    Index last = -1;
    for (Index g : b.groups[v]) last = std::max(last, gpos[g]);
    std::vector<Index>& us = ustruct[t];
    auto add = [&](Index h) {
      if (gpos[h] > last && mark[h] != static_cast<Index>(t)) {
        mark[h] = static_cast<Index>(t);
        us.push_back(h);
      }
    };
    for (int c : node.children) {
      for (Index h : ustruct[c]) add(h);
      std::vector<Index>().swap(ustruct[c]);
    }
    for (Index g : b.groups[v])
      for (Index h : adj[g]) add(h);
    std::sort(us.begin(), us.end(), [&](Index x, Index y) { return gpos[x] < gpos[y]; });
    std::vector<Index> gs = b.groups[v];
    std::sort(gs.begin(), gs.end(), [&](Index x, Index y) { return gpos[x] < gpos[y]; });
    for (Index g : gs) node.vars.insert(node.vars.end(), vars_of[g].begin(), vars_of[g].end());
    for (Index g : us) node.update.insert(node.update.end(), vars_of[g].begin(), vars_of[g].end());
  }
}

double SymbolicAnalysis::factor_entries() const {
  double s = 0.0;
  for (const auto& nd : nodes_) {
    const double k = double(nd.vars.size()), u = double(nd.update.size());
    s += k * (k + 1) / 2 + k * u;
  }
  return s;
}

double SymbolicAnalysis::factor_flops() const {
  double s = 0.0;
  for (const auto& nd : nodes_) {
    const double k = double(nd.vars.size()), u = double(nd.update.size());
    s += k * k * k / 3 + k * k * u + k * u * u;
  }
  return s;
}

SparseLdlt::SparseLdlt(std::shared_ptr<const SymbolicAnalysis> sym, const SpMat& a, double shift,
                       bool keep_factors)
    : sym_(std::move(sym)), kept_(keep_factors) {
  const auto& nodes = sym_->nodes();
  if (a.rows() != sym_->dim()) throw BasisMismatchError("matrix does not match symbolic analysis");
  std::vector<Index> loc(static_cast<size_t>(a.rows()), -1);
  std::vector<CMat> cb(nodes.size());
  if (kept_) {
    factors_.resize(nodes.size());
    pivots_.resize(nodes.size());
  }
  for (size_t t = 0; t < nodes.size(); ++t) {
    const auto& nd = nodes[t];
    const Index nfs = static_cast<Index>(nd.vars.size());
    const Index nu = static_cast<Index>(nd.update.size());
    const Index nf = nfs + nu;
    for (Index i = 0; i < nfs; ++i) loc[nd.vars[i]] = i;
    for (Index i = 0; i < nu; ++i) loc[nd.update[i]] = nfs + i;
    CMat F = CMat::Zero(nf, nf);
    for (Index jl = 0; jl < nfs; ++jl) {
      const Index j = nd.vars[jl];
      for (SpMat::InnerIterator it(a, j); it; ++it) {
        const Index li = loc[it.row()];
        if (li >= jl) F(li, jl) += it.value();
      }
      F(jl, jl) -= shift;
    }
    for (int c : nd.children) {
      const auto& cu = nodes[c].update;
      CMat& C = cb[c];
      const Index m = static_cast<Index>(cu.size());
      std::vector<Index> map(static_cast<size_t>(m));
      for (Index i = 0; i < m; ++i) map[i] = loc[cu[i]];
      for (Index q = 0; q < m; ++q) {
        const Index lq = map[q];
        for (Index pp = q; pp < m; ++pp) F(map[pp], lq) += C(pp, q);
      }
      CMat().swap(C);
    }
    BkPivots piv = bk_factor(F, nfs);
    inertia_ += pivot_inertia(F, piv);
    breakdown_ = breakdown_ || piv.breakdown;
    if (nu > 0) cb[t] = F.bottomRightCorner(nu, nu);
    if (kept_) {
      factors_[t] = F.leftCols(nfs);
      pivots_[t] = std::move(piv);
    }
    for (Index v : nd.vars) loc[v] = -1;
    for (Index v : nd.update) loc[v] = -1;
  }
}

void SparseLdlt::solve_in_place(CVec& x) const {
  if (!kept_) throw PreconditionError("factorization was computed without keeping factors");
  const auto& nodes = sym_->nodes();
  CVec z, u;
  for (size_t t = 0; t < nodes.size(); ++t) {
    const auto& nd = nodes[t];
    const Index nfs = static_cast<Index>(nd.vars.size());
    const Index nu = static_cast<Index>(nd.update.size());
    const CMat& L = factors_[t];
    z.resize(nfs);
    for (Index i = 0; i < nfs; ++i) z(i) = x(nd.vars[i]);
    front_forward(L, pivots_[t], nfs, z);
    if (nu > 0) {
      u.noalias() = L.bottomRows(nu) * z;
      for (Index i = 0; i < nu; ++i) x(nd.update[i]) -= u(i);
    }
    front_diag(L, pivots_[t], nfs, z);
    for (Index i = 0; i < nfs; ++i) x(nd.vars[i]) = z(i);
  }
  for (size_t t = nodes.size(); t-- > 0;) {
    const auto& nd = nodes[t];
    const Index nfs = static_cast<Index>(nd.vars.size());
    const Index nu = static_cast<Index>(nd.update.size());
    const CMat& L = factors_[t];
    z.resize(nfs);
    for (Index i = 0; i < nfs; ++i) z(i) = x(nd.vars[i]);
    if (nu > 0) {
      u.resize(nu);
      for (Index i = 0; i < nu; ++i) u(i) = x(nd.update[i]);
      z.noalias() -= L.bottomRows(nu).adjoint() * u;
    }
    front_backward(L, pivots_[t], nfs, z);
    for (Index i = 0; i < nfs; ++i) x(nd.vars[i]) = z(i);
  }
}

}  // namespace sloc
