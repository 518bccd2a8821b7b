#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cdec/linalg.hpp"
#include "cdec/rational.hpp"
#include "cdec/sparse.hpp"

namespace cdec {

/// Vanishing conditions carried by a cochain.  On a product spacetime TC
/// means zero on the temporal collar subcomplex, SC zero on time x spatial
/// end cells, Compact both.  On a plain Cauchy-surface complex the temporal
/// conditions are vacuous: TC acts like Free and SC like Compact.
enum class Support { Free, TC, SC, Compact };

inline const char* support_name(Support s) {
  switch (s) {
    case Support::Free: return "free";
    case Support::TC: return "tc";
    case Support::SC: return "sc";
    case Support::Compact: return "compact";
  }
  return "?";
}

/// Signed incidence triple of a coboundary matrix: row = higher cell,
/// col = lower cell.
struct IncTriple {
  int row;
  int col;
  int sign;  // +1 or -1
};

/// One k-cell: ordered vertex list plus ordered face ids (face i is the cell
/// with the i-th vertex removed).  Vertex lists follow the construction order
/// of the fixture; for quotient fixtures (grid tori) they need not be sorted
/// by global vertex id, and the face maps are the authoritative structure.
struct Cell {
  std::vector<int> verts;
  std::vector<int> faces;
};

/// Oriented finite cell complex for a Cauchy surface.
///
/// The complex is a delta-complex: the simplicial identities of the face maps
/// are verified at construction, incidence signs are (-1)^i on face i, and
/// the fundamental class is computed (not assumed) as the one-dimensional
/// kernel of the top boundary map on interior rows.
class CellComplex {
 public:
  int dimension() const { return dim_; }
  int n_cells(int k) const {
    return (k < 0 || k > dim_) ? 0 : int(cells_[k].size());
  }
  int total_cells() const {
    int t = 0;
    for (int k = 0; k <= dim_; ++k) t += n_cells(k);
    return t;
  }
  const Cell& cell(int k, int id) const { return cells_[k][id]; }

  bool in_end_collar(int k, int id) const { return end_collar_[k][id] != 0; }
  bool has_ends() const { return has_ends_; }

  /// True for cells lying in the closure of the geometric boundary of the
  /// window (codimension-1 cells with a single top coface, plus their faces).
  bool on_boundary(int k, int id) const { return boundary_[k][id] != 0; }

  /// Signed coefficient of the fundamental class on a top cell (+1/-1).
  int fundamental_sign(int top_id) const { return fclass_[top_id]; }

  const std::string& name() const { return name_; }

  /// A surface complex has no temporal direction: TC degenerates to Free and
  /// SC to Compact (zero on the end collar).
  bool allowed(int k, int id, Support s) const {
    if (s == Support::Free || s == Support::TC) return true;
    return !in_end_collar(k, id);
  }

  const std::vector<IncTriple>& cob_triples(int k) const { return cob_[k]; }

  /// BFS distance of each vertex from the end collar in the edge graph
  /// (a large sentinel when there are no ends or the vertex is unreachable).
  const std::vector<int>& collar_vertex_depth() const { return collar_depth_; }

  /// Minimum collar depth over a cell's vertices.
  int cell_collar_depth(int k, int id) const {
    int d = 1 << 28;
    for (int v : cells_[k][id].verts) d = std::min(d, collar_depth_[v]);
    return d;
  }

  /// Coboundary matrix d_k : C^k -> C^{k+1}; entry over face i is (-1)^i.
  template <class S>
  SpMat<S> coboundary_matrix(int k) const {
    SpMat<S> d(n_cells(k + 1), n_cells(k));
    if (k < 0 || k >= dim_) return d;
    for (int c = 0; c < n_cells(k + 1); ++c) {
      const Cell& cell = cells_[k + 1][c];
      for (int i = 0; i < int(cell.faces.size()); ++i) {
        S s = (i % 2 == 0) ? scalar_traits<S>::one() : -scalar_traits<S>::one();
        d.add(c, cell.faces[i], s);
      }
    }
    return d;
  }

  /// Iterated front face [v_0..v_p] of a (p+q)-cell, by removing the last
  /// vertex q times.
  int front_face(int deg, int id, int p) const {
    int cur = id;
    for (int k = deg; k > p; --k) cur = cells_[k][cur].faces[k];
    return cur;
  }

  /// Iterated back face [v_p..v_{p+q}] of a (p+q)-cell, by removing the first
  /// vertex p times.
  int back_face(int deg, int id, int q) const {
    int cur = id;
    for (int k = deg; k > q; --k) cur = cells_[k][cur].faces[0];
    return cur;
  }

  /// Line-oriented dump: one "cell <k> <id> : v0 v1 ..." line per cell and one
  /// "face <k> <cell> <face> <sign>" line per incidence triple.
  std::string dump_cells() const {
    std::string out;
    for (int k = 0; k <= dim_; ++k) {
      for (int c = 0; c < n_cells(k); ++c) {
        out += "cell " + std::to_string(k) + " " + std::to_string(c) + " :";
        for (int v : cells_[k][c].verts) out += " " + std::to_string(v);
        if (in_end_collar(k, c)) out += " end";
        out += "\n";
      }
    }
    for (int k = 1; k <= dim_; ++k)
      for (int c = 0; c < n_cells(k); ++c)
        for (int i = 0; i < int(cells_[k][c].faces.size()); ++i)
          out += "face " + std::to_string(k) + " " + std::to_string(c) + " " +
                 std::to_string(cells_[k][c].faces[i]) + " " +
                 (i % 2 == 0 ? std::string("1") : std::string("-1")) + "\n";
    return out;
  }

 private:
  friend class ComplexBuilder;
  std::string name_;
  int dim_ = 0;
  std::vector<std::vector<Cell>> cells_;
  std::vector<std::vector<char>> end_collar_;
  std::vector<std::vector<char>> boundary_;
  std::vector<int> fclass_;
  std::vector<std::vector<IncTriple>> cob_;
  std::vector<int> collar_depth_;
  bool has_ends_ = false;
};

/// Assembles a CellComplex, checks the delta-complex identities, and derives
/// the fundamental class and boundary/collar bookkeeping.
class ComplexBuilder {
 public:
  explicit ComplexBuilder(std::string name, int dim) {
    c_.name_ = std::move(name);
    c_.dim_ = dim;
    c_.cells_.resize(dim + 1);
  }

  int add_vertex(int label_hint = -1) {
    (void)label_hint;
    c_.cells_[0].push_back(Cell{});
    int id = int(c_.cells_[0].size()) - 1;
    c_.cells_[0].back().verts = {id};
    return id;
  }

  int add_cell(int k, std::vector<int> verts, std::vector<int> faces) {
    if (k < 1 || k > c_.dim_) throw error("add_cell: bad degree");
    if (int(faces.size()) != k + 1 || int(verts.size()) != k + 1)
      throw error("add_cell: a k-cell needs k+1 vertices and faces");
    c_.cells_[k].push_back(Cell{std::move(verts), std::move(faces)});
    return int(c_.cells_[k].size()) - 1;
  }

  void mark_end(int k, int id) { pending_end_.push_back({k, id}); }

  /// Verify structure, compute fundamental class, close the collar downward.
  CellComplex finish() {
    int d = c_.dim_;
    verify_faces();
    c_.end_collar_.assign(d + 1, {});
    c_.boundary_.assign(d + 1, {});
    for (int k = 0; k <= d; ++k) {
      c_.end_collar_[k].assign(c_.cells_[k].size(), 0);
      c_.boundary_[k].assign(c_.cells_[k].size(), 0);
    }
    for (auto [k, id] : pending_end_) c_.end_collar_[k][id] = 1;
    close_under_faces(c_.end_collar_);
    for (int k = 0; k <= d; ++k)
      for (char f : c_.end_collar_[k])
        if (f) c_.has_ends_ = true;
    compute_boundary();
    verify_collar_subcomplex();
    compute_fundamental_class();
    build_cob_triples();
    compute_collar_depth();
    return std::move(c_);
  }

 private:
  void verify_faces() {
    int d = c_.dim_;
    for (int k = 1; k <= d; ++k) {
      for (int id = 0; id < int(c_.cells_[k].size()); ++id) {
        const Cell& cell = c_.cells_[k][id];
        for (int i = 0; i <= k; ++i) {
          int f = cell.faces[i];
          if (f < 0 || f >= int(c_.cells_[k - 1].size()))
            throw error("face id out of range in " + c_.name_);
          if (k >= 1) {
            // the i-th face must carry the vertex list minus the i-th vertex
            const auto& fv = c_.cells_[k - 1][f].verts;
            int src = 0;
            for (int j = 0; j <= k; ++j) {
              if (j == i) continue;
              if (fv[src++] != cell.verts[j])
                throw error("face vertex mismatch in " + c_.name_);
            }
          }
        }
        // simplicial identity d_i d_j = d_{j-1} d_i for i < j
        if (k >= 2) {
          for (int j = 1; j <= k; ++j)
            for (int i = 0; i < j; ++i) {
              int a = c_.cells_[k - 1][cell.faces[j]].faces[i];
              int b = c_.cells_[k - 1][cell.faces[i]].faces[j - 1];
              if (a != b) throw error("face maps violate d_i d_j = d_{j-1} d_i in " + c_.name_);
            }
        }
      }
    }
  }

  void close_under_faces(std::vector<std::vector<char>>& flags) {
    for (int k = c_.dim_; k >= 1; --k)
      for (int id = 0; id < int(c_.cells_[k].size()); ++id)
        if (flags[k][id])
          for (int f : c_.cells_[k][id].faces) flags[k - 1][f] = 1;
  }

  void compute_boundary() {
    int d = c_.dim_;
    if (d == 0) return;
    std::vector<int> cofaces(c_.cells_[d - 1].size(), 0);
    for (const Cell& top : c_.cells_[d])
      for (int f : top.faces) cofaces[f]++;
    for (int id = 0; id < int(c_.cells_[d - 1].size()); ++id)
      if (cofaces[id] == 1) c_.boundary_[d - 1][id] = 1;
    close_under_faces(c_.boundary_);
  }

  void verify_collar_subcomplex() {
    // end collar must lie on the geometric boundary
    for (int k = 0; k <= c_.dim_; ++k)
      for (int id = 0; id < int(c_.cells_[k].size()); ++id)
        if (c_.end_collar_[k][id] && !c_.boundary_[k][id])
          throw error("end collar cell off the window boundary in " + c_.name_);
  }

  void compute_fundamental_class() {
    int d = c_.dim_;
    int ntop = int(c_.cells_[d].size());
    if (ntop == 0) throw error("complex has no top cells: " + c_.name_);
    // boundary matrix restricted to interior (two-coface) rows
    int nfaces = d > 0 ? int(c_.cells_[d - 1].size()) : 0;
    std::vector<int> cofaces(nfaces, 0);
    if (d > 0)
      for (const Cell& top : c_.cells_[d])
        for (int f : top.faces) cofaces[f]++;
    SpMat<Rational> b(nfaces, ntop);
    if (d > 0) {
      for (int t = 0; t < ntop; ++t) {
        const Cell& top = c_.cells_[d][t];
        for (int i = 0; i <= d; ++i) {
          if (cofaces[top.faces[i]] < 2) continue;  // boundary rows carry no condition
          b.add(top.faces[i], t, scalar_traits<Rational>::from_int(i % 2 == 0 ? 1 : -1));
        }
      }
    }
    auto ns = nullspace(b);
    if (ns.size() != 1)
      throw error("fundamental class is not unique (complex not a connected oriented window): " +
                  c_.name_);
    c_.fclass_.assign(ntop, 0);
    Rational lead = ns[0].nz.front().second;
    for (auto& e : ns[0].nz) {
      Rational v = e.second / lead;
      if (v == 1)
        c_.fclass_[e.first] = 1;
      else if (v == -1)
        c_.fclass_[e.first] = -1;
      else
        throw error("fundamental class has non-unit coefficient: " + c_.name_);
    }
    for (int t = 0; t < ntop; ++t)
      if (c_.fclass_[t] == 0) throw error("fundamental class misses a top cell: " + c_.name_);
  }

  void build_cob_triples() {
    int d = c_.dim_;
    c_.cob_.resize(d + 1);
    for (int k = 0; k < d; ++k) {
      for (int cid = 0; cid < int(c_.cells_[k + 1].size()); ++cid) {
        const Cell& cell = c_.cells_[k + 1][cid];
        for (int i = 0; i < int(cell.faces.size()); ++i)
          c_.cob_[k].push_back({cid, cell.faces[i], (i % 2 == 0) ? 1 : -1});
      }
    }
  }

  void compute_collar_depth() {
    int nv = int(c_.cells_[0].size());
    const int kFar = 1 << 28;
    c_.collar_depth_.assign(nv, kFar);
    std::vector<int> queue;
    for (int v = 0; v < nv; ++v)
      if (c_.end_collar_[0][v]) {
        c_.collar_depth_[v] = 0;
        queue.push_back(v);
      }
    if (c_.dim_ < 1) return;
    std::vector<std::vector<int>> adj(nv);
    for (const Cell& e : c_.cells_[1]) {
      adj[e.verts[0]].push_back(e.verts[1]);
      adj[e.verts[1]].push_back(e.verts[0]);
    }
    for (size_t h = 0; h < queue.size(); ++h) {
      int v = queue[h];
      for (int w : adj[v])
        if (c_.collar_depth_[w] == kFar) {
          c_.collar_depth_[w] = c_.collar_depth_[v] + 1;
          queue.push_back(w);
        }
    }
  }

  CellComplex c_;
  std::vector<std::pair<int, int>> pending_end_;
};

}  // namespace cdec
