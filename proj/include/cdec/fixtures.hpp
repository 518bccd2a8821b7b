#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "cdec/complex.hpp"

namespace cdec {

namespace detail {

/// Builds complexes whose cells are identified by ordered vertex-id tuples
/// (genuine ordered simplicial complexes); faces are created recursively.
class TupleComplexBuilder {
 public:
  TupleComplexBuilder(std::string name, int dim, int n_vertices)
      : b_(std::move(name), dim) {
    for (int v = 0; v < n_vertices; ++v) b_.add_vertex();
  }

  int add_simplex(const std::vector<int>& verts) {
    int k = int(verts.size()) - 1;
    if (k == 0) return verts[0];
    auto it = ids_.find(verts);
    if (it != ids_.end()) return it->second;
    std::vector<int> faces;
    faces.reserve(verts.size());
    for (int i = 0; i < int(verts.size()); ++i) {
      std::vector<int> fv = verts;
      fv.erase(fv.begin() + i);
      faces.push_back(add_simplex(fv));
    }
    int id = b_.add_cell(k, verts, faces);
    ids_[verts] = id;
    return id;
  }

  /// Mark as end collar every cell (vertices included) whose vertex tuple
  /// satisfies the predicate on all entries.
  void mark_where(const std::function<bool(int)>& vertex_pred, int n_vertices) {
    for (int v = 0; v < n_vertices; ++v)
      if (vertex_pred(v)) b_.mark_end(0, v);
    for (auto& [verts, id] : ids_) {
      bool all = true;
      for (int v : verts)
        if (!vertex_pred(v)) {
          all = false;
          break;
        }
      if (all) b_.mark_end(int(verts.size()) - 1, id);
    }
  }

  CellComplex finish() { return b_.finish(); }

 private:
  ComplexBuilder b_;
  std::map<std::vector<int>, int> ids_;
};

/// Staircase (Kuhn/Freudenthal) grid complexes in up to three directions,
/// each either wrapped (circle factor) or open (interval factor).  Cells are
/// chains of lifted lattice points; a cell's identity is the chain translated
/// so that its first point has wrapped coordinates inside the fundamental
/// domain, which glues neighboring cubes and quotient walls consistently.
class GridComplexBuilder {
 public:
  struct Dim {
    int size;
    bool wrap;
  };

  GridComplexBuilder(std::string name, std::vector<Dim> dims)
      : dims_(std::move(dims)), b_(std::move(name), int(dims_.size())) {
    for (int v = 0; v < vertex_count(dims_); ++v) b_.add_vertex();
  }

  void build_cells() {
    int d = int(dims_.size());
    std::vector<int> base(d, 0);
    enumerate_bases(base, 0, [&](const std::vector<int>& b) {
      std::vector<int> p(d);
      std::iota(p.begin(), p.end(), 0);
      do {
        std::vector<std::vector<int>> chain{b};
        for (int step : p) {
          auto next = chain.back();
          next[step] += 1;
          chain.push_back(next);
        }
        add_chain(chain);
      } while (std::next_permutation(p.begin(), p.end()));
    });
  }

  /// Mark as end collar every cell all of whose lifted points sit on the
  /// given wall of an open direction.
  void mark_wall(int dim_index, int coord) {
    for (auto& [key, loc] : ids_) {
      int d = int(dims_.size());
      bool on = true;
      for (size_t i = 0; i < key.size(); i += d)
        if (key[i + dim_index] != coord) {
          on = false;
          break;
        }
      if (on) b_.mark_end(loc.first, loc.second);
    }
    std::vector<int> v(dims_.size(), 0);
    enumerate_vertices(v, 0, [&](const std::vector<int>& pt) {
      if (pt[dim_index] == coord) b_.mark_end(0, vertex_id(pt));
    });
  }

  CellComplex finish() { return b_.finish(); }

 private:
  static int vertex_count(const std::vector<Dim>& dims) {
    int n = 1;
    for (auto& d : dims) n *= d.size;
    return n;
  }

  template <class F>
  void enumerate_bases(std::vector<int>& base, int i, const F& f) {
    if (i == int(dims_.size())) {
      f(base);
      return;
    }
    int hi = dims_[i].wrap ? dims_[i].size : dims_[i].size - 1;
    for (base[i] = 0; base[i] < hi; ++base[i]) enumerate_bases(base, i + 1, f);
  }

  template <class F>
  void enumerate_vertices(std::vector<int>& v, int i, const F& f) {
    if (i == int(dims_.size())) {
      f(v);
      return;
    }
    for (v[i] = 0; v[i] < dims_[i].size; ++v[i]) enumerate_vertices(v, i + 1, f);
  }

  int vertex_id(const std::vector<int>& pt) const {
    int id = 0;
    for (int i = 0; i < int(dims_.size()); ++i) {
      int c = pt[i];
      if (dims_[i].wrap) c = ((c % dims_[i].size) + dims_[i].size) % dims_[i].size;
      id = id * dims_[i].size + c;
    }
    return id;
  }

  std::vector<int> normalize(std::vector<std::vector<int>> chain) const {
    for (int i = 0; i < int(dims_.size()); ++i) {
      if (!dims_[i].wrap) continue;
      int c = chain[0][i];
      int m = dims_[i].size;
      int shift = ((c % m) + m) % m - c;
      for (auto& pt : chain) pt[i] += shift;
    }
    std::vector<int> key;
    for (auto& pt : chain) key.insert(key.end(), pt.begin(), pt.end());
    return key;
  }

  int add_chain(const std::vector<std::vector<int>>& chain) {
    int k = int(chain.size()) - 1;
    std::vector<int> key = normalize(chain);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second.second;
    if (k == 0) {
      int id = vertex_id(chain[0]);
      ids_[key] = {0, id};
      return id;
    }
    std::vector<int> verts, faces;
    for (auto& pt : chain) verts.push_back(vertex_id(pt));
    for (int i = 0; i <= k; ++i) {
      auto sub = chain;
      sub.erase(sub.begin() + i);
      faces.push_back(add_chain(sub));
    }
    int id = b_.add_cell(k, verts, faces);
    ids_[key] = {k, id};
    return id;
  }

  std::vector<Dim> dims_;
  ComplexBuilder b_;
  std::map<std::vector<int>, std::pair<int, int>> ids_;
};

/// Staircase-triangulated product of two ordered simplicial complexes with
/// ascending vertex lists.  Product cells are monotone chains in the
/// vertex-pair poset; the result is again an ordered simplicial complex with
/// vertex ids  id(va, vb) = va * nB + vb.
inline TupleComplexBuilder product_builder(const std::string& name,
                                           const CellComplex& a,
                                           const CellComplex& b) {
  int dim = a.dimension() + b.dimension();
  int nb = b.n_cells(0);
  TupleComplexBuilder tb(name, dim, a.n_cells(0) * nb);
  int da = a.dimension(), db = b.dimension();
  for (int ta = 0; ta < a.n_cells(da); ++ta) {
    const auto& va = a.cell(da, ta).verts;
    for (int tbi = 0; tbi < b.n_cells(db); ++tbi) {
      const auto& vb = b.cell(db, tbi).verts;
      std::vector<int> seq(da + db, 0);
      for (int i = 0; i < db; ++i) seq[da + i] = 1;
      std::sort(seq.begin(), seq.end());
      do {
        std::vector<int> chain;
        int ia = 0, ib = 0;
        chain.push_back(va[0] * nb + vb[0]);
        for (int s : seq) {
          if (s == 0)
            ++ia;
          else
            ++ib;
          chain.push_back(va[ia] * nb + vb[ib]);
        }
        tb.add_simplex(chain);
      } while (std::next_permutation(seq.begin(), seq.end()));
    }
  }
  return tb;
}

}  // namespace detail

/// Parsed surface descriptor, e.g. torus2(3,3) or path(4).
struct SigmaSpec {
  std::string kind;
  std::vector<int> params;

  std::string str() const {
    if (params.empty()) return kind;
    std::string s = kind + "(";
    for (size_t i = 0; i < params.size(); ++i)
      s += (i ? "," : "") + std::to_string(params[i]);
    return s + ")";
  }
};

inline SigmaSpec parse_sigma_spec(const std::string& text) {
  SigmaSpec spec;
  auto open = text.find('(');
  if (open == std::string::npos) {
    spec.kind = text;
    return spec;
  }
  if (text.back() != ')') throw error("bad surface descriptor: '" + text + "'");
  spec.kind = text.substr(0, open);
  std::string args = text.substr(open + 1, text.size() - open - 2);
  size_t pos = 0;
  while (pos < args.size()) {
    auto comma = args.find(',', pos);
    std::string tok = args.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    // tolerate the descriptive "ends"/"both ends" tokens from the catalog
    bool numeric = !tok.empty() && tok.find_first_not_of("0123456789 ") == std::string::npos;
    if (numeric) {
      spec.params.push_back(std::stoi(tok));
    } else if (tok.find("end") == std::string::npos) {
      throw error("bad surface descriptor parameter: '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return spec;
}

/// Build a Cauchy-surface complex from a catalog descriptor.
inline CellComplex build_sigma(const SigmaSpec& spec) {
  const auto& p = spec.params;
  auto need = [&](size_t n) {
    if (p.size() != n)
      throw error("descriptor " + spec.kind + " expects " + std::to_string(n) +
                  " parameter(s)");
  };

  if (spec.kind == "circle") {
    need(1);
    int n = p[0];
    if (n < 3) throw error("circle(n) needs n >= 3");
    detail::TupleComplexBuilder tb(spec.str(), 1, n);
    for (int i = 0; i < n; ++i) tb.add_simplex({i, (i + 1) % n});
    return tb.finish();
  }

  if (spec.kind == "path") {
    need(1);
    int n = p[0];
    if (n < 2) throw error("path(n) needs n >= 2");
    detail::TupleComplexBuilder tb(spec.str(), 1, n);
    for (int i = 0; i + 1 < n; ++i) tb.add_simplex({i, i + 1});
    tb.mark_where([](int v) { return v == 0; }, n);
    tb.mark_where([n](int v) { return v == n - 1; }, n);
    return tb.finish();
  }

  if (spec.kind == "sphere2") {
    need(0);
    // octahedron: poles 0 and 5, equator 1..4
    detail::TupleComplexBuilder tb("sphere2", 2, 6);
    for (auto& t : std::vector<std::vector<int>>{{0, 1, 2},
                                                 {0, 2, 3},
                                                 {0, 3, 4},
                                                 {0, 1, 4},
                                                 {1, 2, 5},
                                                 {2, 3, 5},
                                                 {3, 4, 5},
                                                 {1, 4, 5}})
      tb.add_simplex(t);
    return tb.finish();
  }

  if (spec.kind == "sphere3") {
    need(0);
    // boundary of the 4-simplex
    detail::TupleComplexBuilder tb("sphere3", 3, 5);
    for (int skip = 0; skip < 5; ++skip) {
      std::vector<int> t;
      for (int v = 0; v < 5; ++v)
        if (v != skip) t.push_back(v);
      tb.add_simplex(t);
    }
    return tb.finish();
  }

  if (spec.kind == "disk") {
    need(0);
    // hexagonal fan, boundary ring marked as the end
    detail::TupleComplexBuilder tb("disk", 2, 7);
    for (int i = 1; i <= 6; ++i) tb.add_simplex({0, i, i % 6 + 1});
    tb.mark_where([](int v) { return v >= 1; }, 7);
    return tb.finish();
  }

  if (spec.kind == "torus2") {
    need(2);
    if (p[0] < 2 || p[1] < 2) throw error("torus2(p,q) needs p,q >= 2");
    detail::GridComplexBuilder gb(spec.str(), {{p[0], true}, {p[1], true}});
    gb.build_cells();
    return gb.finish();
  }

  if (spec.kind == "torus3") {
    need(3);
    if (p[0] < 2 || p[1] < 2 || p[2] < 2) throw error("torus3(p,q,r) needs p,q,r >= 2");
    detail::GridComplexBuilder gb(spec.str(), {{p[0], true}, {p[1], true}, {p[2], true}});
    gb.build_cells();
    return gb.finish();
  }

  if (spec.kind == "cylinder") {
    need(2);
    if (p[0] < 3 || p[1] < 2) throw error("cylinder(n,m) needs n >= 3, m >= 2");
    detail::GridComplexBuilder gb(spec.str(), {{p[0], true}, {p[1], false}});
    gb.build_cells();
    gb.mark_wall(1, 0);
    gb.mark_wall(1, p[1] - 1);
    return gb.finish();
  }

  if (spec.kind == "line_times_sphere2") {
    need(1);
    int n = p[0];
    if (n < 2) throw error("line_times_sphere2(n) needs n >= 2");
    CellComplex line = build_sigma(SigmaSpec{"path", {n}});
    CellComplex s2 = build_sigma(SigmaSpec{"sphere2", {}});
    auto tb = detail::product_builder(spec.str(), line, s2);
    int nb = s2.n_cells(0);
    tb.mark_where([nb](int v) { return v / nb == 0; }, n * nb);
    tb.mark_where([nb, n](int v) { return v / nb == n - 1; }, n * nb);
    return tb.finish();
  }

  throw error("unknown surface descriptor: '" + spec.kind + "'");
}

inline CellComplex build_sigma(const std::string& descriptor) {
  return build_sigma(parse_sigma_spec(descriptor));
}

}  // namespace cdec
