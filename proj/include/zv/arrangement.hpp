#pragma once

// Hyperplane arrangements: exact enumeration of full-dimensional cells with
// strict-interior witnesses.
//
// Hyperplanes equal up to scaling (including antiparallel) are collapsed to
// one canonical representative; an index map lets callers recover the sign of
// any original hyperplane from a canonical sign vector.
//
// Enumeration groups canonical hyperplanes into parallel classes and branches
// on the interval a cell occupies within each class (two LPs per search node
// bound the class functional over the current branch region; only intervals
// meeting the open region spawn children).  Every leaf is a nonempty open
// cell by construction, so no feasibility re-checks are needed and the per
// cell work is one interior-point LP for the witness.
//
// Central arrangements (all offsets zero) are instead sliced: every open
// cone meets {x_j = 1} or {x_j = -1}, so the cells of the slice arrangement
// on {x_j = 1}, together with their mirrors under x -> -x, cover everything.
// The axis is chosen to minimize distinct slice directions, which restores
// parallel classes for arrangements whose normals differ only along one
// coordinate (homogenized networks sliced along the homogenizing input).

#include <zv/lp.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace zv {

struct Hyperplane {
  RVector normal;   // must be nonzero
  Rational offset;  // the set { x : normal . x = offset }
};

// -1 below / +1 above per canonical hyperplane; 0 only from signs_at.
using SignVector = std::vector<std::int8_t>;

inline int sign_of(const Hyperplane& h, const RVector& x) {
  return (dot(h.normal, x) - h.offset).sign();
}

class HyperplaneArrangement {
public:
  HyperplaneArrangement(std::vector<Hyperplane> hyperplanes, std::size_t dim)
      : dim_(dim), original_(std::move(hyperplanes)) {
    if (dim_ == 0) throw input_error("HyperplaneArrangement: ambient dimension must be >= 1");
    std::map<std::pair<RVector, Rational>, std::size_t> seen;
    for (const auto& h : original_) {
      if (h.normal.size() != dim_)
        throw input_error("HyperplaneArrangement: hyperplane dimension mismatch");
      std::size_t lead = dim_;
      for (std::size_t i = 0; i < dim_; ++i)
        if (!h.normal[i].is_zero()) {
          lead = i;
          break;
        }
      if (lead == dim_) throw input_error("HyperplaneArrangement: zero normal");
      Rational l = h.normal[lead];
      RVector n(dim_);
      for (std::size_t i = 0; i < dim_; ++i) n[i] = h.normal[i] / l;
      Rational beta = h.offset / l;
      auto key = std::make_pair(n, beta);
      auto it = seen.find(key);
      std::size_t ci;
      if (it == seen.end()) {
        ci = canonical_.size();
        seen.emplace(std::move(key), ci);
        canonical_.push_back(Hyperplane{std::move(n), std::move(beta)});
      } else {
        ci = it->second;
      }
      map_.emplace_back(ci, l.sign());
    }
  }

  std::size_t ambient_dim() const { return dim_; }
  std::size_t original_count() const { return original_.size(); }
  std::size_t canonical_count() const { return canonical_.size(); }
  const std::vector<Hyperplane>& originals() const { return original_; }
  const std::vector<Hyperplane>& canonical() const { return canonical_; }

  // original index -> (canonical index, orientation): for any x,
  // sign(original_i at x) = orientation_i * sign(canonical at x).
  const std::vector<std::pair<std::size_t, int>>& index_map() const { return map_; }

private:
  std::size_t dim_;
  std::vector<Hyperplane> original_;
  std::vector<Hyperplane> canonical_;
  std::vector<std::pair<std::size_t, int>> map_;
};

struct Cell {
  SignVector signs;        // one entry per canonical hyperplane
  RVector witness;         // strictly on the stated side of each hyperplane
  Polyhedron as_polyhedron;  // closure of the cell (full-dimensional)
};

// Signs of x against every canonical hyperplane (0 = on the hyperplane).
inline SignVector signs_at(const HyperplaneArrangement& arr, const RVector& x) {
  SignVector s(arr.canonical_count());
  for (std::size_t i = 0; i < arr.canonical_count(); ++i)
    s[i] = static_cast<std::int8_t>(sign_of(arr.canonical()[i], x));
  return s;
}

// Closure of the cell with the given canonical sign vector, one row per
// canonical hyperplane.  The set is empty iff the sign vector is infeasible.
inline Polyhedron restrict_to_cell(const HyperplaneArrangement& arr, const SignVector& signs) {
  if (signs.size() != arr.canonical_count())
    throw input_error("restrict_to_cell: sign vector length mismatch");
  Polyhedron p(arr.ambient_dim());
  for (std::size_t i = 0; i < signs.size(); ++i) {
    const auto& h = arr.canonical()[i];
    if (signs[i] > 0)
      p.add_row(-h.normal, -h.offset);
    else
      p.add_row(h.normal, h.offset);
  }
  return p;
}

namespace detail {

// Strict-interior point of p, or nullopt when p is empty or lower-dimensional.
inline std::optional<RVector> interior_witness(const Polyhedron& p) {
  LPResult r = lp_interior_point(p);
  if (r.status != LpStatus::Optimal) throw internal_error("interior_witness: probe not optimal");
  if (r.value.sign() <= 0) return std::nullopt;
  RVector x(p.dim);
  for (std::size_t i = 0; i < p.dim; ++i) x[i] = r.point[i];
  return x;
}

// Canonical hyperplanes sharing a direction, offsets strictly ascending.
struct ParallelClass {
  RVector normal;
  std::vector<Rational> offsets;
  std::vector<std::size_t> canon_idx;  // index of the i-th smallest offset
};

inline std::vector<ParallelClass> parallel_classes(const HyperplaneArrangement& arr) {
  std::map<RVector, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < arr.canonical_count(); ++i)
    groups[arr.canonical()[i].normal].push_back(i);
  std::vector<ParallelClass> classes;
  for (auto& [n, idx] : groups) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return arr.canonical()[a].offset < arr.canonical()[b].offset;
    });
    ParallelClass pc;
    pc.normal = n;
    for (std::size_t i : idx) {
      pc.offsets.push_back(arr.canonical()[i].offset);
      pc.canon_idx.push_back(i);
    }
    classes.push_back(std::move(pc));
  }
  // Small classes first keeps the shallow levels of the search tree narrow.
  std::stable_sort(classes.begin(), classes.end(),
                   [](const ParallelClass& a, const ParallelClass& b) {
                     return a.offsets.size() < b.offsets.size();
                   });
  return classes;
}

class CellEnumerator {
public:
  CellEnumerator(const HyperplaneArrangement& arr, const Polyhedron* region)
      : arr_(arr), classes_(parallel_classes(arr)), chosen_(classes_.size()),
        base_(arr.ambient_dim()) {
    if (region) {
      if (region->dim != arr.ambient_dim())
        throw input_error("enumerate_cells: region dimension mismatch");
      base_ = *region;
      if (!interior_witness(base_))
        throw input_error("enumerate_cells: region must be full-dimensional");
    }
  }

  std::vector<Cell> run() {
    descend(0);
    std::sort(out_.begin(), out_.end(),
              [](const Cell& a, const Cell& b) { return a.signs < b.signs; });
    return std::move(out_);
  }

private:
  Polyhedron current() const {
    Polyhedron p = base_;
    for (const auto& [a, beta] : slab_) p.add_row(a, beta);
    return p;
  }

  void descend(std::size_t level) {
    if (level == classes_.size()) {
      emit();
      return;
    }
    const ParallelClass& pc = classes_[level];
    Polyhedron p = current();
    LPResult up = lp_maximize(pc.normal, p);
    LPResult dn = lp_maximize(-pc.normal, p);
    if (up.status == LpStatus::Infeasible || dn.status == LpStatus::Infeasible)
      throw internal_error("enumerate_cells: branch region unexpectedly empty");
    std::optional<Rational> hi, lo;
    if (up.status == LpStatus::Optimal) hi = up.value;
    if (dn.status == LpStatus::Optimal) lo = -dn.value;
    const std::size_t t = pc.offsets.size();
    for (std::size_t k = 0; k <= t; ++k) {
      // Interval k of the class functional is (offsets[k-1], offsets[k]).
      if (k > 0 && hi && !(pc.offsets[k - 1] < *hi)) continue;
      if (k < t && lo && !(pc.offsets[k] > *lo)) continue;
      std::size_t pushed = 0;
      if (k > 0) {
        slab_.emplace_back(-pc.normal, -pc.offsets[k - 1]);
        ++pushed;
      }
      if (k < t) {
        slab_.emplace_back(pc.normal, pc.offsets[k]);
        ++pushed;
      }
      chosen_[level] = k;
      descend(level + 1);
      slab_.resize(slab_.size() - pushed);
    }
  }

  void emit() {
    Cell cell;
    cell.signs.assign(arr_.canonical_count(), 0);
    for (std::size_t l = 0; l < classes_.size(); ++l) {
      const ParallelClass& pc = classes_[l];
      for (std::size_t j = 0; j < pc.canon_idx.size(); ++j)
        cell.signs[pc.canon_idx[j]] = static_cast<std::int8_t>(j < chosen_[l] ? 1 : -1);
    }
    cell.as_polyhedron = current();
    auto w = interior_witness(cell.as_polyhedron);
    if (!w) throw internal_error("enumerate_cells: leaf cell not full-dimensional");
    cell.witness = std::move(*w);
    out_.push_back(std::move(cell));
  }

  const HyperplaneArrangement& arr_;
  std::vector<ParallelClass> classes_;
  std::vector<std::size_t> chosen_;
  Polyhedron base_;
  std::vector<std::pair<RVector, Rational>> slab_;
  std::vector<Cell> out_;
};

} // namespace detail

inline std::vector<Cell> enumerate_cells(const HyperplaneArrangement& arr);

namespace detail {

inline bool is_central(const HyperplaneArrangement& arr) {
  if (arr.canonical_count() == 0) return false;
  for (const auto& h : arr.canonical())
    if (!h.offset.is_zero()) return false;
  return true;
}

// v scaled so its leading nonzero entry is 1, for direction grouping.
inline RVector direction_key(RVector v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) {
      Rational l = v[i];
      for (std::size_t j = i; j < v.size(); ++j) v[j] = v[j] / l;
      break;
    }
  return v;
}

// Cells of a central arrangement via one slice plus the central mirror.
inline std::vector<Cell> enumerate_central(const HyperplaneArrangement& arr) {
  const std::size_t d = arr.ambient_dim();

  std::size_t axis = 0;
  std::size_t fewest = std::numeric_limits<std::size_t>::max();
  for (std::size_t j = 0; j < d; ++j) {
    std::set<RVector> dirs;
    for (const auto& h : arr.canonical()) {
      RVector n(d - 1);
      std::size_t t = 0;
      for (std::size_t c = 0; c < d; ++c)
        if (c != j) n[t++] = h.normal[c];
      if (!n.is_zero()) dirs.insert(direction_key(std::move(n)));
    }
    if (dirs.size() < fewest) {
      fewest = dirs.size();
      axis = j;
    }
  }

  std::vector<Hyperplane> sliced;
  std::vector<std::size_t> central_of;  // slice original index -> canonical index
  std::vector<std::size_t> axis_only;   // canonical indices with normal = e_axis
  for (std::size_t i = 0; i < arr.canonical_count(); ++i) {
    const Hyperplane& h = arr.canonical()[i];
    RVector n(d - 1);
    std::size_t t = 0;
    for (std::size_t c = 0; c < d; ++c)
      if (c != axis) n[t++] = h.normal[c];
    if (n.is_zero()) {
      axis_only.push_back(i);
    } else {
      sliced.push_back({std::move(n), -h.normal[axis]});
      central_of.push_back(i);
    }
  }

  std::vector<Cell> out;
  auto emit_pair = [&](SignVector sigma, RVector witness, Polyhedron cone) {
    SignVector mir(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) mir[i] = static_cast<std::int8_t>(-sigma[i]);
    Polyhedron mcone(d);
    for (const auto& [a, beta] : cone.rows) mcone.add_row(-a, beta);
    Cell minus{std::move(mir), -witness, std::move(mcone)};
    out.push_back(Cell{std::move(sigma), std::move(witness), std::move(cone)});
    out.push_back(std::move(minus));
  };

  if (sliced.empty()) {
    // Every normal lies on the axis: one canonical hyperplane, two half-spaces.
    SignVector sigma(arr.canonical_count(), 1);
    RVector w(d);
    w[axis] = Rational(1);
    emit_pair(std::move(sigma), std::move(w), restrict_to_cell(arr, SignVector(arr.canonical_count(), 1)));
  } else {
    HyperplaneArrangement sarr(std::move(sliced), d - 1);
    // With an axis hyperplane present no cone straddles {x_axis = 0}, and the
    // homogenized slice-cell rows (plus the axis sign) describe it exactly;
    // otherwise fall back to one row per hyperplane, which is always valid.
    const bool compact = !axis_only.empty();
    for (Cell& sc : enumerate_cells(sarr)) {
      SignVector sigma(arr.canonical_count(), 0);
      for (std::size_t i : axis_only) sigma[i] = 1;
      for (std::size_t o = 0; o < central_of.size(); ++o) {
        auto [ci, orient] = sarr.index_map()[o];
        sigma[central_of[o]] = static_cast<std::int8_t>(orient * sc.signs[ci]);
      }
      RVector x(d);
      std::size_t t = 0;
      for (std::size_t c = 0; c < d; ++c)
        x[c] = c == axis ? Rational(1) : sc.witness[t++];
      Polyhedron cone(d);
      if (compact) {
        for (const auto& [a, beta] : sc.as_polyhedron.rows) {
          RVector full(d);
          std::size_t u = 0;
          for (std::size_t c = 0; c < d; ++c) full[c] = c == axis ? -beta : a[u++];
          cone.add_row(std::move(full), Rational(0));
        }
        RVector down(d);
        down[axis] = Rational(-1);
        cone.add_row(std::move(down), Rational(0));
      } else {
        cone = restrict_to_cell(arr, sigma);
      }
      emit_pair(std::move(sigma), std::move(x), std::move(cone));
    }
  }

  std::sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) {
    return a.signs != b.signs ? a.signs < b.signs : a.witness < b.witness;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Cell& a, const Cell& b) { return a.signs == b.signs; }),
            out.end());
  return out;
}

} // namespace detail

// All full-dimensional cells, sorted lexicographically by sign vector.
inline std::vector<Cell> enumerate_cells(const HyperplaneArrangement& arr) {
  if (arr.ambient_dim() >= 2 && detail::is_central(arr)) return detail::enumerate_central(arr);
  return detail::CellEnumerator(arr, nullptr).run();
}

// Cells whose interior meets the interior of region; each returned cell is
// intersected with region (witness strictly inside both).  region must be
// full-dimensional.
inline std::vector<Cell> enumerate_cells(const HyperplaneArrangement& arr,
                                         const Polyhedron& region) {
  return detail::CellEnumerator(arr, &region).run();
}

} // namespace zv
