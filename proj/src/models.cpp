#include "svp/models.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "svp/errors.hpp"

namespace svp {

namespace {

Sft restricted_sft(int k, const std::vector<std::vector<int>>& incidence,
                   const std::optional<std::vector<std::vector<int>>>& restriction) {
  if (!restriction) return validate_sft(incidence);
  if (int(restriction->size()) != k) fail(ErrorCode::NotMarkov, "restriction size mismatch");
  std::vector<std::vector<int>> rows(std::size_t(k), std::vector<int>(std::size_t(k), 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      int r = (*restriction)[std::size_t(i)][std::size_t(j)];
      if (r && !incidence[std::size_t(i)][std::size_t(j)])
        fail(ErrorCode::NotMarkov, "restriction allows a geometrically forbidden transition");
      rows[std::size_t(i)][std::size_t(j)] = r;
    }
  return validate_sft(rows);
}

}  // namespace

ModelSystem build_1d(const PiecewiseLinearMap1D& map) {
  int k = int(map.branches.size());
  if (k == 0) fail(ErrorCode::NotMarkov, "map needs at least one branch");
  for (const auto& b : map.branches) {
    if (!(std::fabs(b.slope) > 1.0)) fail(ErrorCode::NotMarkov, "branch slopes must expand");
    if (!(b.hi > b.lo)) fail(ErrorCode::NotMarkov, "empty branch domain");
  }
  // branch domains must have pairwise disjoint interiors
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const auto& a = map.branches[std::size_t(i)];
      const auto& b = map.branches[std::size_t(j)];
      if (std::min(a.hi, b.hi) - std::max(a.lo, b.lo) > 1e-12)
        fail(ErrorCode::NotMarkov, "branch domains overlap");
    }

  double hull_lo = map.branches.front().lo, hull_hi = map.branches.front().hi;
  for (const auto& b : map.branches) {
    hull_lo = std::min(hull_lo, b.lo);
    hull_hi = std::max(hull_hi, b.hi);
  }

  // affine branch maps f_i(x) = a_i + s_i x, each spanning the domain hull;
  // incidence i -> j iff the image covers branch j's domain
  struct Affine {
    double a, s;
  };
  auto affines = std::make_shared<std::vector<Affine>>();
  std::vector<std::vector<int>> incidence(std::size_t(k), std::vector<int>(std::size_t(k), 0));
  for (int i = 0; i < k; ++i) {
    const auto& b = map.branches[std::size_t(i)];
    double image_lo = hull_lo, image_hi = hull_lo + std::fabs(b.slope) * (b.hi - b.lo);
    double a = b.slope > 0 ? image_lo - b.slope * b.lo : image_hi - b.slope * b.lo;
    affines->push_back({a, b.slope});
    for (int j = 0; j < k; ++j) {
      const auto& dom = map.branches[std::size_t(j)];
      bool covered = dom.lo >= image_lo - 1e-12 && dom.hi <= image_hi + 1e-12;
      bool disjoint = dom.hi <= image_lo + 1e-12 || dom.lo >= image_hi - 1e-12;
      if (!covered && !disjoint)
        fail(ErrorCode::NotMarkov, "branch image partially overlaps a domain");
      incidence[std::size_t(i)][std::size_t(j)] = covered ? 1 : 0;
    }
  }

  ModelSystem out;
  out.system.sft = restricted_sft(k, incidence, map.transitions);
  std::vector<Mat> mats;
  for (const auto& b : map.branches) mats.push_back(Mat(1, {b.slope}));
  out.system.cocycle = make_cocycle(std::move(mats), MatrixCocycle::Orientation::Derivative);
  out.system.name = "pl1d";

  auto branches = std::make_shared<std::vector<PiecewiseLinearMap1D::Branch>>(map.branches);
  Sft sft = out.system.sft;
  double min_slope = std::fabs(branches->front().slope);
  double max_len = 0.0;
  for (const auto& b : *branches) {
    min_slope = std::min(min_slope, std::fabs(b.slope));
    max_len = std::max(max_len, b.hi - b.lo);
  }
  out.realizer.dim = 1;
  out.realizer.max_diameter = [min_slope, max_len](int m) {
    return max_len * std::pow(min_slope, -(m - 1));
  };
  out.realizer.piece_count = [sft](int m) { return count_words(sft, m).as_double(); };
  out.realizer.pieces = [sft, branches, affines](
                            int m, const std::function<void(const GeometryPiece&)>& emit) {
    // composed forward map F_w(x) = A + S x along the DFS; the depth-m piece
    // is F_{w-minus-last}^{-1}(domain of the last symbol)
    struct Node {
      double a, s;
    };
    std::vector<Node> stack{{0.0, 1.0}};
    visit_words(
        sft, m,
        [&](int symbol, int depth) {
          const Node& f = stack.back();
          if (depth == m) {
            const auto& dom = (*branches)[std::size_t(symbol)];
            double x1 = (dom.lo - f.a) / f.s;
            double x2 = (dom.hi - f.a) / f.s;
            GeometryPiece piece;
            piece.lo[0] = std::min(x1, x2);
            piece.hi[0] = std::max(x1, x2);
            emit(piece);
            stack.push_back(f);  // matched by leave()
            return true;
          }
          const Affine& g = (*affines)[std::size_t(symbol)];
          // F' = f_symbol o F
          stack.push_back({g.a + g.s * f.a, g.s * f.s});
          return true;
        },
        [&]() { stack.pop_back(); });
  };
  return out;
}

ModelSystem build_toral(const DiagonalToralSystem& spec) {
  int d = int(spec.factors.size());
  if (d < 1 || d > kMaxDim) fail(ErrorCode::BadInput, "factor count out of range");
  for (int f : spec.factors)
    if (f < 2) fail(ErrorCode::BadInput, "expansion factors must be >= 2");
  int k = int(spec.digits.size());
  if (k == 0) fail(ErrorCode::EmptyDigitSet, "digit set is empty");
  for (const auto& dig : spec.digits) {
    if (int(dig.size()) != d) fail(ErrorCode::BadInput, "digit tuple size mismatch");
    for (int a = 0; a < d; ++a)
      if (dig[std::size_t(a)] < 0 || dig[std::size_t(a)] >= spec.factors[std::size_t(a)])
        fail(ErrorCode::BadInput, "digit out of range");
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (spec.digits[std::size_t(i)] == spec.digits[std::size_t(j)])
        fail(ErrorCode::BadInput, "digit tuples must be distinct");

  ModelSystem out;
  std::vector<std::vector<int>> full(std::size_t(k), std::vector<int>(std::size_t(k), 1));
  out.system.sft = restricted_sft(k, full, spec.transitions);

  Mat gen(d);
  for (int a = 0; a < d; ++a) gen.at(a, a) = double(spec.factors[std::size_t(a)]);
  std::vector<Mat> mats(std::size_t(k), gen);

  // blocks strongest-first when the coordinate groups are contiguous
  std::optional<BlockSplit> blocks;
  {
    std::vector<std::pair<int, int>> groups;  // (factor, size) in axis order
    for (int a = 0; a < d; ++a) {
      if (!groups.empty() && groups.back().first == spec.factors[std::size_t(a)])
        groups.back().second++;
      else
        groups.push_back({spec.factors[std::size_t(a)], 1});
    }
    bool sortable = true;
    std::vector<int> seen;
    for (const auto& g : groups) {
      if (std::count(seen.begin(), seen.end(), g.first)) sortable = false;
      seen.push_back(g.first);
    }
    if (sortable) {
      std::vector<std::pair<int, BlockSplit::Block>> items;
      int off = 0;
      for (const auto& g : groups) {
        items.push_back({g.first, {off, g.second}});
        off += g.second;
      }
      std::sort(items.begin(), items.end(),
                [](const auto& x, const auto& y) { return x.first > y.first; });
      BlockSplit bs;
      for (const auto& it : items) bs.blocks.push_back(it.second);
      blocks = bs;
    }
  }
  out.system.cocycle =
      make_cocycle(std::move(mats), MatrixCocycle::Orientation::Derivative, blocks);
  out.system.name = "toral";

  Sft sft = out.system.sft;
  auto factors = std::make_shared<std::vector<int>>(spec.factors);
  auto digits = std::make_shared<std::vector<std::vector<int>>>(spec.digits);
  out.realizer.dim = d;
  out.realizer.max_diameter = [factors](int m) {
    double sum = 0.0;
    for (int f : *factors) sum += std::pow(double(f), -2.0 * m);
    return std::sqrt(sum);
  };
  out.realizer.piece_count = [sft](int m) { return count_words(sft, m).as_double(); };
  out.realizer.pieces = [sft, factors, digits](
                            int m, const std::function<void(const GeometryPiece&)>& emit) {
    int dd = int(factors->size());
    // numerators per axis: piece = prod_a [num_a, num_a + 1] / factor_a^m
    std::vector<std::array<double, 3>> stack{{0.0, 0.0, 0.0}};
    std::vector<double> scale(std::size_t(dd));
    visit_words(
        sft, m,
        [&](int symbol, int depth) {
          std::array<double, 3> num = stack.back();
          for (int a = 0; a < dd; ++a)
            num[std::size_t(a)] = num[std::size_t(a)] * double((*factors)[std::size_t(a)]) +
                                  double((*digits)[std::size_t(symbol)][std::size_t(a)]);
          stack.push_back(num);
          if (depth == m) {
            GeometryPiece piece;
            for (int a = 0; a < dd; ++a) {
              double den = std::pow(double((*factors)[std::size_t(a)]), m);
              piece.lo[std::size_t(a)] = num[std::size_t(a)] / den;
              piece.hi[std::size_t(a)] = (num[std::size_t(a)] + 1.0) / den;
            }
            emit(piece);
          }
          return true;
        },
        [&]() { stack.pop_back(); });
  };
  return out;
}

ModelSystem build_ifs(const SelfAffineIfs& spec) {
  int k = int(spec.maps.size());
  if (k == 0) fail(ErrorCode::BadInput, "IFS needs at least one map");
  if (int(spec.translations.size()) != k)
    fail(ErrorCode::BadInput, "one translation per map required");
  for (const Mat& m : spec.maps) {
    if (m.dim() != spec.d) fail(ErrorCode::BadInput, "map dimension mismatch");
    if (singular_values(m).front() >= 1.0)
      fail(ErrorCode::NotContracting, "IFS maps must be strict contractions");
  }

  ModelSystem out;
  std::vector<std::vector<int>> full(std::size_t(k), std::vector<int>(std::size_t(k), 1));
  out.system.sft = restricted_sft(k, full, spec.transitions);
  out.system.cocycle = make_cocycle(spec.maps, MatrixCocycle::Orientation::Contraction);
  out.system.name = "ifs";

  Sft sft = out.system.sft;
  int d = spec.d;
  auto maps = std::make_shared<std::vector<Mat>>(spec.maps);
  auto trans = std::make_shared<std::vector<std::vector<double>>>(spec.translations);
  double max_alpha = 0.0;
  for (const Mat& m : spec.maps) max_alpha = std::max(max_alpha, singular_values(m).front());
  out.realizer.dim = d;
  out.realizer.max_diameter = [d, max_alpha](int m) {
    return std::sqrt(double(d)) * std::pow(max_alpha, m);
  };
  out.realizer.piece_count = [sft](int m) { return count_words(sft, m).as_double(); };
  out.realizer.pieces = [sft, d, maps, trans](
                            int m, const std::function<void(const GeometryPiece&)>& emit) {
    // composed map S_{w_0} o ... o S_{w_n-1} tracked as (M, t); pieces are
    // bounding boxes of the image of the unit cube (exact for diagonal maps)
    struct Node {
      Mat m;
      std::array<double, kMaxDim> t;
    };
    Node root{Mat::identity(d), {}};
    std::vector<Node> stack{root};
    visit_words(
        sft, m,
        [&](int symbol, int depth) {
          const Node& f = stack.back();
          const Mat& a = (*maps)[std::size_t(symbol)];
          Node next{f.m * a, f.t};
          for (int i = 0; i < d; ++i) {
            double v = 0.0;
            for (int j = 0; j < d; ++j)
              v += f.m.at(i, j) * (*trans)[std::size_t(symbol)][std::size_t(j)];
            next.t[std::size_t(i)] += v;
          }
          stack.push_back(next);
          if (depth == m) {
            GeometryPiece piece;
            for (int i = 0; i < d; ++i) {
              double lo = next.t[std::size_t(i)], hi = next.t[std::size_t(i)];
              for (int j = 0; j < d; ++j) {
                double c = next.m.at(i, j);
                if (c < 0.0) lo += c;
                else hi += c;
              }
              piece.lo[std::size_t(i)] = lo;
              piece.hi[std::size_t(i)] = hi;
            }
            emit(piece);
          }
          return true;
        },
        [&]() { stack.pop_back(); });
  };
  return out;
}

CocycleSystem perturb(const PerturbationFamily& family, double eps) {
  family.base.validate();
  if (family.directions.size() != family.base.cocycle.mats.size())
    fail(ErrorCode::BadInput, "one direction per generator required");
  bool on_grid = false;
  for (double g : family.eps_grid) on_grid = on_grid || (g == eps);
  if (!on_grid) fail(ErrorCode::BadInput, "epsilon is not on the family grid");
  if (eps == 0.0) return family.base;  // bit-identical base

  CocycleSystem out = family.base;
  std::vector<Mat> mats;
  for (std::size_t i = 0; i < family.base.cocycle.mats.size(); ++i)
    mats.push_back(family.base.cocycle.mats[i] + family.directions[i].scaled(eps));
  MatrixCocycle pert;
  try {
    pert = make_cocycle(std::move(mats), family.base.cocycle.orientation,
                        family.base.cocycle.blocks);
  } catch (const Error&) {
    fail(ErrorCode::InvariantBroken, "perturbation destroys invertibility");
  }
  bool orientation_ok =
      family.base.cocycle.orientation == MatrixCocycle::Orientation::Contraction
          ? pert.contracting()
          : (!family.base.cocycle.expanding || pert.expanding);
  if (!orientation_ok)
    fail(ErrorCode::InvariantBroken, "perturbation breaks the contraction/expansion invariant");
  out.cocycle = pert;
  out.name = family.base.name + " eps=" + std::to_string(eps);
  return out;
}

}  // namespace svp
