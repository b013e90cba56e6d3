#include "presb/arch.hpp"

#include <algorithm>
#include <sstream>

#include "presb/error.hpp"

namespace presb {

namespace {

// Archimedean class of a nonzero element: tier 0 is the class of 1, tier 1
// the classes above it, ordered by `index` (through the model's own order).
struct ClassKey {
  int tier = 0;
  std::uint64_t index = 0;
};

ClassKey class_key(const Model& m, const GroupElement& x) {
  if (m.is_zero(x)) throw ZeroElement("archimedean class of 0");
  switch (m.kind()) {
    case Model::Kind::StandardZ:
      return {0, 0};
    case Model::Kind::PL: {
      const auto& e = std::get<PLElem>(x);
      if (e.support.empty()) return {0, 0};
      const auto& ord = m.order();
      OrderIndex lead = e.support.begin()->first;
      for (const auto& [l, q] : e.support) {
        if (ord.less(lead, l)) lead = l;
      }
      return {1, lead};
    }
    case Model::Kind::ZAdjoin:
      return {std::get<ZAdjoinElem>(x).z != 0 ? 1 : 0, 0};
    case Model::Kind::QuadSum: {
      const auto& e = std::get<QuadSumElem>(x);
      if (e.coords.empty()) return {0, 0};
      return {1, e.coords.rbegin()->first};
    }
    case Model::Kind::Cut: {
      const auto& e = std::get<CutElem>(x);
      return {(e.a != 0 || e.b != 0) ? 1 : 0, 0};
    }
  }
  return {0, 0};
}

int compare_keys(const Model& m, const ClassKey& a, const ClassKey& b) {
  if (a.tier != b.tier) return a.tier < b.tier ? -1 : 1;
  if (a.tier == 0 || a.index == b.index) return 0;
  if (m.kind() == Model::Kind::PL) return m.order().less(a.index, b.index) ? -1 : 1;
  return a.index < b.index ? -1 : 1;
}

using Matrix = std::vector<std::vector<Rational>>;

// Rows are coordinate axes, columns are the given elements.
Matrix coordinate_matrix(const Model& m, const std::vector<GroupElement>& columns) {
  std::vector<Coordinates> coords;
  std::set<CoordKey> axes;
  for (const auto& x : columns) {
    coords.push_back(m.coordinates(x));
    for (const auto& [k, v] : coords.back()) axes.insert(k);
  }
  Matrix out;
  for (const auto& axis : axes) {
    std::vector<Rational> row;
    for (const auto& c : coords) {
      auto it = c.find(axis);
      row.push_back(it == c.end() ? Rational(0) : it->second);
    }
    out.push_back(std::move(row));
  }
  return out;
}

// In-place reduced row echelon form; returns the pivot column of each pivot row.
std::vector<std::size_t> rref(Matrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[sel], a[row]);
    Rational inv = 1 / a[row][col];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t c = 0; c < a[r].size(); ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Scales a rational vector to a primitive integer vector.
std::vector<Integer> primitive(const std::vector<Rational>& v) {
  Integer den = 1;
  for (const auto& q : v) den = lcm(den, q.get_den());
  std::vector<Integer> out;
  Integer g = 0;
  for (const auto& q : v) {
    Rational s = q * den;
    out.push_back(s.get_num());
    g = gcd(g, s.get_num());
  }
  if (g > 1) {
    for (auto& k : out) k /= g;
  }
  return out;
}

bool next_box_vector(std::vector<Integer>& v, int box) {
  for (auto& k : v) {
    if (k < box) {
      ++k;
      return true;
    }
    k = -box;
  }
  return false;
}

std::vector<GroupElement> with_one(const Model& m, const std::vector<GroupElement>& basis) {
  std::vector<GroupElement> out{m.one()};
  out.insert(out.end(), basis.begin(), basis.end());
  return out;
}

}  // namespace

std::string to_string(ArchRelation r) {
  switch (r) {
    case ArchRelation::MuchLess:
      return "MUCH_LESS";
    case ArchRelation::Equiv:
      return "EQUIV";
    case ArchRelation::MuchGreater:
      return "MUCH_GREATER";
  }
  return "?";
}

ArchRelation arch_compare(const Model& m, const GroupElement& x, const GroupElement& y) {
  int c = compare_keys(m, class_key(m, x), class_key(m, y));
  if (c < 0) return ArchRelation::MuchLess;
  if (c > 0) return ArchRelation::MuchGreater;
  return ArchRelation::Equiv;
}

bool in_standard_class(const Model& m, const GroupElement& x) {
  if (m.is_divisible()) return false;
  return class_key(m, x).tier == 0;
}

bool bounded_by_integer(const Model& m, const GroupElement& y) {
  if (m.sign(y) <= 0) return true;
  return in_standard_class(m, y);
}

std::vector<GroupElement> class_representatives(const Model& m, const std::vector<GroupElement>& sample) {
  std::vector<GroupElement> reps;
  for (const auto& x : sample) {
    if (m.sign(x) <= 0 || !m.in_divisible_part(x) || in_standard_class(m, x)) continue;
    auto pos = std::lower_bound(reps.begin(), reps.end(), x, [&m](const GroupElement& a, const GroupElement& b) {
      return arch_compare(m, a, b) == ArchRelation::MuchLess;
    });
    if (pos != reps.end() && arch_compare(m, *pos, x) == ArchRelation::Equiv) continue;
    reps.insert(pos, x);
  }
  return reps;
}

OrderPresentation recover_order(const Model& m, const std::vector<GroupElement>& sample, std::size_t budget) {
  if (m.kind() == Model::Kind::ZAdjoin && !m.residues().integer_witness()) {
    throw PreconditionViolated(m.describe() + " is not plain; its residue-free part is not computable");
  }
  if (sample.size() > budget) {
    throw BudgetExceeded("sample of " + std::to_string(sample.size()) + " elements exceeds budget " +
                         std::to_string(budget));
  }
  return OrderPresentation::finite(class_representatives(m, sample).size());
}

std::string to_string(const DependenceEquation& eq) {
  std::ostringstream out;
  out << eq.m.get_str() << "*g = (";
  for (std::size_t i = 0; i < eq.coeffs.size(); ++i) out << (i ? "," : "") << eq.coeffs[i].get_str();
  out << ")";
  return out.str();
}

GroupElement combine(const Model& m, const std::vector<Integer>& coeffs, const std::vector<GroupElement>& elements) {
  if (coeffs.size() != elements.size()) throw std::invalid_argument("coefficient count does not match element count");
  GroupElement acc = m.zero();
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc = m.add(acc, m.scale(coeffs[i], elements[i]));
  return acc;
}

IndependenceVerdict is_linearly_independent(const Model& m, const std::vector<GroupElement>& elements, int bound) {
  Matrix a = coordinate_matrix(m, elements);
  auto pivots = rref(a, elements.size());
  IndependenceVerdict verdict;
  if (pivots.size() < elements.size()) {
    verdict.independent = false;
    std::size_t free = 0;
    while (free < pivots.size() && pivots[free] == free) ++free;
    std::vector<Rational> rel(elements.size(), 0);
    rel[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      if (pivots[r] < free) rel[pivots[r]] = -a[r][free];
    }
    verdict.relation = primitive(rel);
    return verdict;
  }
  if (bound > 0 && !elements.empty() && elements.size() <= 3) {
    std::vector<Integer> k(elements.size(), -bound);
    do {
      bool nontrivial = std::any_of(k.begin(), k.end(), [](const Integer& v) { return v != 0; });
      if (nontrivial && m.is_zero(combine(m, k, elements))) {
        throw std::logic_error("coordinate rank disagrees with relation search");
      }
    } while (next_box_vector(k, bound));
  }
  return verdict;
}

std::optional<DependenceEquation> dependence(const Model& m, const GroupElement& g,
                                             const std::vector<GroupElement>& basis) {
  if (m.is_zero(g)) throw ZeroElement("dependence of 0");
  auto columns = basis;
  columns.push_back(g);
  Matrix a = coordinate_matrix(m, columns);
  auto pivots = rref(a, columns.size());
  std::size_t rank = 0;
  while (rank < pivots.size() && pivots[rank] < basis.size()) ++rank;
  if (rank < basis.size()) throw PreconditionViolated("basis is linearly dependent");
  if (pivots.size() > basis.size()) return std::nullopt;
  std::vector<Rational> c(basis.size() + 1, 0);
  c[0] = 1;
  for (std::size_t r = 0; r < basis.size(); ++r) c[pivots[r] + 1] = a[r][basis.size()];
  auto ints = primitive(c);
  DependenceEquation eq;
  eq.m = ints[0];
  eq.coeffs.assign(ints.begin() + 1, ints.end());
  return eq;
}

CutPredicate cut_of(const Model& m, const std::vector<GroupElement>& elements) {
  CutPredicate cut;
  cut.arity = elements.size();
  cut.decide = [m, elements](const std::vector<Integer>& k) {
    if (k.size() != elements.size()) throw std::invalid_argument("cut arity mismatch");
    return m.sign(combine(m, k, elements)) > 0;
  };
  return cut;
}

PLAutomorphism::PLAutomorphism(Model model, OrderIndex pivot, std::map<OrderIndex, Rational> image_of_pivot)
    : model_(std::move(model)), pivot_(pivot), image_(std::move(image_of_pivot)) {}

GroupElement PLAutomorphism::apply(const GroupElement& x) const {
  model_.check(x);
  PLElem out = std::get<PLElem>(x);
  auto it = out.support.find(pivot_);
  if (it == out.support.end()) return out;
  Rational c = it->second;
  out.support.erase(it);
  for (const auto& [l, q] : image_) {
    auto& slot = out.support[l];
    slot += c * q;
    if (slot == 0) out.support.erase(l);
  }
  return out;
}

PLAutomorphism build_automorphism(const Model& m, const std::vector<OrderIndex>& fix, const GroupElement& p) {
  if (m.kind() != Model::Kind::PL) throw TagMismatch("automorphisms are built for P_L, got " + m.describe());
  m.check(p);
  const auto& e = std::get<PLElem>(p);
  if (m.sign(p) <= 0) throw PreconditionViolated(m.format(p) + " is not positive");
  if (e.z != 0) throw PreconditionViolated(m.format(p) + " has a nonzero residue (Z part)");
  if (e.support.empty()) throw PreconditionViolated(m.format(p) + " is standard");
  auto fixed = [&fix](OrderIndex l) { return std::find(fix.begin(), fix.end(), l) != fix.end(); };
  bool spanned = std::all_of(e.support.begin(), e.support.end(), [&](const auto& kv) { return fixed(kv.first); });
  if (spanned) throw PreconditionViolated(m.format(p) + " is a rational combination of the fixed basis vectors");
  OrderIndex lead = class_key(m, p).index;
  if (fixed(lead)) {
    throw PreconditionViolated("the class of " + m.format(p) + " is the class of a fixed basis vector");
  }
  // p = q_l f_l + rest, G(f_l) = (f_l - rest) / q_l.
  Rational q = e.support.at(lead);
  std::map<OrderIndex, Rational> image;
  for (const auto& [l, c] : e.support) {
    if (l != lead) image[l] = -c / q;
  }
  image[lead] = 1 / q;
  return PLAutomorphism(m, lead, std::move(image));
}

GroupElement extend_by_dependence(const Model& src, const Model& dst, const std::vector<GroupElement>& basis_src,
                                  const std::vector<GroupElement>& basis_dst, const GroupElement& g) {
  if (basis_src.size() != basis_dst.size()) throw std::invalid_argument("bases differ in length");
  if (src.is_zero(g)) return dst.zero();
  auto eq = dependence(src, g, with_one(src, basis_src));
  if (!eq) throw PreconditionViolated(src.format(g) + " is not in the span of the source basis");
  GroupElement rhs = combine(dst, eq->coeffs, with_one(dst, basis_dst));
  auto image = dst.solve_div(rhs, eq->m);
  if (!image) {
    throw DivisionFailed(dst.format(rhs) + " is not divisible by " + eq->m.get_str() + " in " + dst.describe());
  }
  return *image;
}

std::vector<std::pair<GroupElement, GroupElement>> build_isomorphism(
    const Model& src, const Model& dst, const std::vector<GroupElement>& basis_src,
    const std::vector<GroupElement>& basis_dst, const std::vector<GroupElement>& probes,
    const IsomorphismOptions& options) {
  if (basis_src.size() != basis_dst.size()) throw std::invalid_argument("bases differ in length");
  auto full_src = with_one(src, basis_src);
  auto full_dst = with_one(dst, basis_dst);
  if (!is_linearly_independent(src, full_src).independent) throw PreconditionViolated("source basis is dependent");
  if (!is_linearly_independent(dst, full_dst).independent) throw PreconditionViolated("target basis is dependent");

  for (std::size_t i = 0; i < basis_src.size(); ++i) {
    for (std::uint64_t n = 1; n <= options.residue_bound; ++n) {
      Integer a = src.residue(basis_src[i], Integer(static_cast<unsigned long>(n)));
      Integer b = dst.residue(basis_dst[i], Integer(static_cast<unsigned long>(n)));
      if (a != b) {
        throw ResidueMismatch("basis element " + std::to_string(i) + " has residue " + a.get_str() + " mod " +
                              std::to_string(n) + " in the source but " + b.get_str() + " in the target");
      }
    }
  }

  auto cut_src = cut_of(src, full_src);
  auto cut_dst = cut_of(dst, full_dst);
  auto check_cut = [&](const std::vector<Integer>& k) {
    if (cut_src.decide(k) != cut_dst.decide(k)) {
      std::ostringstream msg;
      msg << "cuts differ at coefficients (";
      for (std::size_t i = 0; i < k.size(); ++i) msg << (i ? "," : "") << k[i].get_str();
      msg << ")";
      throw CutMismatch(msg.str());
    }
  };
  int box = options.cut_box;
  double volume = 1;
  for (std::size_t i = 0; i < full_src.size(); ++i) volume *= 2.0 * box + 1;
  if (volume > 1e5) box = 1;
  if (box > 0) {
    std::vector<Integer> k(full_src.size(), -box);
    do {
      check_cut(k);
    } while (next_box_vector(k, box));
  }

  std::vector<std::pair<GroupElement, GroupElement>> graph;
  for (const auto& g : probes) {
    if (!src.is_zero(g)) {
      auto eq = dependence(src, g, full_src);
      if (!eq) throw PreconditionViolated(src.format(g) + " is not in the span of the source basis");
      check_cut(eq->coeffs);
    }
    graph.emplace_back(g, extend_by_dependence(src, dst, basis_src, basis_dst, g));
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.size(); ++j) {
      if (src.compare(graph[i].first, graph[j].first) != dst.compare(graph[i].second, graph[j].second)) {
        throw CutMismatch("order of probes " + std::to_string(i) + " and " + std::to_string(j) + " is not preserved");
      }
    }
  }
  return graph;
}

}  // namespace presb
