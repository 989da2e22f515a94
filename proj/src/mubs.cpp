#include "hfp/mubs.hpp"

#include "hfp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace hfp {

namespace {

std::vector<DisplacementIndex> span(const HeisenbergGroup& g, const std::vector<DisplacementIndex>& gens) {
  std::set<DisplacementIndex> members{g.indices().front()};
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<DisplacementIndex> current(members.begin(), members.end());
    for (const auto& m : current) {
      for (const auto& x : gens) {
        if (members.insert(g.compose(m, x)).second) grew = true;
      }
    }
  }
  return {members.begin(), members.end()};
}

bool isotropic(const HeisenbergGroup& g, const std::vector<DisplacementIndex>& members) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (!g.commute(members[i], members[j])) return false;
    }
  }
  return true;
}

std::vector<DisplacementIndex> minimal_generators(const HeisenbergGroup& g,
                                                  const std::vector<DisplacementIndex>& members) {
  std::vector<DisplacementIndex> gens;
  std::vector<DisplacementIndex> covered = span(g, gens);
  for (const auto& m : members) {
    if (std::find(covered.begin(), covered.end(), m) != covered.end()) continue;
    gens.push_back(m);
    covered = span(g, gens);
    if (covered.size() == members.size() + 1) break;
  }
  return gens;
}

CMatrix matrix_power(const CMatrix& m, int k) {
  CMatrix r = CMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

// Rescale a generator so that G^order is exactly the identity.
CMatrix normalized_generator(const CMatrix& gen, int order) {
  const CMatrix p = matrix_power(gen, order);
  const cplx lambda = p.trace() / static_cast<double>(gen.rows());
  if ((p - lambda * CMatrix::Identity(gen.rows(), gen.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw DegenerateProjector("petal generator power is not scalar");
  }
  return gen * std::polar(1.0, -std::arg(lambda) / order);
}

}  // namespace

std::vector<Petal> enumerate_petals(const HeisenbergGroup& group) {
  const auto d = static_cast<std::size_t>(group.dim());
  std::set<std::vector<DisplacementIndex>> found;
  const auto& all = group.indices();
  for (std::size_t i = 1; i < all.size(); ++i) {
    auto cyclic = span(group, {all[i]});
    if (cyclic.size() == d) {
      found.insert(cyclic);
      continue;
    }
    for (std::size_t j = 1; j < all.size(); ++j) {
      if (!group.commute(all[i], all[j])) continue;
      if (std::find(cyclic.begin(), cyclic.end(), all[j]) != cyclic.end()) continue;
      auto s = span(group, {all[i], all[j]});
      if (s.size() == d && isotropic(group, s)) found.insert(std::move(s));
    }
  }
  std::vector<Petal> petals;
  for (const auto& s : found) {
    Petal p;
    p.members.assign(s.begin() + 1, s.end());  // drop identity (smallest)
    p.generators = minimal_generators(group, p.members);
    petals.push_back(std::move(p));
  }
  std::sort(petals.begin(), petals.end(),
            [](const Petal& a, const Petal& b) { return a.members < b.members; });
  return petals;
}

std::vector<Flower> enumerate_flowers(const HeisenbergGroup& group, const std::vector<Petal>& petals) {
  const std::size_t n = group.size();
  std::vector<std::vector<std::size_t>> member_pos(petals.size());
  for (std::size_t p = 0; p < petals.size(); ++p) {
    for (const auto& m : petals[p].members) member_pos[p].push_back(group.position(m));
  }
  std::vector<Flower> flowers;
  std::vector<bool> covered(n, false);
  covered[0] = true;
  std::vector<std::size_t> chosen;

  // Exact cover: always extend with a petal containing the smallest uncovered element.
  auto search = [&](auto&& self) -> void {
    const auto it = std::find(covered.begin(), covered.end(), false);
    if (it == covered.end()) {
      Flower f{chosen};
      std::sort(f.petals.begin(), f.petals.end());
      flowers.push_back(std::move(f));
      return;
    }
    const auto first = static_cast<std::size_t>(it - covered.begin());
    for (std::size_t p = 0; p < petals.size(); ++p) {
      const auto& pos = member_pos[p];
      if (std::find(pos.begin(), pos.end(), first) == pos.end()) continue;
      if (std::any_of(pos.begin(), pos.end(), [&](std::size_t q) { return covered[q]; })) continue;
      for (auto q : pos) covered[q] = true;
      chosen.push_back(p);
      self(self);
      chosen.pop_back();
      for (auto q : pos) covered[q] = false;
    }
  };
  search(search);
  std::sort(flowers.begin(), flowers.end(),
            [](const Flower& a, const Flower& b) { return a.petals < b.petals; });
  return flowers;
}

std::vector<Flower> enumerate_flowers(const HeisenbergGroup& group) {
  return enumerate_flowers(group, enumerate_petals(group));
}

Basis petal_eigenbasis(const HeisenbergGroup& group, const Petal& petal, std::size_t petal_position) {
  const int d = group.dim();
  const int order = group.modulus();
  std::vector<CMatrix> gens;
  for (const auto& g : petal.generators) gens.push_back(normalized_generator(group.displacement(g), order));

  // Enumerate group elements and characters as exponent tuples over the generators.
  const auto ngen = gens.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < ngen; ++i) count *= static_cast<std::size_t>(order);
  if (count != static_cast<std::size_t>(d)) throw DegenerateProjector("petal generators do not span the petal");

  auto digits = [&](std::size_t code) {
    std::vector<int> out(ngen);
    for (std::size_t i = ngen; i-- > 0;) {
      out[i] = static_cast<int>(code % order);
      code /= order;
    }
    return out;
  };

  std::vector<CMatrix> elements;
  for (std::size_t code = 0; code < count; ++code) {
    const auto k = digits(code);
    CMatrix u = CMatrix::Identity(d, d);
    for (std::size_t i = 0; i < ngen; ++i) u = u * matrix_power(gens[i], k[i]);
    elements.push_back(std::move(u));
  }

  Basis basis;
  basis.petal = petal_position;
  basis.columns.resize(d, d);
  for (std::size_t chi = 0; chi < count; ++chi) {
    const auto m = digits(chi);
    CMatrix proj = CMatrix::Zero(d, d);
    for (std::size_t code = 0; code < count; ++code) {
      const auto k = digits(code);
      long long exponent = 0;
      for (std::size_t i = 0; i < ngen; ++i) exponent += static_cast<long long>(m[i]) * k[i];
      proj += std::conj(root_of_unity(order, exponent)) * elements[code];
    }
    proj /= static_cast<double>(count);
    const double rank = proj.trace().real();
    if (std::abs(rank - 1.0) > 1e-8) {
      throw DegenerateProjector("character projector has rank " + std::to_string(rank));
    }
    Eigen::Index best = 0;
    proj.colwise().norm().maxCoeff(&best);
    basis.columns.col(static_cast<Eigen::Index>(chi)) = StateVector(proj.col(best)).phase_fixed().amplitudes();
  }
  return basis;
}

MUBasisSet stabilizer_mub(const std::vector<Basis>& petal_bases, const Flower& flower) {
  MUBasisSet mub;
  int label = 0;
  for (auto p : flower.petals) {
    if (p >= petal_bases.size()) throw IndexOutOfRange("flower refers to an unknown petal");
    mub.bases.push_back(petal_bases[p]);
    mub.labels.push_back(label++);
  }
  return mub;
}

double unbiasedness_report(const MUBasisSet& mub) {
  double worst = 0.0;
  const double target = 1.0 / mub.dim();
  for (std::size_t z = 0; z < mub.size(); ++z) {
    for (std::size_t w = z + 1; w < mub.size(); ++w) {
      const CMatrix g = mub.bases[z].columns.adjoint() * mub.bases[w].columns;
      worst = std::max(worst, (g.cwiseAbs2().array() - target).abs().maxCoeff());
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

StabilizerGeometry StabilizerGeometry::build(int d, GroupKind kind) {
  StabilizerGeometry s(HeisenbergGroup::build(d, kind));
  s.petals_ = enumerate_petals(s.group_);
  for (std::size_t p = 0; p < s.petals_.size(); ++p) s.bases_.push_back(petal_eigenbasis(s.group_, s.petals_[p], p));
  s.flowers_ = enumerate_flowers(s.group_, s.petals_);
  return s;
}

StabilizerGeometry StabilizerGeometry::for_dimension(int d) {
  return build(d, d == 4 ? GroupKind::bipartite : GroupKind::single);
}

MUBasisSet StabilizerGeometry::mub(std::size_t flower) const {
  if (flower >= flowers_.size()) {
    throw IndexOutOfRange("flower " + std::to_string(flower) + " out of range (" +
                          std::to_string(flowers_.size()) + " flowers)");
  }
  return stabilizer_mub(bases_, flowers_[flower]);
}

std::vector<StateVector> StabilizerGeometry::stabilizer_states() const {
  std::vector<StateVector> out;
  for (const auto& b : bases_) {
    for (int k = 0; k < b.dim(); ++k) {
      const CVector v = b.column(k);
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const StateVector& s) { return same_ray(s.amplitudes(), v); });
      if (!seen) out.emplace_back(v);
    }
  }
  return out;
}

std::vector<StateVector> stabilizer_states(const HeisenbergGroup& group) {
  return StabilizerGeometry::build(group.dim(), group.kind()).stabilizer_states();
}

}  // namespace hfp
