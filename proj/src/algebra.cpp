#include "hfp/algebra.hpp"

#include "hfp/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace hfp {

int mod(long long a, int m) {
  long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

int inverse_mod(int a, int m) {
  a = mod(a, m);
  for (int x = 1; x < m; ++x) {
    if (mod(static_cast<long long>(a) * x, m) == 1) return x;
  }
  throw IndexOutOfRange(std::to_string(a) + " has no inverse modulo " + std::to_string(m));
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

cplx root_of_unity(int d, long long power) {
  const double angle = 2.0 * kPi * mod(power, d) / d;
  return {std::cos(angle), std::sin(angle)};
}

// ---------------------------------------------------------------------------

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
  const double n = amps_.norm();
  if (amps_.size() == 0 || !(n > 1e-300) || !std::isfinite(n)) {
    throw Error("StateVector: amplitudes must be a finite non-zero vector");
  }
  amps_ /= n;
}

StateVector StateVector::basis(int d, int k) {
  if (d <= 0 || k < 0 || k >= d) throw IndexOutOfRange("StateVector::basis: bad index");
  CVector v = CVector::Zero(d);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::phase_fixed() const {
  CVector v = amps_;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-10) {
      v *= std::conj(v(k)) / std::abs(v(k));
      v(k) = std::abs(v(k));
      break;
    }
  }
  return StateVector(std::move(v));
}

double fidelity(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("fidelity: dimensions differ");
  return std::norm(a.dot(b));
}

bool same_ray(const CVector& a, const CVector& b, double tol) {
  return fidelity(a, b) > 1.0 - tol;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const CMatrix g = u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff() <= tol;
}

double distance_up_to_phase(const CMatrix& a, const CMatrix& b) {
  const cplx num = (b.adjoint() * a).trace();
  const double den = b.squaredNorm();
  const cplx c = den > 0 ? num / den : cplx{};
  return (a - c * b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

CVector MonomialOperator::apply(const CVector& psi) const {
  CVector out(psi.size());
  for (std::size_t r = 0; r < source.size(); ++r) out(r) = phase[r] * psi(source[r]);
  return out;
}

CVector MonomialOperator::apply_adjoint(const CVector& psi) const {
  CVector out(psi.size());
  for (std::size_t r = 0; r < source.size(); ++r) out(source[r]) = std::conj(phase[r]) * psi(r);
  return out;
}

cplx MonomialOperator::expectation(const CVector& psi) const {
  cplx s = 0.0;
  for (std::size_t r = 0; r < source.size(); ++r) s += std::conj(psi(r)) * phase[r] * psi(source[r]);
  return s;
}

CMatrix MonomialOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(source.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) m(r, source[r]) = phase[r];
  return m;
}

// ---------------------------------------------------------------------------

bool HeisenbergGroup::supported(int d, GroupKind kind) {
  if (kind == GroupKind::bipartite) return d == 4;
  constexpr std::array<int, 8> dims{2, 3, 5, 7, 11, 13, 17, 19};
  return std::find(dims.begin(), dims.end(), d) != dims.end();
}

HeisenbergGroup HeisenbergGroup::build(int d, GroupKind kind) {
  if (!supported(d, kind)) {
    throw UnsupportedDimension("no " + std::string(kind == GroupKind::single ? "single" : "bipartite") +
                               " Heisenberg group for d = " + std::to_string(d));
  }
  HeisenbergGroup g;
  g.dim_ = d;
  g.kind_ = kind;
  if (kind == GroupKind::single) {
    g.modulus_ = d;
    const int half = d % 2 ? inverse_mod(2, d) : 0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        g.indices_.push_back({GroupKind::single, {i, j, 0, 0}});
        MonomialOperator op;
        op.source.resize(d);
        op.phase.resize(d);
        for (int r = 0; r < d; ++r) {
          const int s = mod(r - i, d);
          op.source[r] = s;
          long long exponent = static_cast<long long>(j) * s;
          if (d % 2) exponent += static_cast<long long>(half) * i * j;
          op.phase[r] = root_of_unity(d, exponent);
        }
        g.ops_.push_back(std::move(op));
      }
    }
  } else {
    g.modulus_ = 2;
    for (int code = 0; code < 16; ++code) {
      const int a = (code >> 3) & 1, b = (code >> 2) & 1, c = (code >> 1) & 1, e = code & 1;
      g.indices_.push_back({GroupKind::bipartite, {a, b, c, e}});
      MonomialOperator op;
      op.source.resize(4);
      op.phase.resize(4);
      for (int r = 0; r < 4; ++r) {
        const int s1 = (r >> 1) ^ a, s2 = (r & 1) ^ c;
        op.source[r] = 2 * s1 + s2;
        op.phase[r] = ((b * s1 + e * s2) % 2) ? -1.0 : 1.0;
      }
      g.ops_.push_back(std::move(op));
    }
  }
  return g;
}

void HeisenbergGroup::check(const DisplacementIndex& idx) const {
  if (idx.kind != kind_) throw IndexOutOfRange("displacement index of the wrong group kind");
  const int n = kind_ == GroupKind::single ? 2 : 4;
  for (int k = 0; k < 4; ++k) {
    const bool used = k < n;
    if ((used && (idx.v[k] < 0 || idx.v[k] >= modulus_)) || (!used && idx.v[k] != 0)) {
      throw IndexOutOfRange("displacement index component out of range");
    }
  }
}

std::size_t HeisenbergGroup::position(const DisplacementIndex& idx) const {
  check(idx);
  if (kind_ == GroupKind::single) return static_cast<std::size_t>(idx.v[0] * dim_ + idx.v[1]);
  return static_cast<std::size_t>(idx.v[0] * 8 + idx.v[1] * 4 + idx.v[2] * 2 + idx.v[3]);
}

DisplacementIndex HeisenbergGroup::index(int i, int j) const {
  if (kind_ != GroupKind::single) throw IndexOutOfRange("two-component index needs a single-kind group");
  return {GroupKind::single, {mod(i, dim_), mod(j, dim_), 0, 0}};
}

DisplacementIndex HeisenbergGroup::index(int a, int b, int c, int e) const {
  if (kind_ != GroupKind::bipartite) throw IndexOutOfRange("four-component index needs a bipartite group");
  return {GroupKind::bipartite, {mod(a, 2), mod(b, 2), mod(c, 2), mod(e, 2)}};
}

DisplacementIndex HeisenbergGroup::compose(const DisplacementIndex& x, const DisplacementIndex& y) const {
  check(x);
  check(y);
  DisplacementIndex r{kind_, {}};
  for (int k = 0; k < 4; ++k) r.v[k] = mod(x.v[k] + y.v[k], modulus_);
  return r;
}

DisplacementIndex HeisenbergGroup::scale(const DisplacementIndex& x, int k) const {
  check(x);
  DisplacementIndex r{kind_, {}};
  for (int n = 0; n < 4; ++n) r.v[n] = mod(static_cast<long long>(x.v[n]) * k, modulus_);
  return r;
}

int HeisenbergGroup::commutation_exponent(const DisplacementIndex& x, const DisplacementIndex& y) const {
  check(x);
  check(y);
  const auto& p = x.v;
  const auto& q = y.v;
  if (kind_ == GroupKind::single) return mod(static_cast<long long>(p[1]) * q[0] - static_cast<long long>(q[1]) * p[0], dim_);
  return mod(p[1] * q[0] - q[1] * p[0] + p[3] * q[2] - q[3] * p[2], 2);
}

CMatrix HeisenbergGroup::displacement(const DisplacementIndex& idx) const {
  return ops_[position(idx)].dense();
}

std::vector<CMatrix> HeisenbergGroup::generators() const {
  if (kind_ == GroupKind::single) return {displacement(index(1, 0)), displacement(index(0, 1))};
  return {displacement(index(1, 0, 0, 0)), displacement(index(0, 1, 0, 0)),
          displacement(index(0, 0, 1, 0)), displacement(index(0, 0, 0, 1))};
}

// ---------------------------------------------------------------------------

namespace {

void require_odd_prime(int d, const char* what) {
  if (d % 2 == 0 || !is_prime(d)) {
    throw UnsupportedDimension(std::string(what) + " requires an odd prime dimension, got " + std::to_string(d));
  }
}

}  // namespace

ParityOperator parity_operator(int d) {
  require_odd_prime(d, "parity_operator");
  CMatrix p = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) p(mod(-k, d), k) = 1.0;
  return {d, std::move(p)};
}

CMatrix negative_parity_frame(int d) {
  require_odd_prime(d, "negative_parity_frame");
  const int m = (d - 1) / 2;
  CMatrix f = CMatrix::Zero(d, m);
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 1; k <= m; ++k) {
    f(k, k - 1) = s;
    f(d - k, k - 1) = -s;
  }
  return f;
}

std::vector<StateVector> negative_parity_basis(int d) {
  const CMatrix f = negative_parity_frame(d);
  std::vector<StateVector> out;
  for (Eigen::Index k = 0; k < f.cols(); ++k) out.emplace_back(f.col(k));
  return out;
}

// ---------------------------------------------------------------------------

std::array<int, 2> SymplecticMatrix::apply(int i, int j, int d) const {
  return {mod(static_cast<long long>(a) * i + static_cast<long long>(b) * j, d),
          mod(static_cast<long long>(c) * i + static_cast<long long>(e) * j, d)};
}

SymplecticMatrix SymplecticMatrix::times(const SymplecticMatrix& o, int d) const {
  return {mod(static_cast<long long>(a) * o.a + static_cast<long long>(b) * o.c, d),
          mod(static_cast<long long>(a) * o.b + static_cast<long long>(b) * o.e, d),
          mod(static_cast<long long>(c) * o.a + static_cast<long long>(e) * o.c, d),
          mod(static_cast<long long>(c) * o.b + static_cast<long long>(e) * o.e, d)};
}

SymplecticMatrix SymplecticMatrix::inverse(int d) const {
  return {mod(e, d), mod(-b, d), mod(-c, d), mod(a, d)};
}

namespace {

// Appleby's formula, valid when the upper-right entry is invertible:
// U_jk = d^{-1/2} w^{(1/2) b^{-1} (a k^2 - 2 j k + e j^2)}.
CMatrix metaplectic_offdiagonal(int d, const SymplecticMatrix& f) {
  const int half = inverse_mod(2, d);
  const int binv = inverse_mod(f.b, d);
  CMatrix u(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const long long q = static_cast<long long>(f.a) * k * k - 2LL * j * k + static_cast<long long>(f.e) * j * j;
      u(j, k) = root_of_unity(d, static_cast<long long>(half) * binv % d * mod(q, d));
    }
  }
  return u / std::sqrt(static_cast<double>(d));
}

}  // namespace

CMatrix clifford_unitary(int d, const SymplecticMatrix& f) {
  require_odd_prime(d, "clifford_unitary");
  const SymplecticMatrix fm{mod(f.a, d), mod(f.b, d), mod(f.c, d), mod(f.e, d)};
  if (mod(static_cast<long long>(fm.a) * fm.e - static_cast<long long>(fm.b) * fm.c, d) != 1) {
    throw ConstructionFailure("clifford_unitary: matrix is not symplectic (det != 1 mod d)");
  }
  CMatrix u;
  if (fm.b != 0) {
    u = metaplectic_offdiagonal(d, fm);
  } else {
    // F = (F S^{-1}) S with S = [[0,-1],[1,0]]; both factors have b != 0.
    const SymplecticMatrix s{0, d - 1, 1, 0};
    const SymplecticMatrix left = fm.times(s.inverse(d), d);
    u = metaplectic_offdiagonal(d, left) * metaplectic_offdiagonal(d, s);
  }
  const auto group = HeisenbergGroup::build(d);
  for (const auto& [i, j] : {std::array<int, 2>{1, 0}, std::array<int, 2>{0, 1}}) {
    const auto image = fm.apply(i, j, d);
    const CMatrix lhs = u * group.displacement(group.index(i, j)) * u.adjoint();
    const CMatrix rhs = group.displacement(group.index(image[0], image[1]));
    if (distance_up_to_phase(lhs, rhs) > 1e-8) {
      throw ConstructionFailure("clifford_unitary: conjugation action check failed");
    }
  }
  return u;
}

SymplecticMatrix zauner_symplectic() { return {0, -1, 1, -1}; }

ZaunerUnitary order3_clifford(int d, const SymplecticMatrix& f) {
  require_odd_prime(d, "order3_clifford");
  const SymplecticMatrix fm{mod(f.a, d), mod(f.b, d), mod(f.c, d), mod(f.e, d)};
  if (!(fm.times(fm, d).times(fm, d) == SymplecticMatrix{})) {
    throw ConstructionFailure("order3_clifford: symplectic matrix does not have order 3");
  }
  ZaunerUnitary z;
  z.dim = d;
  z.action = fm;
  const CMatrix raw = clifford_unitary(d, fm);
  const CMatrix cube = raw * raw * raw;
  z.cube_phase = std::arg(cube.trace() / static_cast<double>(d));
  z.matrix = raw * std::polar(1.0, -z.cube_phase / 3.0);
  const CMatrix check = z.matrix * z.matrix * z.matrix - CMatrix::Identity(d, d);
  if (check.cwiseAbs().maxCoeff() > 1e-10) throw ConstructionFailure("order3_clifford: U^3 is not scalar");
  return z;
}

ZaunerUnitary zauner_unitary(int d) { return order3_clifford(d, zauner_symplectic()); }

std::vector<Eigenspace> order3_eigenspaces(const CMatrix& u) {
  const auto d = u.rows();
  const CMatrix u2 = u * u;
  std::vector<Eigenspace> out;
  for (int m = 0; m < 3; ++m) {
    const cplx lambda = root_of_unity(3, m);
    const CMatrix proj =
        (CMatrix::Identity(d, d) + std::conj(lambda) * u + std::conj(lambda * lambda) * u2) / 3.0;
    const int rank = static_cast<int>(std::lround(proj.trace().real()));
    if (rank == 0) continue;
    const CMatrix herm = 0.5 * (proj + proj.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    // eigenvalues ascending: the last `rank` columns span the range
    out.push_back({lambda, es.eigenvectors().rightCols(rank)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Eigenspace& x, const Eigenspace& y) { return x.dimension() > y.dimension(); });
  return out;
}

}  // namespace hfp
