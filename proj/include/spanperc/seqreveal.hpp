#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "spanperc/exactdet.hpp"
#include "spanperc/oracles.hpp"

namespace spanperc {

// Exact sequential conditioning of a uniform spanning tree: maintains the
// integer adjugate N = delta * Lg^{-1} of the grounded Laplacian, where delta
// counts the spanning trees of the current conditioned network. Conditioning
// an edge in (contract) or out (remove) is a fraction-free rank-one update,
// so a whole reveal costs O(steps * vertices^2) exact-integer work instead of
// one determinant per step.
class RevealEngine {
 public:
  RevealEngine(const DenseNetwork& g, int ground)
      : n_(g.vertex_count()), ground_(ground) {
    if (ground < 0 || ground >= n_)
      throw std::invalid_argument("RevealEngine: bad ground vertex");
    if (!g.connected())
      throw std::invalid_argument("RevealEngine: network disconnected");
    auto [inv, det] = scaled_inverse(g.laplacian().minor_without({ground}));
    adj_ = std::move(inv);
    delta_ = std::move(det);
  }

  // Restart from a precomputed state (same window reused across trials).
  RevealEngine(IntMatrix adjugate, BigInt delta, int vertices, int ground)
      : n_(vertices),
        ground_(ground),
        adj_(std::move(adjugate)),
        delta_(std::move(delta)) {}

  const IntMatrix& adjugate() const { return adj_; }
  const BigInt& weight() const { return delta_; }  // spanning tree count
  int ground() const { return ground_; }

  // Pr(this copy of e in the tree | all conditioning so far) = gamma/delta.
  Rational edge_probability(VertexPair e) const {
    Rational p(gamma(e), delta_);
    p.canonicalize();
    return p;
  }

  // Condition on e in the tree. Refuses edges already forced into a cycle.
  void contract(VertexPair e) {
    BigInt g = gamma(e);
    if (g == 0)
      throw std::invalid_argument("RevealEngine: contracting a cycle edge");
    rank_one_update(e, g, /*deletion=*/false);
  }

  // Condition on e out of the tree. Refuses bridges (probability-one edges).
  void remove(VertexPair e) {
    BigInt beta = delta_ - gamma(e);
    if (beta == 0)
      throw std::invalid_argument("RevealEngine: removing a bridge");
    rank_one_update(e, beta, /*deletion=*/true);
  }

 private:
  // Grounded index, -1 for the ground vertex itself.
  int gi(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("RevealEngine: bad vertex");
    if (v == ground_) return -1;
    return v < ground_ ? v : v - 1;
  }

  // gamma = b^T N b where b = e_u - e_v (ground rows dropped); this equals
  // delta * R_eff(u, v), the number of trees containing the edge.
  BigInt gamma(VertexPair e) const {
    int a = gi(e.first), b = gi(e.second);
    if (a == b)
      throw std::invalid_argument("RevealEngine: degenerate edge");
    if (a < 0) return adj_.at(b, b);
    if (b < 0) return adj_.at(a, a);
    return adj_.at(a, a) + adj_.at(b, b) - 2 * adj_.at(a, b);
  }

  // N' = (N * scale -/+ (Nb)(Nb)^T) / delta, delta' = scale. The division is
  // exact: N' is the adjugate of the contracted/deleted grounded Laplacian.
  void rank_one_update(VertexPair e, const BigInt& scale, bool deletion) {
    const int m = n_ - 1;
    int a = gi(e.first), b = gi(e.second);
    std::vector<BigInt> w(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      BigInt acc = a >= 0 ? adj_.at(i, a) : BigInt(0);
      if (b >= 0) acc -= adj_.at(i, b);
      w[static_cast<std::size_t>(i)] = std::move(acc);
    }
    BigInt t;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        BigInt& cell = adj_.at(i, j);
        mpz_mul(cell.get_mpz_t(), cell.get_mpz_t(), scale.get_mpz_t());
        mpz_mul(t.get_mpz_t(), w[static_cast<std::size_t>(i)].get_mpz_t(),
                w[static_cast<std::size_t>(j)].get_mpz_t());
        if (deletion)
          mpz_add(cell.get_mpz_t(), cell.get_mpz_t(), t.get_mpz_t());
        else
          mpz_sub(cell.get_mpz_t(), cell.get_mpz_t(), t.get_mpz_t());
        mpz_divexact(cell.get_mpz_t(), cell.get_mpz_t(),
                     delta_.get_mpz_t());
      }
    delta_ = scale;
  }

  int n_ = 0;
  int ground_ = 0;
  IntMatrix adj_;
  BigInt delta_;
};

}  // namespace spanperc
