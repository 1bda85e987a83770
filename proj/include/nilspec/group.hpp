#pragma once

// Engel and Cartan groups in exponential coordinates: group law, inverse,
// dilations, and the left-invariant frame as exact differential operators.

#include "nilspec/poly_diff_op.hpp"
#include "nilspec/scalar.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nilspec {

enum class GroupId { Engel, Cartan };

std::string_view group_name(GroupId g);
GroupId parse_group(std::string_view name);

/// Topological dimension: 4 (Engel) or 5 (Cartan).
int dimension(GroupId g);

/// Dilation weights (1,1,2,3) / (1,1,2,3,3).
std::vector<int> dilation_weights(GroupId g);

/// Sum of the dilation weights: 7 / 10.
int homogeneous_dimension(GroupId g);

class GroupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The printed group law on coordinate vectors. Works for any ring T that
/// supports + - * and division by an int (Rational, double, Polynomial).
template <class T>
std::vector<T> group_law(GroupId g, std::span<const T> x, std::span<const T> y) {
  std::vector<T> z;
  z.reserve(x.size());
  z.push_back(x[0] + y[0]);
  z.push_back(x[1] + y[1]);
  z.push_back(x[2] + y[2] - x[0] * y[1]);
  z.push_back(x[3] + y[3] + (x[0] * x[0] * y[1]) / 2 - x[0] * y[2]);
  if (g == GroupId::Cartan) z.push_back(x[4] + y[4] + (x[0] * y[1] * y[1]) / 2 - x[1] * y[2] + x[0] * x[1] * y[1]);
  return z;
}

template <class T>
class GroupElement {
 public:
  GroupElement(GroupId g, std::vector<T> coords) : group_(g), coords_(std::move(coords)) {
    if (static_cast<int>(coords_.size()) != dimension(g))
      throw GroupError("GroupElement: expected " + std::to_string(dimension(g)) + " coordinates for " +
                       std::string(group_name(g)) + ", got " + std::to_string(coords_.size()));
  }

  static GroupElement identity(GroupId g) { return GroupElement(g, std::vector<T>(static_cast<std::size_t>(dimension(g)), T(0))); }

  GroupId group() const { return group_; }
  const std::vector<T>& coords() const { return coords_; }
  const T& operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.group_ == b.group_ && a.coords_ == b.coords_;
  }

 private:
  GroupId group_;
  std::vector<T> coords_;
};

template <class T>
GroupElement<T> multiply(const GroupElement<T>& g, const GroupElement<T>& h) {
  if (g.group() != h.group()) throw GroupError("multiply: elements belong to different groups");
  return GroupElement<T>(g.group(), group_law<T>(g.group(), g.coords(), h.coords()));
}

/// Inverse by back-substitution through the triangular law.
template <class T>
GroupElement<T> inverse(const GroupElement<T>& g) {
  const auto& x = g.coords();
  std::vector<T> h(x.size(), T(0));
  h[0] = T(0) - x[0];
  h[1] = T(0) - x[1];
  h[2] = x[0] * h[1] - x[2];
  h[3] = T(0) - x[3] - (x[0] * x[0] * h[1]) / 2 + x[0] * h[2];
  if (g.group() == GroupId::Cartan) h[4] = T(0) - x[4] - (x[0] * h[1] * h[1]) / 2 + x[1] * h[2] - x[0] * x[1] * h[1];
  return GroupElement<T>(g.group(), std::move(h));
}

/// D_r: coordinate i scaled by r^{w_i}.
template <class T>
GroupElement<T> dilate(const T& r, const GroupElement<T>& g) {
  if (!(r > T(0))) throw GroupError("dilate: r must be positive");
  const auto w = dilation_weights(g.group());
  std::vector<T> out = g.coords();
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int k = 0; k < w[i]; ++k) out[i] = out[i] * r;
  return GroupElement<T>(g.group(), std::move(out));
}

using ExactOp = PolyDiffOp<Rational>;
using ExactPoly = Polynomial<Rational>;

/// Left-invariant vector field X_i (1-based index) in exponential coordinates.
ExactOp vector_field(GroupId g, int i);

/// The abstract basis I_k realized by the left-invariant frame. The printed
/// fields satisfy [X1,X2] = -X3, [X1,X3] = -X4 (and [X2,X3] = -X5 on Cartan),
/// so I_3 is realized as -X_3 and all other I_k as X_k; with this choice the
/// structure constants are exactly [I1,I2]=I3, [I1,I3]=I4, [I2,I3]=I5.
ExactOp algebra_basis(GroupId g, int k);

/// Sign s_k with I_k = s_k X_k.
int algebra_basis_sign(GroupId g, int k);

struct BracketRelation {
  int i;
  int j;
  int k;  ///< [I_i, I_j] = I_k; k == 0 means the bracket vanishes
};

/// All brackets [I_i,I_j], i<j, with the printed nonzero relations.
std::vector<BracketRelation> printed_brackets(GroupId g);

/// Coordinate names "x1".."xn".
std::vector<std::string> coordinate_names(GroupId g);

/// Expand a field/operator in the frame: returns c with op = sum c_k X_k when
/// op has constant frame coordinates; throws otherwise.
std::vector<Rational> frame_coordinates(GroupId g, const ExactOp& op);

}  // namespace nilspec
