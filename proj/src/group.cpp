#include "nilspec/group.hpp"

namespace nilspec {

std::string_view group_name(GroupId g) { return g == GroupId::Engel ? "engel" : "cartan"; }

GroupId parse_group(std::string_view name) {
  if (name == "engel" || name == "Engel") return GroupId::Engel;
  if (name == "cartan" || name == "Cartan") return GroupId::Cartan;
  throw GroupError("unknown group '" + std::string(name) + "' (expected engel or cartan)");
}

int dimension(GroupId g) { return g == GroupId::Engel ? 4 : 5; }

std::vector<int> dilation_weights(GroupId g) {
  if (g == GroupId::Engel) return {1, 1, 2, 3};
  return {1, 1, 2, 3, 3};
}

int homogeneous_dimension(GroupId g) {
  int q = 0;
  for (int w : dilation_weights(g)) q += w;
  return q;
}

std::vector<std::string> coordinate_names(GroupId g) {
  std::vector<std::string> names;
  for (int i = 1; i <= dimension(g); ++i) names.push_back("x" + std::to_string(i));
  return names;
}

namespace {

void check_index(GroupId g, int i) {
  if (i < 1 || i > dimension(g))
    throw GroupError("vector field index " + std::to_string(i) + " out of range 1.." + std::to_string(dimension(g)));
}

}  // namespace

ExactOp vector_field(GroupId g, int i) {
  check_index(g, i);
  const int n = dimension(g);
  auto d = [n](int k) { return ExactOp::partial(n, k - 1); };
  auto x = [n](int k) { return ExactPoly::variable(n, k - 1); };
  auto mul = [](const ExactPoly& p, const ExactOp& op) { return ExactOp::multiplication(p) * op; };

  switch (i) {
    case 1:
      return d(1);
    case 2: {
      ExactOp op = d(2) - mul(x(1), d(3)) + mul(x(1) * x(1) / 2, d(4));
      if (g == GroupId::Cartan) op = op + mul(x(1) * x(2), d(5));
      return op;
    }
    case 3: {
      ExactOp op = d(3) - mul(x(1), d(4));
      if (g == GroupId::Cartan) op = op - mul(x(2), d(5));
      return op;
    }
    default:
      return d(i);
  }
}

int algebra_basis_sign(GroupId g, int k) {
  check_index(g, k);
  return k == 3 ? -1 : 1;
}

ExactOp algebra_basis(GroupId g, int k) {
  return Rational(algebra_basis_sign(g, k)) * vector_field(g, k);
}

std::vector<BracketRelation> printed_brackets(GroupId g) {
  const int n = dimension(g);
  std::vector<BracketRelation> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      int k = 0;
      if (i == 1 && j == 2) k = 3;
      if (i == 1 && j == 3) k = 4;
      if (g == GroupId::Cartan && i == 2 && j == 3) k = 5;
      out.push_back({i, j, k});
    }
  return out;
}

std::vector<Rational> frame_coordinates(GroupId g, const ExactOp& op) {
  const int n = dimension(g);
  std::vector<Rational> c(static_cast<std::size_t>(n), Rational(0));
  ExactOp rest = op;
  for (int k = 1; k <= n; ++k) {
    Exponents a(static_cast<std::size_t>(n), 0);
    a[static_cast<std::size_t>(k - 1)] = 1;
    ExactPoly coeff = rest.coefficient(a);
    if (coeff.degree() > 0) throw GroupError("frame_coordinates: non-constant frame coefficient");
    c[static_cast<std::size_t>(k - 1)] = coeff.constant();
    rest = rest - c[static_cast<std::size_t>(k - 1)] * vector_field(g, k);
  }
  if (!rest.is_zero()) throw GroupError("frame_coordinates: operator is not in the span of the frame");
  return c;
}

}  // namespace nilspec
