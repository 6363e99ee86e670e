#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bigiso/canonical.hpp"
#include "bigiso/reduction.hpp"

namespace bigiso {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

struct HamiltonianSpec {
  std::string name;
  Polynomial f;
  VectorField X;
};

struct Expectation {
  std::string check;
  bool value = true;
  std::size_t line = 0;
};

/// Parsed structure file.
///
/// One directive per line, `key: value`, `#` starts a comment. Expressions are polynomials in
/// the chart coordinates; `d/dx` and `dx` are the coordinate fields and differentials and `^`
/// between two of them is the wedge product.
///
///   name: example
///   chart: x y z
///   E: d/dx ; 0
///   E: 0 ; dz
///   E': d/dy ; 0            (optional, derived from E when absent)
///   construct: graph_P      (foliation_pair | graph_theta | graph_P | dirac_P | dirac_omega)
///   F: d/dx   F': d/dy   S: d/dx   S*: dx | all
///   theta: z*dx^dy   P: d/dx^d/dy   omega: dy1^dy2
///   change: xt = x - y, yt = y, zt = z
///   lift: tangent
///   adapted: x | y | z
///   grid: -2..2 cap 256
///   submanifold: x4 = 0
///   foliation: x3
///   hamiltonian f1: x1 ; d/dx2
///   expect: integrable = true, decomposable = false
struct StructureDocument {
  std::string name;
  Chart base_chart;
  std::string construct;
  std::vector<VectorField> F, F_prime, S;
  std::vector<OneForm> S_star;
  bool S_star_all = false;
  std::optional<TwoForm> theta;
  std::optional<TwoForm> omega;
  std::optional<Bivector> P;
  std::optional<AffineChange> change;
  bool tangent_lift = false;
  bool E_prime_derived = false;

  BigIsotropicStructure structure;
  std::optional<AdaptedChart> adapted;
  std::optional<Grid> grid;
  std::optional<SubmanifoldData> submanifold;
  std::optional<FoliationData> foliation;
  std::vector<HamiltonianSpec> hamiltonians;
  std::vector<Expectation> expectations;

  std::optional<bool> expected(const std::string& check) const;
};

/// Names accepted by `expect:`.
const std::vector<std::string>& known_checks();

StructureDocument parse_document(std::string_view text);
/// Reads and parses a file; I/O failures throw std::runtime_error.
StructureDocument load_document(const std::string& path);

Polynomial parse_polynomial(std::string_view text, const Chart& chart);
BigSection parse_section(std::string_view text, const Chart& chart);
/// "lo..hi", optionally followed by "cap N".
Grid parse_grid(std::string_view text);

/// E' frame by Cramer's rule from the g-pairing with E.
std::vector<BigSection> derive_orthogonal(const std::vector<BigSection>& E, std::size_t m);

}  // namespace bigiso
