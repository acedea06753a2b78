#pragma once

#include <stdexcept>
#include <string>

namespace cmsym {

/// Division by an exact zero or an operation outside the scalar field.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Wrong number of arguments, indices out of the supported range, wrong N.
class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters that violate the sign convention (e.g. negative h/(2 nu) in float mode).
class ConventionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters that exact mode cannot represent inside Q(i).
class UnsupportedParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The phase point sits on a singular locus (coincident positions, singular L, ...).
/// Samplers treat this as a rejected point and draw again.
class SingularPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symbolic rewrite met a shape it cannot handle (e.g. an unpaired K_{a,0}).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton did not converge on the selected branch of the discrete correspondence.
class BranchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Particles came closer than the separation guard during integration.
class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cmsym
