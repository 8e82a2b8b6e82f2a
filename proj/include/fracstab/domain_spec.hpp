#pragma once

#include <string>

#include "fracstab/geometry.hpp"

namespace fracstab {

// Raised on malformed mini-language input (as opposed to a well-formed spec
// that violates an operation's precondition).
struct SpecParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parses the domain mini-language, e.g.
//   disk:R=1            disk:cx=0.3,cy=-0.2,R=1
//   ellipse:a=1.2,b=1   pdisk:R=1,eps=0.1,k=3
//   square:w=2          rect:w=2,h=1
//   interval:a=-1,b=1   rotsquare:w=2,angle=30
//   poly:v=x0;y0;x1;y1;...
// Unknown keys are rejected. Perturbed disks must satisfy eps (k^2+1) < 1.
Domain parse_domain_spec(const std::string& spec);

}  // namespace fracstab
