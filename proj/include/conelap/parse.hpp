// Angle-list parsing for the command line and file formats. Tokens are
// separated by commas or whitespace and may be plain radians ("1.5708"),
// rational multiples of pi ("pi", "2pi/3", "pi/4"), or a repetition marker
// "xN" applying to the previous token. When every token is a rational
// multiple of pi the total angle is carried exactly, so resonant totals are
// classified without summation drift.

#ifndef CONELAP_PARSE_HPP
#define CONELAP_PARSE_HPP

#include <string>
#include <vector>

#include "conelap/wirtinger.hpp"

namespace conelap::cli {

struct AngleList {
  Eigen::VectorXd values;
  bool exact = false;  // all tokens were rational multiples of pi
  double total = 0;    // exact when `exact`, compensated sum otherwise
};

// Throws std::invalid_argument on malformed tokens.
AngleList parse_angle_list(const std::string& text);

// Plain list of reals (for support numbers and test vectors).
Eigen::VectorXd parse_real_list(const std::string& text);

AngleVector<double> make_angle_vector(const AngleList& list, Mode mode);

}  // namespace conelap::cli

#endif  // CONELAP_PARSE_HPP
