#pragma once

#include <ostream>
#include <string>

#include "prfair/types.hpp"

namespace prfair {

/// Shortest-ish reproducible decimal formatting ("%.*g"); all CSV output
/// goes through this so identical runs produce byte-identical files.
std::string fmt_g(double value, int precision = 12);

void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_vector_csv(std::ostream& out, const Vector& v, const std::string& header);

}  // namespace prfair
