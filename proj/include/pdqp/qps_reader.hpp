#pragma once

#include <iosfwd>
#include <string>

#include "pdqp/instance.hpp"

namespace pdqp {

/// Reads the fixed-section QPS subset: NAME, ROWS (N/G/L/E), COLUMNS, RHS,
/// BOUNDS (LO/UP/FX/FR/MI/PL), QUADOBJ or QMATRIX, ENDATA. Tokens are
/// whitespace-split, so both fixed and free column layouts parse.
///
/// Conventions:
///   - the first N row is the objective; later N rows are free rows whose
///     column entries are ignored,
///   - L rows are negated into >= form,
///   - QUADOBJ/QMATRIX entries are the lower triangle of the Q in
///     1/2 x^T Q x; diagonal entries are taken verbatim, off-diagonals are
///     mirrored,
///   - missing bounds default to l = 0, u = +inf.
///
/// Throws ParseError (with a line number) on unknown sections, unknown row or
/// column names, and duplicate matrix entries.
QpInstance parse_qps(std::istream& in);
QpInstance parse_qps(const std::string& text);
QpInstance parse_qps_file(const std::string& path);

}  // namespace pdqp
