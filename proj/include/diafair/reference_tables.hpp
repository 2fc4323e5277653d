#pragma once

#include <array>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace diafair {

/// One published group column, in percent: outcome rates (p0, p1, p+) and
/// their margins of error, a margin being absent where the source left the
/// cell blank.
struct PublishedColumn {
    std::string criterion;
    std::string group;
    std::array<double, 3> rates{};
    std::array<std::optional<double>, 3> margins{};
};

std::vector<PublishedColumn> parse_published_tables(std::istream& source);

/// The reference tables compiled into the library from data/reference_tables.tsv.
std::string_view embedded_tables_tsv();
const std::vector<PublishedColumn>& published_columns();

struct TableCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline constexpr double kRateSumTolerance = 0.02;    // percent points
inline constexpr double kImpliedNTolerance = 0.20;   // max/min - 1

/// Arithmetic consistency checks on published tables:
///  - "sum": p0 + p1 + p+ = 100 within kRateSumTolerance, every column;
///  - "symmetry": eps(p1) == eps(p+) as printed, columns with p0 = 0;
///  - "implied-n": the sample sizes z^2 p (1 - p) / eps^2 recovered from each
///    row agree within kImpliedNTolerance, columns with all three margins.
std::vector<TableCheck> validate_tables(const std::vector<PublishedColumn>& columns, double z = 2.58);

}  // namespace diafair
