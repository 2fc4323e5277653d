#include "diafair/reference_tables.hpp"

#include "diafair/errors.hpp"
#include "diafair/oracle.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace diafair {

namespace detail {
extern const char* const kEmbeddedTablesTsv;
}

namespace {

double parse_percent(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error("tables line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

}  // namespace

std::vector<PublishedColumn> parse_published_tables(std::istream& source) {
    std::vector<PublishedColumn> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(source, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto f = detail::split(line, '\t');
        if (f.size() != 8) throw Error("tables line " + std::to_string(line_no) + ": expected 8 fields");
        PublishedColumn col;
        col.criterion = f[0];
        col.group = f[1];
        for (std::size_t k = 0; k < 3; ++k) {
            col.rates[k] = parse_percent(f[2 + k], line_no);
            if (f[5 + k] != "-") col.margins[k] = parse_percent(f[5 + k], line_no);
        }
        out.push_back(std::move(col));
    }
    return out;
}

std::string_view embedded_tables_tsv() { return detail::kEmbeddedTablesTsv; }

const std::vector<PublishedColumn>& published_columns() {
    static const std::vector<PublishedColumn> columns = [] {
        std::istringstream in{std::string(embedded_tables_tsv())};
        return parse_published_tables(in);
    }();
    return columns;
}

std::vector<TableCheck> validate_tables(const std::vector<PublishedColumn>& columns, double z) {
    std::vector<TableCheck> checks;
    for (const auto& col : columns) {
        const std::string where = col.criterion + "/" + col.group;

        const double sum = col.rates[0] + col.rates[1] + col.rates[2];
        // Printed values carry two decimals; compare in hundredths to avoid
        // binary noise at the tolerance edge.
        const bool sum_ok = std::abs(std::round(sum * 100.0) - 10000.0) <= std::round(kRateSumTolerance * 100.0);
        checks.push_back({"sum " + where, sum_ok, fmt("p0 + p1 + p+ = %.2f", sum)});

        if (col.rates[0] == 0.0) {
            const bool ok = col.margins[1] && col.margins[2] && *col.margins[1] == *col.margins[2];
            checks.push_back({"symmetry " + where, ok,
                              ok ? fmt("eps(p1) = eps(p+) = %.2f", *col.margins[1])
                                 : std::string("eps(p1) and eps(p+) differ")});
        }

        const bool populated = std::all_of(col.margins.begin(), col.margins.end(),
                                           [](const auto& m) { return m && *m > 0.0; }) &&
                               std::all_of(col.rates.begin(), col.rates.end(),
                                           [](double r) { return r > 0.0 && r < 100.0; });
        if (populated) {
            double lo = INFINITY;
            double hi = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                const double n = invert_margin(col.rates[k] / 100.0, *col.margins[k] / 100.0, z);
                lo = std::min(lo, n);
                hi = std::max(hi, n);
            }
            const double spread = hi / lo - 1.0;
            checks.push_back({"implied-n " + where, spread <= kImpliedNTolerance,
                              fmt("implied N in [%.0f, %.0f]", lo, hi) + fmt(", spread %.1f%%", spread * 100.0)});
        }
    }
    return checks;
}

}  // namespace diafair
