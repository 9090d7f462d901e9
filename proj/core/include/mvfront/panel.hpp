#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvfront/linalg.hpp"

namespace mvf {

// Monthly return panel: strictly increasing YYYYMM stamps, decimal units.
struct ReturnsPanel {
    std::vector<std::string> dates;   // "YYYYMM"
    std::vector<std::string> assets;  // N column labels
    Mat values;                       // T x N decimal returns
};

enum class SentinelPolicy { reject, drop };

struct ParseOptions {
    SentinelPolicy sentinels = SentinelPolicy::reject;
    // Which monthly block to read when the file carries several; unset is
    // only valid for single-block files.
    std::optional<int> block;
};

// Reads an industry-portfolio file: free-text preamble, a header row of
// names, monthly rows keyed YYYYMM in percent units.  Values are divided by
// 100; sentinel cells (-99.99 / -999) are rejected or their rows dropped per
// options.  Annual blocks (4-digit keys) are ignored.
ReturnsPanel parse_industry_csv(const std::string& path, const ParseOptions& opt = {});
ReturnsPanel parse_industry_text(const std::string& text, const ParseOptions& opt = {});

// Either a trailing month count or an inclusive YYYYMM range.
struct WindowSpec {
    int trailing = 0;            // > 0 selects the trailing months
    std::string from = {};       // both set selects the inclusive range
    std::string to = {};
};

// Accepts "trailing:<n>" or "range:<from>-<to>".
WindowSpec parse_window_spec(const std::string& text);

// Contiguous sub-panel per spec; throws when the window exceeds the data or
// the range does not overlap it.
ReturnsPanel select_window(const ReturnsPanel& panel, const WindowSpec& window);

// Text form in the same layout parse_industry_text reads (percent units,
// full double precision); parse(serialize(p)) reproduces p exactly.
std::string serialize_panel(const ReturnsPanel& panel);

}  // namespace mvf
