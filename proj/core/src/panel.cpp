#include "mvfront/panel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mvf {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

bool is_month_key(const std::string& tok) {
    if (tok.size() != 6) return false;
    for (char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    const int mm = (tok[4] - '0') * 10 + (tok[5] - '0');
    return mm >= 1 && mm <= 12;
}

bool parse_double(const std::string& tok, double& out) {
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

bool is_sentinel(double v) { return v == -99.99 || v == -999.0; }

struct RawRow {
    std::string date;
    std::vector<double> pct;
    int line_no = 0;
};

}  // namespace

ReturnsPanel parse_industry_text(const std::string& text, const ParseOptions& opt) {
    std::vector<std::string> lines;
    {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(line);
        }
    }

    // Monthly blocks are contiguous runs of rows keyed by a YYYYMM stamp.
    struct Block {
        std::vector<RawRow> rows;
        int header_line = -1;  // nearest preceding non-empty non-data line
    };
    std::vector<Block> blocks;
    bool in_block = false;
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
        const auto toks = tokenize(lines[ln]);
        const bool data_row = !toks.empty() && is_month_key(toks[0]);
        if (!data_row) {
            in_block = false;
            continue;
        }
        if (!in_block) {
            Block b;
            for (int back = ln - 1; back >= 0; --back) {
                const auto ht = tokenize(lines[back]);
                if (ht.empty()) continue;
                if (is_month_key(ht[0])) break;  // annual rows do not qualify
                bool numeric_first = false;
                double ignored;
                numeric_first = parse_double(ht[0], ignored);
                if (numeric_first) continue;
                b.header_line = back;
                break;
            }
            blocks.push_back(std::move(b));
            in_block = true;
        }
        RawRow row;
        row.date = toks[0];
        row.line_no = ln + 1;
        for (std::size_t k = 1; k < toks.size(); ++k) {
            double v;
            if (!parse_double(toks[k], v)) {
                std::ostringstream os;
                os << "line " << ln + 1 << ": unparsable value '" << toks[k] << "'";
                throw std::runtime_error(os.str());
            }
            row.pct.push_back(v);
        }
        blocks.back().rows.push_back(std::move(row));
    }

    if (blocks.empty()) throw std::runtime_error("no monthly data rows found");
    int pick = 0;
    if (blocks.size() > 1) {
        if (!opt.block)
            throw std::runtime_error("file contains multiple monthly blocks; "
                                     "an explicit block selector is required");
        pick = *opt.block;
    } else if (opt.block) {
        pick = *opt.block;
    }
    if (pick < 0 || pick >= static_cast<int>(blocks.size()))
        throw std::runtime_error("monthly block index out of range");
    const Block& blk = blocks[pick];

    const std::size_t n = blk.rows.front().pct.size();
    if (n < 1) throw std::runtime_error("data rows carry no values");
    for (const auto& row : blk.rows)
        if (row.pct.size() != n) {
            std::ostringstream os;
            os << "line " << row.line_no << ": ragged row (" << row.pct.size()
               << " values, expected " << n << ")";
            throw std::runtime_error(os.str());
        }

    ReturnsPanel panel;
    if (blk.header_line >= 0) {
        auto names = tokenize(lines[blk.header_line]);
        if (names.size() == n) panel.assets = std::move(names);
    }
    if (panel.assets.empty())
        throw std::runtime_error("no header row of asset names precedes the data");

    std::vector<const RawRow*> kept;
    for (const auto& row : blk.rows) {
        bool has_sentinel = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (is_sentinel(row.pct[k])) {
                if (opt.sentinels == SentinelPolicy::reject) {
                    std::ostringstream os;
                    os << "line " << row.line_no << ", column '" << panel.assets[k]
                       << "': missing-value sentinel " << row.pct[k];
                    throw std::runtime_error(os.str());
                }
                has_sentinel = true;
            }
        }
        if (!has_sentinel) kept.push_back(&row);
    }
    if (kept.empty()) throw std::runtime_error("all rows were dropped as missing");

    panel.values.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(n));
    panel.dates.reserve(kept.size());
    std::string prev;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const RawRow& row = *kept[i];
        if (!prev.empty() && row.date <= prev) {
            std::ostringstream os;
            os << "line " << row.line_no << ": dates not strictly increasing";
            throw std::runtime_error(os.str());
        }
        prev = row.date;
        panel.dates.push_back(row.date);
        for (std::size_t k = 0; k < n; ++k)
            panel.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                row.pct[k] / 100.0;
    }
    return panel;
}

ReturnsPanel parse_industry_csv(const std::string& path, const ParseOptions& opt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_industry_text(buffer.str(), opt);
}

WindowSpec parse_window_spec(const std::string& text) {
    WindowSpec w;
    if (text.rfind("trailing:", 0) == 0) {
        w.trailing = std::stoi(text.substr(9));
        if (w.trailing < 1) throw std::invalid_argument("trailing window must be positive");
        return w;
    }
    if (text.rfind("range:", 0) == 0) {
        const std::string body = text.substr(6);
        const auto dash = body.find('-');
        if (dash == std::string::npos)
            throw std::invalid_argument("range window must be range:<from>-<to>");
        w.from = body.substr(0, dash);
        w.to = body.substr(dash + 1);
        if (!is_month_key(w.from) || !is_month_key(w.to) || w.from > w.to)
            throw std::invalid_argument("range window needs two ordered YYYYMM stamps");
        return w;
    }
    throw std::invalid_argument("window spec must be trailing:<n> or range:<from>-<to>");
}

ReturnsPanel select_window(const ReturnsPanel& panel, const WindowSpec& window) {
    const auto t = static_cast<int>(panel.dates.size());
    int lo = 0, hi = t;  // half-open row range
    if (window.trailing > 0) {
        if (window.trailing > t)
            throw std::runtime_error("window exceeds the available rows");
        lo = t - window.trailing;
    } else if (!window.from.empty()) {
        lo = static_cast<int>(
            std::lower_bound(panel.dates.begin(), panel.dates.end(), window.from) -
            panel.dates.begin());
        hi = static_cast<int>(
            std::upper_bound(panel.dates.begin(), panel.dates.end(), window.to) -
            panel.dates.begin());
        if (lo >= hi) throw std::runtime_error("window does not overlap the data");
    } else {
        throw std::invalid_argument("empty window spec");
    }
    ReturnsPanel out;
    out.assets = panel.assets;
    out.dates.assign(panel.dates.begin() + lo, panel.dates.begin() + hi);
    out.values = panel.values.middleRows(lo, hi - lo);
    return out;
}

std::string serialize_panel(const ReturnsPanel& panel) {
    std::ostringstream os;
    os << "      ";
    for (const auto& name : panel.assets) os << ' ' << name;
    os << '\n';
    char buf[64];
    for (std::size_t i = 0; i < panel.dates.size(); ++i) {
        os << panel.dates[i];
        for (Eigen::Index k = 0; k < panel.values.cols(); ++k) {
            std::snprintf(buf, sizeof buf, " %.17g",
                          panel.values(static_cast<Eigen::Index>(i), k) * 100.0);
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace mvf
