// SPDX-License-Identifier: Apache-2.0

#include "vblast/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vblast {
namespace {

std::string number(double v) {
    if (std::isnan(v)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

// One record; false at end of input. Handles quoted fields spanning lines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool in_quotes = false, quoted_field = false;
    for (int c = in.get(); c != std::char_traits<char>::eof(); c = in.get()) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field += static_cast<char>(c);
            }
            continue;
        }
        if (c == '"') {
            if (!field.empty()) throw std::runtime_error("csv: quote inside an unquoted field");
            in_quotes = quoted_field = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            quoted_field = false;
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            break;
        } else if (c == '\n') {
            break;
        } else {
            if (quoted_field) throw std::runtime_error("csv: text after a closing quote");
            field += static_cast<char>(c);
        }
    }
    if (in_quotes) throw std::runtime_error("csv: unterminated quoted field");
    fields.push_back(std::move(field));
    return true;
}

double parse_number(const std::string& s) {
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("csv: bad number '" + s + "'");
    return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, int streams) {
    out << "snr_db,strategy,p_out_exact,p_out_closed_form,p_out_approx,p_out_mc,mc_stderr,m_A";
    for (int i = 1; i <= streams; ++i) out << ",alpha_" << i;
    for (int i = 1; i <= streams; ++i) out << ",rate_" << i;
    out << ",snr_gain_db,diversity_running,error\r\n";
    for (const auto& r : rows) {
        if (r.powers.size() != static_cast<std::size_t>(streams) || r.rates.size() != static_cast<std::size_t>(streams))
            throw std::invalid_argument("write_csv: row width does not match the stream count");
        out << number(r.snr_db) << ',' << to_string(r.strategy) << ',' << number(r.p_out_exact) << ','
            << number(r.p_out_closed_form) << ',' << number(r.p_out_approx) << ',' << number(r.p_out_mc) << ','
            << number(r.mc_stderr) << ',' << r.active_count;
        for (double a : r.powers) out << ',' << number(a);
        for (double x : r.rates) out << ',' << number(x);
        out << ',' << number(r.snr_gain_db) << ',' << number(r.diversity_running) << ',' << quoted(r.error) << "\r\n";
    }
}

std::string to_csv(const std::vector<SweepRow>& rows, int streams) {
    std::ostringstream out;
    write_csv(out, rows, streams);
    return out.str();
}

std::vector<SweepRow> read_csv(std::istream& in) {
    std::vector<std::string> f;
    if (!read_record(in, f)) throw std::runtime_error("csv: missing header");
    constexpr std::size_t fixed = 8 + 3;
    if (f.size() < fixed || (f.size() - fixed) % 2 != 0 || f[0] != "snr_db")
        throw std::runtime_error("csv: unexpected header");
    const std::size_t m = (f.size() - fixed) / 2;

    std::vector<SweepRow> rows;
    while (read_record(in, f)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != fixed + 2 * m) throw std::runtime_error("csv: wrong field count");
        SweepRow r;
        r.snr_db = parse_number(f[0]);
        const auto st = parse_strategy(f[1]);
        if (!st) throw std::runtime_error("csv: unknown strategy '" + f[1] + "'");
        r.strategy = *st;
        r.p_out_exact = parse_number(f[2]);
        r.p_out_closed_form = parse_number(f[3]);
        r.p_out_approx = parse_number(f[4]);
        r.p_out_mc = parse_number(f[5]);
        r.mc_stderr = parse_number(f[6]);
        r.active_count = std::stoi(f[7]);
        for (std::size_t i = 0; i < m; ++i) r.powers.push_back(parse_number(f[8 + i]));
        for (std::size_t i = 0; i < m; ++i) r.rates.push_back(parse_number(f[8 + m + i]));
        r.snr_gain_db = parse_number(f[8 + 2 * m]);
        r.diversity_running = parse_number(f[9 + 2 * m]);
        r.error = f[10 + 2 * m];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SweepRow> from_csv(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

}  // namespace vblast
