#include "zkprov/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "zkprov/errors.hpp"
#include "zkprov/sysinfo.hpp"

namespace zkprov {
namespace {

std::string fmt_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

double parse_double(const std::string& text, std::size_t row) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw Error(ErrorCode::kParse,
                    "results row " + std::to_string(row) + ": bad number \"" + text + "\"");
    }
}

std::uint64_t parse_u64(const std::string& text, std::size_t row) {
    try {
        std::size_t pos = 0;
        const unsigned long long value = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw Error(ErrorCode::kParse, "results row " + std::to_string(row) +
                                           ": bad integer \"" + text + "\"");
    }
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Two series over categorical x positions, proving time on the left axis
/// and memory on the right, as a self-contained SVG document.
std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::vector<std::string>& x_ticks,
                      const std::vector<double>& prove_seconds,
                      const std::vector<double>& rss_gb) {
    const double width = 760, height = 420;
    const double left = 80, right = width - 80, top = 50, bottom = height - 70;
    const std::size_t n = x_ticks.size();

    const auto x_pos = [&](std::size_t i) {
        return left + (static_cast<double>(i) + 0.5) * (right - left) /
                          static_cast<double>(n);
    };
    const auto axis_max = [](const std::vector<double>& values) {
        double m = 0;
        for (double v : values) m = std::max(m, v);
        return m > 0 ? m * 1.15 : 1.0;
    };
    const double prove_max = axis_max(prove_seconds);
    const double rss_max = axis_max(rss_gb);
    const auto y_left = [&](double v) { return bottom - v / prove_max * (bottom - top); };
    const auto y_right = [&](double v) { return bottom - v / rss_max * (bottom - top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << xml_escape(title) << "</text>\n";

    // Frame and horizontal gridlines with left/right tick labels.
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
        << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
        << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << right << "\" y1=\"" << top << "\" x2=\"" << right
        << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double frac = tick / 4.0;
        const double y = bottom - frac * (bottom - top);
        svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << right
            << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"#1f77b4\">"
            << fmt_double(frac * prove_max) << "</text>\n";
        svg << "<text x=\"" << right + 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"#d62728\">"
            << fmt_double(frac * rss_max) << "</text>\n";
    }

    for (std::size_t i = 0; i < n; ++i) {
        svg << "<text x=\"" << x_pos(i) << "\" y=\"" << bottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << xml_escape(x_ticks[i]) << "</text>\n";
    }
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(x_label) << "</text>\n";
    svg << "<text x=\"20\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#1f77b4\" transform=\"rotate(-90 20 "
        << (top + bottom) / 2 << ")\">avg prove seconds</text>\n";
    svg << "<text x=\"" << width - 16 << "\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#d62728\" transform=\"rotate(90 "
        << width - 16 << " " << (top + bottom) / 2 << ")\">peak rss (gb)</text>\n";

    const auto polyline = [&](const std::vector<double>& values, auto to_y,
                              const char* color, bool dashed) {
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
        if (dashed) svg << " stroke-dasharray=\"6 4\"";
        svg << " points=\"";
        for (std::size_t i = 0; i < values.size(); ++i) {
            svg << x_pos(i) << "," << to_y(values[i]) << " ";
        }
        svg << "\"/>\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
            svg << "<circle cx=\"" << x_pos(i) << "\" cy=\"" << to_y(values[i])
                << "\" r=\"4\" fill=\"" << color << "\"/>\n";
        }
    };
    polyline(prove_seconds, y_left, "#1f77b4", false);
    polyline(rss_gb, y_right, "#d62728", true);

    svg << "<rect x=\"" << left + 10 << "\" y=\"" << top + 8
        << "\" width=\"190\" height=\"40\" fill=\"white\" stroke=\"#cccccc\"/>\n";
    svg << "<line x1=\"" << left + 18 << "\" y1=\"" << top + 22 << "\" x2=\""
        << left + 46 << "\" y2=\"" << top + 22 << "\" stroke=\"#1f77b4\" "
        << "stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + 52 << "\" y=\"" << top + 26
        << "\" font-family=\"sans-serif\" font-size=\"11\">avg prove seconds</text>\n";
    svg << "<line x1=\"" << left + 18 << "\" y1=\"" << top + 38 << "\" x2=\""
        << left + 46 << "\" y2=\"" << top + 38 << "\" stroke=\"#d62728\" "
        << "stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
    svg << "<text x=\"" << left + 52 << "\" y=\"" << top + 42
        << "\" font-family=\"sans-serif\" font-size=\"11\">peak rss (gb)</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out.good()) {
        throw Error(ErrorCode::kStorage, "cannot write " + path.string());
    }
}

} // namespace

std::string results_csv(const std::vector<MeasurementRecord>& records,
                        std::string_view host_line) {
    std::ostringstream out;
    if (!host_line.empty()) {
        out << "# host: " << host_line << "\n";
    }
    out << kResultsCsvHeader << "\n";
    for (const MeasurementRecord& r : records) {
        std::string label = r.experiment;
        // The label is one CSV field; it must stay comma- and newline-free.
        for (char& c : label) {
            if (c == ',' || c == '\n') c = ';';
        }
        out << label << ',' << r.instances << ',' << r.workers << ','
            << r.n_constraints << ',' << fmt_double(r.avg_prove_s) << ','
            << fmt_double(r.p50_s) << ',' << fmt_double(r.p95_s) << ','
            << fmt_double(r.throughput_pps) << ',' << fmt_double(r.peak_rss_gb) << ','
            << r.rejects << "\n";
    }
    return out.str();
}

std::vector<MeasurementRecord> parse_results_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    bool saw_header = false;
    std::vector<MeasurementRecord> records;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kResultsCsvHeader) {
                throw Error(ErrorCode::kParse, "unexpected results.csv header: " + line);
            }
            saw_header = true;
            continue;
        }
        ++row;
        const std::vector<std::string> fields = split_csv_row(line);
        if (fields.size() != 10) {
            throw Error(ErrorCode::kParse, "results row " + std::to_string(row) +
                                               ": expected 10 fields, got " +
                                               std::to_string(fields.size()));
        }
        MeasurementRecord r;
        r.experiment = fields[0];
        r.instances = static_cast<std::uint32_t>(parse_u64(fields[1], row));
        r.workers = static_cast<std::uint32_t>(parse_u64(fields[2], row));
        r.n_constraints = parse_u64(fields[3], row);
        r.avg_prove_s = parse_double(fields[4], row);
        r.p50_s = parse_double(fields[5], row);
        r.p95_s = parse_double(fields[6], row);
        r.throughput_pps = parse_double(fields[7], row);
        r.peak_rss_gb = parse_double(fields[8], row);
        r.rejects = parse_u64(fields[9], row);
        records.push_back(std::move(r));
    }
    if (!saw_header) {
        throw Error(ErrorCode::kParse, "results.csv has no header line");
    }
    return records;
}

std::vector<std::filesystem::path> write_report(
    const std::vector<MeasurementRecord>& records,
    const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::kStorage, "cannot create " + out_dir.string());
    }

    std::vector<std::filesystem::path> written;
    const auto csv_path = out_dir / "results.csv";
    write_text_file(csv_path, results_csv(records, host_summary()));
    written.push_back(csv_path);

    std::map<char, std::vector<MeasurementRecord>> by_letter;
    for (const MeasurementRecord& r : records) {
        if (!r.experiment.empty()) by_letter[r.experiment[0]].push_back(r);
    }
    for (auto& [letter, rows] : by_letter) {
        std::vector<std::string> ticks;
        std::string x_label;
        if (letter == 'B') {
            std::stable_sort(rows.begin(), rows.end(),
                             [](const auto& a, const auto& b) { return a.workers < b.workers; });
            for (const auto& r : rows) ticks.push_back(std::to_string(r.workers));
            x_label = "workers per instance";
        } else if (letter == 'C') {
            std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                return a.instances < b.instances;
            });
            for (const auto& r : rows) ticks.push_back(std::to_string(r.instances));
            x_label = "parallel instances";
        } else {
            for (const auto& r : rows) ticks.push_back(r.experiment);
            x_label = "configuration";
        }
        std::vector<double> prove, rss;
        for (const auto& r : rows) {
            prove.push_back(r.avg_prove_s);
            rss.push_back(r.peak_rss_gb);
        }
        const std::string title = std::string("experiment ") + letter + " (n=" +
                                  std::to_string(rows.front().n_constraints) +
                                  " constraints)";
        const auto path = out_dir / (std::string("chart-") + letter + ".svg");
        write_text_file(path, svg_chart(title, x_label, ticks, prove, rss));
        written.push_back(path);
    }
    return written;
}

} // namespace zkprov
