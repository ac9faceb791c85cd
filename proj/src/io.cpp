#include "asopt/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace asopt {

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_number: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!have_header) {
            // strip a UTF-8 byte order mark
            if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
                line.erase(0, 3);
            }
            table.header = split_csv_line(line);
            have_header = true;
            continue;
        }
        if (trim(line).empty()) {
            continue;
        }
        table.rows.push_back(split_csv_line(line));
    }
    if (!have_header) {
        throw std::runtime_error("'" + path.string() + "' is empty (header row required)");
    }
    return table;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path)
{
    if (!out_) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    for (const auto& h : header) {
        cell(h);
    }
    end_row();
}

CsvWriter& CsvWriter::cell(const std::string& s)
{
    if (!first_) {
        out_ << ',';
    }
    out_ << s;
    first_ = false;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row()
{
    out_ << '\n';
    first_ = true;
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m,
                      const std::vector<std::string>& column_names,
                      const std::string& label_header,
                      const std::vector<std::string>& row_labels)
{
    std::vector<std::string> header;
    const bool labelled = !label_header.empty();
    if (labelled) {
        header.push_back(label_header);
    }
    header.insert(header.end(), column_names.begin(), column_names.end());
    CsvWriter w(path, header);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (labelled) {
            w.cell(static_cast<std::size_t>(r) < row_labels.size() ? row_labels[static_cast<std::size_t>(r)]
                                                                   : std::to_string(r));
        }
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            w.cell(m(r, c));
        }
        w.end_row();
    }
}

} // namespace asopt
