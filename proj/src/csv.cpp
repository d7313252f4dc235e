#include "ruinsim/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ruinsim {

std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for writing: " + path + " (" +
                                     std::strerror(errno) + ")");
    file_ = f;
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::close() {
    if (file_) {
        std::fclose(static_cast<FILE*>(file_));
        file_ = nullptr;
    }
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    width_ = cols.size();
    row(cols);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (width_ != 0 && cells.size() != width_)
        throw std::invalid_argument("csv row width mismatch in " + path_);
    FILE* f = static_cast<FILE*>(file_);
    if (!f) throw std::runtime_error("csv writer already closed: " + path_);
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) std::fputc(',', f);
        std::fwrite(cells[i].data(), 1, cells[i].size(), f);
    }
    std::fputc('\n', f);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            t.columns = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

long CsvTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<long>(i);
    return -1;
}

double CsvTable::number(size_t row, const std::string& col) const {
    long idx = column_index(col);
    if (idx < 0) throw std::invalid_argument("no such column: " + col);
    return parse_double(rows.at(row).at(static_cast<size_t>(idx)));
}

} // namespace ruinsim
