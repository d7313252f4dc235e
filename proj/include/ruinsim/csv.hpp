#ifndef RUINSIM_CSV_HPP
#define RUINSIM_CSV_HPP

#include <map>
#include <string>
#include <vector>

namespace ruinsim {

// shortest decimal string that parses back to the same double
std::string format_double(double x);
double parse_double(const std::string& s);

// minimal CSV: comma separator, header row, LF line endings, no quoting
// (all emitted fields are numbers or bare identifiers)
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);
    void close();

  private:
    void* file_;
    std::string path_;
    size_t width_ = 0;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    long column_index(const std::string& name) const; // -1 when absent
    double number(size_t row, const std::string& col) const;
};

CsvTable read_csv(const std::string& path);

} // namespace ruinsim

#endif
