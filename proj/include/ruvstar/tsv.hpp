#ifndef RUVSTAR_TSV_HPP
#define RUVSTAR_TSV_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ruvstar {

// Malformed user-supplied files; the CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed "%.10g" rendering so identical runs produce identical bytes.
std::string fmt_double(double x);

// A TSV with one header row and a leading id column.
struct Table {
  std::string id_name;                   // header of the id column
  std::vector<std::string> col_names;    // remaining header cells
  std::vector<std::string> row_ids;
  Eigen::MatrixXd values;                // rows x col_names.size()
};

// Leading lines of the form "# key=value" carry metadata and are skipped by
// read_table; read_meta collects them.
Table read_table(const std::string& path);
std::vector<std::pair<std::string, std::string>> read_meta(
    const std::string& path);
void write_table(const std::string& path, const Table& t);

std::vector<std::string> split_tsv_line(const std::string& line);

// One id per line, blank lines ignored.
std::vector<std::string> read_id_list(const std::string& path);
void write_id_list(const std::string& path,
                   const std::vector<std::string>& ids);

}  // namespace ruvstar

#endif  // RUVSTAR_TSV_HPP
