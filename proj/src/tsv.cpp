#include "ruvstar/tsv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ruvstar {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::vector<std::string> split_tsv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  do {
    if (!std::getline(in, line)) throw InputError("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
  } while (!line.empty() && line.front() == '#');
  auto header = split_tsv_line(line);
  if (header.size() < 2) {
    throw InputError("header needs an id column and data columns: " + path);
  }
  Table t;
  t.id_name = header.front();
  t.col_names.assign(header.begin() + 1, header.end());

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_tsv_line(line);
    if (cells.size() != header.size()) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": wrong number of columns");
    }
    t.row_ids.push_back(cells.front());
    std::vector<double> vals(cells.size() - 1);
    for (std::size_t j = 1; j < cells.size(); ++j) {
      try {
        std::size_t used = 0;
        vals[j - 1] = std::stod(cells[j], &used);
        if (used != cells[j].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError(path + ":" + std::to_string(lineno) +
                         ": not a number: " + cells[j]);
      }
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw InputError("no data rows in " + path);
  t.values.resize(rows.size(), t.col_names.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < t.col_names.size(); ++j) {
      t.values(i, j) = rows[i][j];
    }
  }
  return t;
}

void write_table(const std::string& path, const Table& t) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << t.id_name;
  for (const auto& c : t.col_names) out << '\t' << c;
  out << '\n';
  for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
    out << t.row_ids[i];
    for (Eigen::Index j = 0; j < t.values.cols(); ++j) {
      out << '\t' << fmt_double(t.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw InputError("failed writing " + path);
}

std::vector<std::pair<std::string, std::string>> read_meta(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::pair<std::string, std::string>> meta;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() != '#') break;
    std::string body = line.substr(1);
    while (!body.empty() && body.front() == ' ') body.erase(body.begin());
    const std::size_t eq = body.find('=');
    if (eq != std::string::npos) {
      meta.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    }
  }
  return meta;
}

std::vector<std::string> read_id_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

void write_id_list(const std::string& path,
                   const std::vector<std::string>& ids) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  for (const auto& id : ids) out << id << '\n';
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace ruvstar
