#include "irlbfgs/dataio.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace irlbfgs {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
}

int parse_label(const std::string& tok) {
  if (tok == "+1" || tok == "1") return 1;
  if (tok == "-1") return -1;
  if (tok == "0") return -1;  // {0,1} labels map onto {-1,+1}
  throw std::invalid_argument("unknown label '" + tok + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::string* kv_find(const KeyValues& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return &v;
  return nullptr;
}

void kv_set(KeyValues& kv, const std::string& key, std::string value) {
  for (auto& [k, v] : kv)
    if (k == key) {
      v = std::move(value);
      return;
    }
  kv.emplace_back(key, std::move(value));
}

Dataset read_libsvm(const std::string& path, int dim_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_libsvm: cannot open " + path);

  Dataset ds;
  int max_index = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    std::istringstream fields(stripped);
    std::string tok;
    fields >> tok;
    SparseExample ex;
    try {
      ex.label = parse_label(tok);
    } catch (const std::invalid_argument& e) {
      parse_fail(path, line_no, e.what());
    }

    int prev_index = 0;  // 1-based in the file
    while (fields >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) parse_fail(path, line_no, "malformed token '" + tok + "'");
      int idx = 0;
      double val = 0.0;
      try {
        std::size_t used = 0;
        idx = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("trailing");
        const std::string vs = tok.substr(colon + 1);
        val = std::stod(vs, &used);
        if (used != vs.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        parse_fail(path, line_no, "malformed token '" + tok + "'");
      }
      if (idx < 1) parse_fail(path, line_no, "index must be >= 1");
      if (idx <= prev_index) parse_fail(path, line_no, "indices must be strictly increasing");
      prev_index = idx;
      ex.features.push_back({idx - 1, val});
      max_index = std::max(max_index, idx - 1);
    }
    ds.examples.push_back(std::move(ex));
  }
  if (ds.examples.empty()) throw std::runtime_error("read_libsvm: no examples in " + path);

  ds.dimension = dim_override > 0 ? dim_override : max_index + 1;
  if (ds.dimension <= 0) ds.dimension = 1;  // all-zero examples only
  if (dim_override > 0 && max_index >= dim_override)
    throw std::runtime_error("read_libsvm: feature index exceeds --dim override");
  ds.lipschitz_bound = lipschitz_estimate(ds);
  return ds;
}

void write_libsvm(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_libsvm: cannot open " + path);
  for (const auto& ex : ds.examples) {
    out << (ex.label > 0 ? "+1" : "-1");
    for (const auto& [idx, val] : ex.features) out << ' ' << (idx + 1) << ':' << format_real(val);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_libsvm: write failed for " + path);
}

Dataset subset(const Dataset& ds, std::size_t n_sub, std::uint64_t seed) {
  if (n_sub < 1 || n_sub > ds.size()) throw std::invalid_argument("subset: n_sub out of range");
  std::vector<std::size_t> order(ds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  RngState rng = RngState::seeded(seed);
  // Partial Fisher-Yates: the first n_sub slots become the sample.
  for (std::size_t i = 0; i < n_sub; ++i) {
    const std::size_t j = i + sample_index(rng, order.size() - i);
    std::swap(order[i], order[j]);
  }
  Dataset out;
  out.dimension = ds.dimension;
  out.examples.reserve(n_sub);
  for (std::size_t i = 0; i < n_sub; ++i) out.examples.push_back(ds.examples[order[i]]);
  out.lipschitz_bound = lipschitz_estimate(out);
  return out;
}

void write_run_csv(const RunRecord& rr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_run_csv: cannot open " + path);
  out << "k,gamma,mu,f,f_reg,dir_norm\n";
  for (const auto& r : rr.records) {
    out << r.k << ',' << format_real(r.gamma) << ',' << format_real(r.mu) << ','
        << format_real(r.f) << ',' << (r.f_reg ? format_real(*r.f_reg) : std::string()) << ','
        << format_real(r.dir_norm) << '\n';
  }
  if (!out) throw std::runtime_error("write_run_csv: write failed for " + path);

  KeyValues meta = rr.config;
  kv_set(meta, "algorithm", rr.algorithm);
  kv_set(meta, "seed", std::to_string(rr.seed));
  write_kv(meta, path + ".meta");
}

RunRecord read_run_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_run_csv: cannot open " + path);

  RunRecord rr;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_run_csv: empty file " + path);
  if (trim(line) != "k,gamma,mu,f,f_reg,dir_norm")
    throw std::runtime_error("read_run_csv: unexpected header in " + path);

  std::size_t line_no = 1;
  long prev_k = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 6) cells.emplace_back();
    if (cells.size() != 6) parse_fail(path, line_no, "expected 6 columns");
    IterationRecord r;
    try {
      r.k = std::stol(cells[0]);
      r.gamma = std::stod(cells[1]);
      r.mu = std::stod(cells[2]);
      r.f = std::stod(cells[3]);
      if (!cells[4].empty()) r.f_reg = std::stod(cells[4]);
      r.dir_norm = std::stod(cells[5]);
    } catch (const std::exception&) {
      parse_fail(path, line_no, "malformed row");
    }
    if (r.k <= prev_k) parse_fail(path, line_no, "k column must be strictly increasing");
    prev_k = r.k;
    rr.records.push_back(r);
  }

  std::ifstream meta_in(path + ".meta");
  if (meta_in) {
    rr.config = read_kv(path + ".meta");
    if (const auto* algo = kv_find(rr.config, "algorithm")) rr.algorithm = *algo;
    if (const auto* seed = kv_find(rr.config, "seed")) rr.seed = std::stoull(*seed);
  }
  return rr;
}

void write_kv(const KeyValues& kv, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_kv: cannot open " + path);
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  if (!out) throw std::runtime_error("write_kv: write failed for " + path);
}

KeyValues read_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_kv: cannot open " + path);
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) parse_fail(path, line_no, "expected 'key = value'");
    kv.emplace_back(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return kv;
}

}  // namespace irlbfgs
