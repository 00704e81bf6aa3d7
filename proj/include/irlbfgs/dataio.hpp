#pragma once

#include <string>

#include "irlbfgs/problems.hpp"
#include "irlbfgs/records.hpp"

namespace irlbfgs {

// Parses `<label> <idx>:<val> ...` lines with 1-based strictly increasing
// indices. Labels may be -1/+1 or 0/1 (0 maps to -1). dim_override = 0 sizes
// the dataset by the largest index seen. Malformed input throws
// std::runtime_error naming the line.
Dataset read_libsvm(const std::string& path, int dim_override = 0);

// Inverse of read_libsvm on (labels, features); indices written 1-based.
void write_libsvm(const Dataset& ds, const std::string& path);

// Uniform sample of n_sub examples without replacement, deterministic per
// seed. Dimension is preserved; the Lipschitz bound is recomputed.
Dataset subset(const Dataset& ds, std::size_t n_sub, std::uint64_t seed);

// CSV with header `k,gamma,mu,f,f_reg,dir_norm`, reals at 17 significant
// digits (binary64 round-trip exact), plus a flat key-value sidecar at
// `path + ".meta"`.
void write_run_csv(const RunRecord& rr, const std::string& path);

// Reads a CSV written by write_run_csv (and its sidecar when present).
// Rejects files whose k column is not strictly increasing.
RunRecord read_run_csv(const std::string& path);

// Flat key-value text files: one `key = value` per line.
void write_kv(const KeyValues& kv, const std::string& path);
KeyValues read_kv(const std::string& path);

// 17-significant-digit rendering used across all emitted files.
std::string format_real(double v);

}  // namespace irlbfgs
