#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>

#include "qcs/entropy.hpp"
#include "qcs/model.hpp"
#include "qcs/quantizer.hpp"

namespace qcs {

// Shortest 17-significant-digit decimal form, locale independent. Every CSV
// and text writer in the project goes through this.
std::string format_double(double v);

// Matrices, signals and measurement vectors share one CSV container:
// a header line `rows,cols,mode,seed` followed by row-major entries, one
// matrix row per line. Round-trips preserve values exactly.
void save_matrix(const std::filesystem::path& path, const MeasurementMatrix& m);
MeasurementMatrix load_matrix(const std::filesystem::path& path);

void save_vector(const std::filesystem::path& path, const Eigen::VectorXd& v,
                 const std::string& kind = "measurements", std::uint64_t seed = 0);
Eigen::VectorXd load_vector(const std::filesystem::path& path);

void save_signal(const std::filesystem::path& path, const SparseSignal& x, std::uint64_t seed = 0);
SparseSignal load_signal(const std::filesystem::path& path);

// Quantizer text format: line 1 is M, line 2 the levels, line 3 the finite
// interior thresholds (empty line when M = 1).
void save_quantizer(const std::filesystem::path& path, const ScalarQuantizer& q);
ScalarQuantizer load_quantizer(const std::filesystem::path& path);

// One `index:bitstring` line per codeword.
void save_prefix_code(const std::filesystem::path& path, const PrefixCode& code);
PrefixCode load_prefix_code(const std::filesystem::path& path);

}  // namespace qcs
