#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace specpart {

struct Triplet {
    std::int32_t row;
    std::int32_t col;
    double value;
};

// CSR matrix in canonical form: within each row, column indices strictly
// increasing. `values` is empty for pattern-only matrices.
struct SparseMatrix {
    std::int64_t nrows = 0;
    std::int64_t ncols = 0;
    std::vector<std::int64_t> row_offsets; // size nrows+1
    std::vector<std::int32_t> col_indices;
    std::vector<double> values;

    std::int64_t nnz() const { return row_offsets.empty() ? 0 : row_offsets.back(); }
    bool has_values() const { return !values.empty(); }

    double value_at(std::int64_t k) const { return has_values() ? values[k] : 1.0; }

    // Checks the structural invariants (offsets nondecreasing, indices in
    // range and strictly increasing per row). Throws std::logic_error.
    void validate() const;
};

// Assembles canonical CSR from unordered triplets. Duplicate coordinates are
// summed when `sum_duplicates`, otherwise collapsed to one structural entry.
SparseMatrix from_triplets(std::int64_t nrows, std::int64_t ncols, std::vector<Triplet> entries,
                           bool sum_duplicates = true);

SparseMatrix transpose(const SparseMatrix& A);

// Matrix Market coordinate reader. Accepts pattern/real/integer fields with
// general or symmetric symmetry; symmetric storage is expanded to the full
// pattern. Throws ParseError with the offending 1-based line number.
SparseMatrix parse_matrix_market(std::istream& in);
SparseMatrix parse_matrix_market_file(const std::string& path);

// Writes a symmetric pattern matrix (lower triangle) in coordinate format.
void write_matrix_market_pattern_symmetric(std::ostream& out, const SparseMatrix& A);

} // namespace specpart
