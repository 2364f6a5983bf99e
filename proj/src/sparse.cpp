#include "specpart/sparse.hpp"

#include "specpart/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace specpart {

void SparseMatrix::validate() const {
    if (static_cast<std::int64_t>(row_offsets.size()) != nrows + 1)
        throw std::logic_error("row_offsets size != nrows+1");
    if (!row_offsets.empty() && row_offsets.front() != 0)
        throw std::logic_error("row_offsets[0] != 0");
    for (std::int64_t i = 0; i < nrows; ++i) {
        if (row_offsets[i] > row_offsets[i + 1])
            throw std::logic_error("row_offsets not nondecreasing");
        for (std::int64_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
            if (col_indices[k] < 0 || col_indices[k] >= ncols)
                throw std::logic_error("column index out of range");
            if (k > row_offsets[i] && col_indices[k] <= col_indices[k - 1])
                throw std::logic_error("columns not strictly increasing within a row");
        }
    }
    if (row_offsets.back() != static_cast<std::int64_t>(col_indices.size()))
        throw std::logic_error("row_offsets.back() != number of stored entries");
    if (has_values() && values.size() != col_indices.size())
        throw std::logic_error("values size != col_indices size");
}

SparseMatrix from_triplets(std::int64_t nrows, std::int64_t ncols, std::vector<Triplet> entries,
                           bool sum_duplicates) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.nrows = nrows;
    m.ncols = ncols;
    m.row_offsets.assign(nrows + 1, 0);
    m.col_indices.reserve(entries.size());
    if (sum_duplicates) m.values.reserve(entries.size());

    for (std::size_t k = 0; k < entries.size();) {
        const std::int32_t r = entries[k].row;
        const std::int32_t c = entries[k].col;
        double v = entries[k].value;
        std::size_t k2 = k + 1;
        while (k2 < entries.size() && entries[k2].row == r && entries[k2].col == c) {
            v += entries[k2].value;
            ++k2;
        }
        m.col_indices.push_back(c);
        if (sum_duplicates) m.values.push_back(v);
        ++m.row_offsets[r + 1];
        k = k2;
    }
    for (std::int64_t i = 0; i < nrows; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
    return m;
}

SparseMatrix transpose(const SparseMatrix& A) {
    SparseMatrix T;
    T.nrows = A.ncols;
    T.ncols = A.nrows;
    T.row_offsets.assign(T.nrows + 1, 0);
    T.col_indices.resize(A.nnz());
    if (A.has_values()) T.values.resize(A.nnz());

    for (std::int64_t k = 0; k < A.nnz(); ++k) ++T.row_offsets[A.col_indices[k] + 1];
    for (std::int64_t i = 0; i < T.nrows; ++i) T.row_offsets[i + 1] += T.row_offsets[i];

    std::vector<std::int64_t> cursor(T.row_offsets.begin(), T.row_offsets.end() - 1);
    for (std::int64_t i = 0; i < A.nrows; ++i) {
        for (std::int64_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            const std::int64_t pos = cursor[A.col_indices[k]]++;
            T.col_indices[pos] = static_cast<std::int32_t>(i);
            if (A.has_values()) T.values[pos] = A.values[k];
        }
    }
    return T;
}

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '%') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

SparseMatrix parse_matrix_market(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty input", 1);
    ++lineno;

    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (lower(tag) != "%%matrixmarket" || lower(object) != "matrix")
        throw ParseError("malformed MatrixMarket banner", lineno);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate")
        throw ParseError("unsupported format '" + format + "' (coordinate only)", lineno);
    const bool pattern = field == "pattern";
    if (!pattern && field != "real" && field != "integer")
        throw ParseError("unsupported field '" + field + "'", lineno);
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general")
        throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);

    // size line
    std::int64_t nrows = 0, ncols = 0, declared = 0;
    for (;;) {
        if (!std::getline(in, line)) throw ParseError("missing size line", lineno + 1);
        ++lineno;
        if (blank_or_comment(line)) continue;
        std::istringstream sz(line);
        if (!(sz >> nrows >> ncols >> declared) || nrows < 0 || ncols < 0 || declared < 0)
            throw ParseError("malformed size line", lineno);
        std::string extra;
        if (sz >> extra) throw ParseError("trailing tokens on size line", lineno);
        break;
    }

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(symmetric ? 2 * declared : declared));

    std::int64_t seen = 0;
    while (seen < declared) {
        if (!std::getline(in, line))
            throw ParseError("entry list truncated: expected " + std::to_string(declared) +
                                 " entries, got " + std::to_string(seen),
                             lineno + 1);
        ++lineno;
        if (blank_or_comment(line)) continue;

        std::istringstream es(line);
        std::int64_t r = 0, c = 0;
        double v = 1.0;
        if (!(es >> r >> c)) throw ParseError("malformed entry", lineno);
        if (!pattern && !(es >> v)) throw ParseError("missing value", lineno);
        std::string extra;
        if (es >> extra) throw ParseError("trailing tokens on entry", lineno);
        if (r < 1 || r > nrows || c < 1 || c > ncols)
            throw ParseError("index out of range: (" + std::to_string(r) + ", " + std::to_string(c) + ")",
                             lineno);

        entries.push_back({static_cast<std::int32_t>(r - 1), static_cast<std::int32_t>(c - 1), v});
        if (symmetric && r != c)
            entries.push_back({static_cast<std::int32_t>(c - 1), static_cast<std::int32_t>(r - 1), v});
        ++seen;
    }

    return from_triplets(nrows, ncols, std::move(entries), /*sum_duplicates=*/!pattern);
}

SparseMatrix parse_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return parse_matrix_market(in);
}

void write_matrix_market_pattern_symmetric(std::ostream& out, const SparseMatrix& A) {
    std::int64_t lower_count = 0;
    for (std::int64_t i = 0; i < A.nrows; ++i)
        for (std::int64_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            if (A.col_indices[k] <= i) ++lower_count;

    out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
    out << A.nrows << ' ' << A.ncols << ' ' << lower_count << '\n';
    for (std::int64_t i = 0; i < A.nrows; ++i)
        for (std::int64_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            if (A.col_indices[k] <= i) out << i + 1 << ' ' << A.col_indices[k] + 1 << '\n';
}

} // namespace specpart
