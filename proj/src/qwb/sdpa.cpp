#include "qwb/sdpa.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

namespace qwb {

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Entry { // one "matno blkno i j value" line, 1-based indices
    int mat, blk, i, j;
    double value;
};

} // namespace

std::string export_sdpa(const ConicProblem& p) {
    p.check_well_formed();

    // Row layout inside the leading diagonal block: walk the cones in
    // order; every Zero row becomes two rows (+ then -), every NonNeg row
    // one row. PSD cones become their own blocks in order of appearance.
    int num_eq = 0, num_nonneg = 0;
    for (const auto& cone : p.cones) {
        if (cone.kind == ConeSpec::Kind::Zero) num_eq += cone.dim;
        if (cone.kind == ConeSpec::Kind::NonNeg) num_nonneg += cone.dim;
    }
    const int diag_rows = 2 * num_eq + num_nonneg;

    // Per problem row: target block and position.
    std::vector<int> blk_of_row(p.num_rows()), pos_of_row(p.num_rows());
    std::vector<bool> paired(p.num_rows(), false);
    std::vector<int> psd_sides;
    {
        int row = 0, diag_pos = 0;
        int psd_count = 0;
        for (const auto& cone : p.cones) {
            if (cone.kind == ConeSpec::Kind::Zero) {
                for (int i = 0; i < cone.dim; ++i, ++row) {
                    blk_of_row[row] = 0;
                    pos_of_row[row] = diag_pos;
                    paired[row] = true;
                    diag_pos += 2;
                }
            } else if (cone.kind == ConeSpec::Kind::NonNeg) {
                for (int i = 0; i < cone.dim; ++i, ++row) {
                    blk_of_row[row] = 0;
                    pos_of_row[row] = diag_pos++;
                }
            } else {
                for (int i = 0; i < cone.length(); ++i, ++row) {
                    blk_of_row[row] = 1 + psd_count;
                    pos_of_row[row] = i;
                }
                psd_sides.push_back(cone.dim);
                ++psd_count;
            }
        }
    }

    const bool have_diag = diag_rows > 0;
    const int nblocks = (have_diag ? 1 : 0) + static_cast<int>(psd_sides.size());
    if (nblocks == 0) fail(ErrorCode::UnsupportedCone, "nothing to export: problem has no rows");

    // Gather entries. Block numbering in the file: diag block is 1 when
    // present, PSD blocks follow.
    std::vector<Entry> entries;
    const auto push = [&](int mat, int row, double val) {
        if (val == 0.0) return;
        const int blk = blk_of_row[row];
        if (blk == 0) {
            const int pos = pos_of_row[row] + 1;
            entries.push_back({mat, 1, pos, pos, val});
            if (paired[row]) entries.push_back({mat, 1, pos + 1, pos + 1, -val});
        } else {
            // Recover (i, j) from the svec slot, undoing the sqrt(2)
            // scaling by division (exact on entries built as m * sqrt2).
            int slot = pos_of_row[row];
            int j = 0;
            while (slot >= j + 1) slot -= ++j;
            const int i = slot;
            const double mval = i == j ? val : val / M_SQRT2;
            entries.push_back({mat, blk + (have_diag ? 1 : 0), i + 1, j + 1, mval});
        }
    };

    // F_0 = -b, F_i = -A e_i  (so that X = sum F_i z_i - F_0 equals b - A z).
    for (int row = 0; row < p.num_rows(); ++row) push(0, row, -p.b(row));
    for (int col = 0; col < p.A.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(p.A, col); it; ++it)
            push(col + 1, static_cast<int>(it.row()), -it.value());

    std::ostringstream os;
    os << "*SDPA sparse export\n";
    os << "*QWBCONES";
    for (const auto& cone : p.cones) {
        os << ' ';
        switch (cone.kind) {
            case ConeSpec::Kind::Zero: os << "zero:"; break;
            case ConeSpec::Kind::NonNeg: os << "nonneg:"; break;
            case ConeSpec::Kind::Psd: os << "psd:"; break;
        }
        os << cone.dim;
    }
    os << "\n";
    if (num_eq > 0)
        os << "*Equality rows are encoded as consecutive +/- pairs in block 1.\n";
    os << p.num_vars << "\n";
    os << nblocks << "\n";
    {
        bool first = true;
        if (have_diag) {
            os << -diag_rows;
            first = false;
        }
        for (int side : psd_sides) {
            if (!first) os << ' ';
            os << side;
            first = false;
        }
        os << "\n";
    }
    for (int i = 0; i < p.num_vars; ++i) {
        if (i) os << ' ';
        os << format_value(p.c(i));
    }
    os << "\n";
    for (const auto& e : entries)
        os << e.mat << ' ' << e.blk << ' ' << e.i << ' ' << e.j << ' ' << format_value(e.value)
           << "\n";
    return os.str();
}

ConicProblem parse_sdpa(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;

    std::vector<ConeSpec> recorded_cones;
    bool have_recorded = false;

    const auto parse_error = [&](const std::string& why) {
        fail(ErrorCode::ParseError, "sdpa parse error at line " + std::to_string(lineno) + ": " + why);
    };

    // Pull the next data line, skipping comments; records QWBCONES.
    const auto next_data_line = [&](std::string& out) {
        while (std::getline(is, line)) {
            ++lineno;
            if (!line.empty() && (line[0] == '*' || line[0] == '"')) {
                if (line.rfind("*QWBCONES", 0) == 0) {
                    have_recorded = true;
                    std::istringstream ls(line.substr(9));
                    std::string tok;
                    while (ls >> tok) {
                        const auto colon = tok.find(':');
                        if (colon == std::string::npos) parse_error("bad QWBCONES token");
                        const std::string kind = tok.substr(0, colon);
                        const int dim = std::stoi(tok.substr(colon + 1));
                        if (kind == "zero")
                            recorded_cones.push_back(ConeSpec::zero(dim));
                        else if (kind == "nonneg")
                            recorded_cones.push_back(ConeSpec::nonneg(dim));
                        else if (kind == "psd")
                            recorded_cones.push_back(ConeSpec::psd(dim));
                        else
                            parse_error("unknown QWBCONES kind '" + kind + "'");
                    }
                }
                continue;
            }
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string data;
    if (!next_data_line(data)) parse_error("missing variable count");
    int m = 0;
    {
        std::istringstream ls(data);
        if (!(ls >> m) || m <= 0) parse_error("bad variable count '" + data + "'");
    }
    if (!next_data_line(data)) parse_error("missing block count");
    int nblocks = 0;
    {
        std::istringstream ls(data);
        if (!(ls >> nblocks) || nblocks <= 0) parse_error("bad block count '" + data + "'");
    }
    if (!next_data_line(data)) parse_error("missing block sizes");
    std::vector<int> block_sizes;
    {
        std::istringstream ls(data);
        // Tolerate separators used in the wild: spaces, commas, braces.
        std::string tok;
        while (ls >> tok) {
            std::string clean;
            for (char ch : tok)
                if (ch == '-' || ch == '+' || std::isdigit(static_cast<unsigned char>(ch)))
                    clean += ch;
            if (clean.empty() || clean == "-" || clean == "+") continue;
            block_sizes.push_back(std::stoi(clean));
        }
        if (static_cast<int>(block_sizes.size()) != nblocks)
            parse_error("expected " + std::to_string(nblocks) + " block sizes");
        for (int bs : block_sizes)
            if (bs == 0) parse_error("zero block size");
    }
    if (!next_data_line(data)) parse_error("missing objective");
    Eigen::VectorXd c(m);
    {
        std::istringstream ls(data);
        for (int i = 0; i < m; ++i)
            if (!(ls >> c(i))) parse_error("objective needs " + std::to_string(m) + " values");
    }

    // Row layout: blocks in order; diagonal block of size s -> s rows,
    // PSD block of side s -> s(s+1)/2 svec rows.
    std::vector<int> block_row0(nblocks);
    int total_rows = 0;
    for (int bk = 0; bk < nblocks; ++bk) {
        block_row0[bk] = total_rows;
        total_rows += block_sizes[bk] < 0 ? -block_sizes[bk] : svec_length(block_sizes[bk]);
    }

    Eigen::VectorXd b = Eigen::VectorXd::Zero(total_rows);
    std::vector<Eigen::Triplet<double>> trip;
    std::string entry_line;
    while (next_data_line(entry_line)) {
        std::istringstream ls(entry_line);
        int mat, blk, i, j;
        double value;
        if (!(ls >> mat >> blk >> i >> j >> value))
            parse_error("bad entry line '" + entry_line + "'");
        if (mat < 0 || mat > m) parse_error("matrix index out of range");
        if (blk < 1 || blk > nblocks) parse_error("block index out of range");
        const int bs = block_sizes[blk - 1];
        int row;
        double coef;
        if (bs < 0) {
            if (i != j || i < 1 || i > -bs) parse_error("bad diagonal entry coordinates");
            row = block_row0[blk - 1] + i - 1;
            coef = value;
        } else {
            if (i > j) std::swap(i, j);
            if (i < 1 || j > bs) parse_error("entry outside block");
            row = block_row0[blk - 1] + svec_index(i - 1, j - 1);
            coef = i == j ? value : value * M_SQRT2;
        }
        if (mat == 0)
            b(row) += -coef;
        else
            trip.emplace_back(row, mat - 1, -coef);
    }

    ConicProblem p;
    p.num_vars = m;
    p.c = c;

    if (!have_recorded) {
        p.b = b;
        p.A.resize(total_rows, m);
        p.A.setFromTriplets(trip.begin(), trip.end());
        for (int bk = 0; bk < nblocks; ++bk)
            p.cones.push_back(block_sizes[bk] < 0 ? ConeSpec::nonneg(-block_sizes[bk])
                                                  : ConeSpec::psd(block_sizes[bk]));
        p.check_well_formed();
        return p;
    }

    // Undo the +/- pairing using the recorded cone structure.
    int diag_pos = 0, psd_block = 0;
    for (int bk = 0; bk < nblocks; ++bk)
        if (block_sizes[bk] < 0 && bk > 0) parse_error("recorded layout expects one diagonal block");
    const bool have_diag = nblocks > 0 && block_sizes[0] < 0;

    std::vector<int> row_of_original; // original row -> parsed row carrying its data
    std::vector<ConeSpec> cones = recorded_cones;
    for (const auto& cone : cones) {
        if (cone.kind == ConeSpec::Kind::Zero) {
            if (!have_diag) parse_error("recorded equalities but no diagonal block");
            for (int i = 0; i < cone.dim; ++i) {
                row_of_original.push_back(diag_pos);
                diag_pos += 2;
            }
        } else if (cone.kind == ConeSpec::Kind::NonNeg) {
            for (int i = 0; i < cone.dim; ++i) row_of_original.push_back(diag_pos++);
        } else {
            const int base = block_row0[(have_diag ? 1 : 0) + psd_block];
            for (int i = 0; i < cone.length(); ++i) row_of_original.push_back(base + i);
            ++psd_block;
        }
    }

    const int orig_rows = static_cast<int>(row_of_original.size());
    std::vector<int> parsed_to_orig(total_rows, -1);
    for (int r = 0; r < orig_rows; ++r) parsed_to_orig[row_of_original[r]] = r;

    Eigen::VectorXd b2(orig_rows);
    for (int r = 0; r < orig_rows; ++r) b2(r) = b(row_of_original[r]);
    std::vector<Eigen::Triplet<double>> trip2;
    for (const auto& tr : trip) {
        const int orig = parsed_to_orig[tr.row()];
        if (orig >= 0) trip2.emplace_back(orig, tr.col(), tr.value());
    }

    p.b = b2;
    p.A.resize(orig_rows, m);
    p.A.setFromTriplets(trip2.begin(), trip2.end());
    p.cones = cones;
    p.check_well_formed();
    return p;
}

bool structurally_equal(const ConicProblem& a, const ConicProblem& b) {
    if (a.num_vars != b.num_vars) return false;
    if (a.cones.size() != b.cones.size()) return false;
    for (std::size_t i = 0; i < a.cones.size(); ++i)
        if (a.cones[i].kind != b.cones[i].kind || a.cones[i].dim != b.cones[i].dim) return false;
    if (a.b.size() != b.b.size() || a.c.size() != b.c.size()) return false;
    // Data compared through the canonical serialization, which orders
    // terms deterministically, drops stored zeros and is idempotent under
    // the svec descaling.
    return export_sdpa(a) == export_sdpa(b);
}

} // namespace qwb
