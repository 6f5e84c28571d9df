#include "lowrank/sampling.hpp"

#include "lowrank/matrix_core.hpp"
#include "lowrank/numeric_text.hpp"
#include "lowrank/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace lowrank {

const char* scheme_name(SamplingScheme scheme) {
    return scheme == SamplingScheme::EntryWeighted ? "entry" : "rowcol";
}

SamplingScheme parse_scheme(const std::string& name) {
    if (name == "entry")
        return SamplingScheme::EntryWeighted;
    if (name == "rowcol")
        return SamplingScheme::RowColWeighted;
    throw InputError("unknown sampling scheme '" + name + "' (expected entry or rowcol)");
}

namespace {

void check_probabilities(const ProbabilityMatrix& p, const char* what) {
    if (p.rows() < 1 || p.cols() < 1)
        throw InputError(std::string(what) + ": empty probability matrix");
    for (Index i = 0; i < p.rows(); ++i)
        for (Index j = 0; j < p.cols(); ++j) {
            double v = p(i, j);
            if (!(v >= 0.0 && v <= 1.0))
                throw InputError(std::string(what) + ": probability out of [0, 1] at (" +
                                 std::to_string(i) + ", " + std::to_string(j) + ")");
        }
}

// Unclamped per-budget-unit scores; probabilities are min(n * score, 1).
// Scores sum to 1 for both schemes, so the unclamped expected count is n.
Matrix sampling_scores(const Matrix& a, SamplingScheme scheme) {
    if (a.rows() < 1 || a.cols() < 1)
        throw InputError("compute_probabilities: empty matrix");
    require_finite(a, "compute_probabilities");
    double fro2 = a.squaredNorm();
    double l1 = a.cwiseAbs().sum();
    if (l1 == 0.0)
        throw InputError("compute_probabilities: all-zero matrix has no sampling distribution");

    Matrix score(a.rows(), a.cols());
    if (scheme == SamplingScheme::EntryWeighted) {
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j) {
                double v = a(i, j);
                score(i, j) = 0.5 * (v * v / fro2 + std::abs(v) / l1);
            }
    } else {
        Vector row2 = a.rowwise().squaredNorm();
        Vector col2 = a.colwise().squaredNorm().transpose();
        double d1 = static_cast<double>(a.rows());
        double d2 = static_cast<double>(a.cols());
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j)
                score(i, j) = (row2(i) / (d2 * fro2) + col2(j) / (d1 * fro2) +
                               std::abs(a(i, j)) / l1) /
                              3.0;
    }
    return score;
}

double expected_for_budget(const Matrix& score, double n) {
    double total = 0.0;
    for (Index i = 0; i < score.rows(); ++i)
        for (Index j = 0; j < score.cols(); ++j)
            total += std::min(n * score(i, j), 1.0);
    return total;
}

} // namespace

ProbabilityMatrix compute_probabilities(const Matrix& a, SamplingScheme scheme, double n) {
    if (!(n > 0.0) || !std::isfinite(n))
        throw InputError("compute_probabilities: budget must be positive and finite");
    Matrix score = sampling_scores(a, scheme);
    return score.unaryExpr([n](double s) { return std::min(n * s, 1.0); });
}

double expected_count(const ProbabilityMatrix& p) {
    check_probabilities(p, "expected_count");
    return p.sum();
}

double calibrate_budget(const Matrix& a, SamplingScheme scheme, double target_count) {
    Matrix score = sampling_scores(a, scheme);
    double size = static_cast<double>(a.rows()) * static_cast<double>(a.cols());
    if (!(target_count > 0.0) || !std::isfinite(target_count) || target_count > size)
        throw InputError("calibrate_budget: target count must lie in (0, d1*d2]");

    // Converge well inside the documented tolerance so that two schemes
    // calibrated to the same target land within it of each other too.
    double tol = 0.4 * std::max(1.0, 1e-3 * target_count);

    double positive = 0.0;
    for (Index i = 0; i < score.rows(); ++i)
        for (Index j = 0; j < score.cols(); ++j)
            if (score(i, j) > 0.0)
                positive += 1.0;

    if (target_count >= positive) {
        // Saturation: the target asks for at least every entry that can be
        // sampled (zeros never are), so drive every positive score to an
        // exact probability of one rather than stopping within tolerance.
        double n = std::max(target_count, 1.0);
        while (expected_for_budget(score, n) < positive)
            n *= 2.0;
        return n;
    }

    // expected_for_budget(n) <= n, so n = target is a valid lower bracket.
    double lo = target_count;
    double elo = expected_for_budget(score, lo);
    if (std::abs(elo - target_count) <= tol)
        return lo;
    double hi = lo;
    double ehi = elo;
    while (ehi < target_count) {
        hi *= 2.0;
        ehi = expected_for_budget(score, hi);
        if (std::abs(ehi - target_count) <= tol)
            return hi;
    }
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        double emid = expected_for_budget(score, mid);
        if (std::abs(emid - target_count) <= tol)
            return mid;
        if (emid < target_count)
            lo = mid;
        else
            hi = mid;
    }
    throw InputError("calibrate_budget: bisection failed to converge");
}

Mask draw_mask(const ProbabilityMatrix& p, std::uint64_t seed) {
    check_probabilities(p, "draw_mask");
    Mask mask;
    for (Index i = 0; i < p.rows(); ++i)
        for (Index j = 0; j < p.cols(); ++j) {
            double pij = p(i, j);
            if (pij > 0.0 &&
                uniform_unit(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)) < pij)
                mask.emplace_back(i, j);
        }
    return mask;
}

SketchBundle build_sketch(const Matrix& a, const ProbabilityMatrix& p, const Mask& mask,
                          SamplingScheme scheme, double budget_n, std::uint64_t seed) {
    if (a.rows() != p.rows() || a.cols() != p.cols())
        throw InputError("build_sketch: matrix and probability shapes differ");
    require_finite(a, "build_sketch");
    check_probabilities(p, "build_sketch");

    SketchBundle s;
    s.d1 = a.rows();
    s.d2 = a.cols();
    s.entries.reserve(mask.size());
    for (auto [i, j] : mask) {
        if (i < 0 || i >= a.rows() || j < 0 || j >= a.cols())
            throw InputError("build_sketch: mask index out of range");
        if (!(p(i, j) > 0.0))
            throw InputError("build_sketch: mask selects entry (" + std::to_string(i) + ", " +
                             std::to_string(j) + ") with zero probability");
        s.entries.push_back({i, j, a(i, j), p(i, j)});
    }
    std::sort(s.entries.begin(), s.entries.end(), [](const SketchEntry& x, const SketchEntry& y) {
        return std::make_pair(x.i, x.j) < std::make_pair(y.i, y.j);
    });
    for (std::size_t k = 1; k < s.entries.size(); ++k)
        if (s.entries[k - 1].i == s.entries[k].i && s.entries[k - 1].j == s.entries[k].j)
            throw InputError("build_sketch: duplicate mask entry (" +
                             std::to_string(s.entries[k].i) + ", " +
                             std::to_string(s.entries[k].j) + ")");

    auto [rn, cn] = row_col_norms(a);
    s.row_norms = std::move(rn);
    s.col_norms = std::move(cn);
    s.fro_norm = a.norm();
    s.l1_norm = a.cwiseAbs().sum();
    s.scheme = scheme;
    s.budget_n = budget_n;
    s.seed = seed;
    return s;
}

SketchBundle sample_sketch(const Matrix& a, SamplingScheme scheme, double n,
                           std::uint64_t seed) {
    ProbabilityMatrix p = compute_probabilities(a, scheme, n);
    Mask mask = draw_mask(p, seed);
    return build_sketch(a, p, mask, scheme, n, seed);
}

Matrix sketch_to_dense(const SketchBundle& s) {
    if (s.d1 < 1 || s.d2 < 1)
        throw InputError("sketch_to_dense: sketch has empty dimensions");
    Matrix m = Matrix::Zero(s.d1, s.d2);
    for (const SketchEntry& e : s.entries)
        m(e.i, e.j) = e.value / e.prob;
    return m;
}

namespace {

void write_vector_line(std::ostream& out, const Vector& v) {
    std::string line;
    for (Index i = 0; i < v.size(); ++i) {
        if (i)
            line.push_back(' ');
        line += format_double(v(i));
    }
    line.push_back('\n');
    out << line;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r'))
            ++pos;
        std::size_t start = pos;
        while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != '\r')
            ++pos;
        if (pos > start)
            out.push_back(s.substr(start, pos - start));
    }
    return out;
}

std::string next_line(std::istream& in, const std::string& name, const char* what) {
    std::string line;
    if (!std::getline(in, line))
        throw InputError(name + ": truncated sketch file, missing " + what);
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

} // namespace

void write_sketch(std::ostream& out, const SketchBundle& s) {
    out << "SKZ1\n";
    out << format_int(s.d1) << ' ' << format_int(s.d2) << ' ' << format_uint(s.entries.size())
        << ' ' << scheme_name(s.scheme) << ' ' << format_double(s.budget_n) << ' '
        << format_uint(s.seed) << '\n';
    out << format_double(s.fro_norm) << ' ' << format_double(s.l1_norm) << '\n';
    write_vector_line(out, s.row_norms);
    write_vector_line(out, s.col_norms);
    std::string line;
    for (const SketchEntry& e : s.entries) {
        line.clear();
        line += format_int(e.i);
        line.push_back(' ');
        line += format_int(e.j);
        line.push_back(' ');
        line += format_double(e.value);
        line.push_back(' ');
        line += format_double(e.prob);
        line.push_back('\n');
        out << line;
    }
}

void write_sketch(const std::string& path, const SketchBundle& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot open '" + path + "' for writing");
    write_sketch(out, s);
    if (!out)
        throw InputError("failed writing sketch to '" + path + "'");
}

SketchBundle read_sketch(std::istream& in, const std::string& name) {
    std::string magic = next_line(in, name, "magic line");
    if (magic != "SKZ1")
        throw InputError(name + ": bad magic '" + magic + "' (expected SKZ1)");

    // Keep each line alive while its views are parsed.
    std::string header_line = next_line(in, name, "header line");
    auto header = split_spaces(header_line);
    if (header.size() != 6)
        throw InputError(name + ": header must have 6 fields, got " +
                         std::to_string(header.size()));
    SketchBundle s;
    s.d1 = static_cast<Index>(parse_int(header[0], "sketch d1"));
    s.d2 = static_cast<Index>(parse_int(header[1], "sketch d2"));
    std::int64_t count = parse_int(header[2], "sketch entry count");
    s.scheme = parse_scheme(std::string(header[3]));
    s.budget_n = parse_double(header[4], "sketch budget");
    s.seed = parse_uint(header[5], "sketch seed");
    if (s.d1 < 1 || s.d2 < 1 || count < 0)
        throw InputError(name + ": invalid dimensions or entry count");

    std::string norms_line = next_line(in, name, "norms line");
    auto norms = split_spaces(norms_line);
    if (norms.size() != 2)
        throw InputError(name + ": norms line must have 2 fields");
    s.fro_norm = parse_double(norms[0], "sketch fro norm");
    s.l1_norm = parse_double(norms[1], "sketch l1 norm");

    std::string rows_line = next_line(in, name, "row norms");
    auto rows = split_spaces(rows_line);
    if (static_cast<Index>(rows.size()) != s.d1)
        throw InputError(name + ": expected " + std::to_string(s.d1) + " row norms, got " +
                         std::to_string(rows.size()));
    s.row_norms.resize(s.d1);
    for (Index i = 0; i < s.d1; ++i)
        s.row_norms(i) = parse_double(rows[static_cast<std::size_t>(i)], "sketch row norm");

    std::string cols_line = next_line(in, name, "col norms");
    auto cols = split_spaces(cols_line);
    if (static_cast<Index>(cols.size()) != s.d2)
        throw InputError(name + ": expected " + std::to_string(s.d2) + " col norms, got " +
                         std::to_string(cols.size()));
    s.col_norms.resize(s.d2);
    for (Index j = 0; j < s.d2; ++j)
        s.col_norms(j) = parse_double(cols[static_cast<std::size_t>(j)], "sketch col norm");

    s.entries.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
        std::string entry_line = next_line(in, name, "entry line");
        auto fields = split_spaces(entry_line);
        if (fields.size() != 4)
            throw InputError(name + ": entry line must have 4 fields");
        SketchEntry e;
        e.i = static_cast<Index>(parse_int(fields[0], "sketch entry row"));
        e.j = static_cast<Index>(parse_int(fields[1], "sketch entry col"));
        e.value = parse_double(fields[2], "sketch entry value");
        e.prob = parse_double(fields[3], "sketch entry prob");
        if (e.i < 0 || e.i >= s.d1 || e.j < 0 || e.j >= s.d2)
            throw InputError(name + ": entry index (" + std::to_string(e.i) + ", " +
                             std::to_string(e.j) + ") out of range");
        if (!(e.prob > 0.0 && e.prob <= 1.0))
            throw InputError(name + ": entry probability must lie in (0, 1]");
        if (!s.entries.empty()) {
            auto prev = std::make_pair(s.entries.back().i, s.entries.back().j);
            if (!(prev < std::make_pair(e.i, e.j)))
                throw InputError(name + ": entries must be strictly sorted by (i, j)");
        }
        s.entries.push_back(e);
    }
    return s;
}

SketchBundle read_sketch(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open sketch file '" + path + "'");
    return read_sketch(in, path);
}

} // namespace lowrank
