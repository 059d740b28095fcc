#include "vvgrid/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace vvgrid {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_matrix_block(std::ostream& os, const std::string& name, const Mat& m) {
    os << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_full(m(i, j));
        }
        os << '\n';
    }
}

void write_vector_block(std::ostream& os, const std::string& name, const Vec& v) {
    Mat m(1, v.size());
    m.row(0) = v.transpose();
    write_matrix_block(os, name, m);
}

const Mat& MatrixFile::get(const std::string& name) const {
    auto it = blocks.find(name);
    if (it == blocks.end()) throw IoError("missing block '" + name + "'");
    return it->second;
}

Vec MatrixFile::get_vector(const std::string& name) const {
    const Mat& m = get(name);
    if (m.rows() != 1) throw IoError("block '" + name + "' is not a vector");
    return m.row(0).transpose();
}

double MatrixFile::get_scalar(const std::string& name) const {
    const Mat& m = get(name);
    if (m.size() != 1) throw IoError("block '" + name + "' is not a scalar");
    return m(0, 0);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

MatrixFile read_matrix_blocks(std::istream& is) {
    MatrixFile mf;
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() != 3) throw MalformedRow("expected '<name> <rows> <cols>'", lineno);
        const std::string name = toks[0];
        long rows = std::stol(toks[1]);
        long cols = std::stol(toks[2]);
        if (rows < 0 || cols < 0) throw MalformedRow("negative shape", lineno);
        Mat m(rows, cols);
        for (long i = 0; i < rows; ++i) {
            if (!std::getline(is, line)) throw MalformedRow("truncated block '" + name + "'", lineno);
            ++lineno;
            auto vals = split_ws(line);
            if (static_cast<long>(vals.size()) != cols)
                throw WidthMismatch("block '" + name + "' row has " + std::to_string(vals.size()) +
                                        " fields, expected " + std::to_string(cols),
                                    lineno);
            for (long j = 0; j < cols; ++j) m(i, j) = std::stod(vals[j]);
        }
        mf.blocks[name] = std::move(m);
    }
    return mf;
}

MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    return read_matrix_blocks(f);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << content;
    if (!f) throw IoError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace vvgrid
