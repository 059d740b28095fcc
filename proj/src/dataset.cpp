#include "vvgrid/dataset.hpp"

#include "vvgrid/io.hpp"
#include "vvgrid/rng.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace vvgrid {

namespace {

std::string hash_hex(const std::string& s) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(s)));
    return buf;
}

std::vector<char> offset_mask(const FeederModel& model, PerturbSpec::OffsetNodes which) {
    std::vector<char> mask(model.n_buses, 0);
    switch (which) {
        case PerturbSpec::OffsetNodes::None:
            break;
        case PerturbSpec::OffsetNodes::All:
            std::fill(mask.begin(), mask.end(), 1);
            break;
        case PerturbSpec::OffsetNodes::Der:
            for (int b : model.der_nodes) mask[b - 1] = 1;
            break;
    }
    return mask;
}

}  // namespace

PfDataset gen_pf_dataset(const FeederModel& model, int n_samples, const PerturbSpec& spec,
                         std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("gen_pf_dataset: n_samples < 1");
    const int n = model.n_buses;
    PfDataset ds;
    ds.inputs.resize(n_samples, 2 * n);
    ds.outputs.resize(n_samples, n);
    const auto mask = offset_mask(model, spec.q_offset_nodes);

    for (int s = 0; s < n_samples; ++s) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
        Vec p(n), q(n);
        for (int b = 0; b < n; ++b) {
            p[b] = model.nominal_p[b] * rng.uniform(1.0 - spec.relative_range, 1.0 + spec.relative_range);
            q[b] = model.nominal_q[b] * rng.uniform(1.0 - spec.relative_range, 1.0 + spec.relative_range);
        }
        for (int b = 0; b < n; ++b)
            if (mask[b]) q[b] += rng.uniform(spec.q_offset_lo, spec.q_offset_hi);
        VoltageProfile vp;
        try {
            vp = solve_distflow(model, p, q);
        } catch (const NonConvergence& e) {
            throw NonConvergence(std::string(e.what()) + " (sample " + std::to_string(s) + ")");
        }
        ds.inputs.row(s).head(n) = p.transpose();
        ds.inputs.row(s).tail(n) = q.transpose();
        ds.outputs.row(s) = vp.v.transpose();
    }
    ds.meta.seed = seed;
    ds.meta.feeder_hash = hash_hex(model.serialize());
    ds.meta.generator = "pf";
    ds.meta.relative_range = spec.relative_range;
    ds.meta.q_offset_lo = spec.q_offset_lo;
    ds.meta.q_offset_hi = spec.q_offset_hi;
    ds.meta.q_offset_nodes = spec.q_offset_nodes == PerturbSpec::OffsetNodes::Der   ? "der"
                             : spec.q_offset_nodes == PerturbSpec::OffsetNodes::All ? "all"
                                                                                    : "none";
    return ds;
}

ScenarioDataset gen_scenario_dataset(const FeederModel& model, int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("gen_scenario_dataset: n_samples < 1");
    const int n = model.n_buses;
    ScenarioDataset out;
    out.scenarios.reserve(n_samples);
    out.uncorrected_v.resize(n_samples, n);
    for (int s = 0; s < n_samples; ++s) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
        Scenario sc;
        sc.p_c.resize(n);
        sc.q_c.resize(n);
        sc.p_g = Vec::Zero(n);
        for (int b = 0; b < n; ++b) {
            sc.p_c[b] = model.nominal_p[b] * rng.uniform(0.9, 1.1);
            sc.q_c[b] = model.nominal_q[b] * rng.uniform(0.9, 1.1);
        }
        VoltageProfile vp;
        try {
            vp = solve_distflow(model, sc.net_p(), sc.q_c);
        } catch (const NonConvergence& e) {
            throw NonConvergence(std::string(e.what()) + " (sample " + std::to_string(s) + ")");
        }
        out.uncorrected_v.row(s) = vp.v.transpose();
        out.scenarios.push_back(std::move(sc));
    }
    out.meta.seed = seed;
    out.meta.feeder_hash = hash_hex(model.serialize());
    out.meta.generator = "scenario";
    out.meta.relative_range = 0.10;
    out.meta.q_offset_nodes = "none";
    return out;
}

SplitResult split_80_20(int n_rows, SplitPolicy policy, std::uint64_t seed) {
    if (n_rows < 5) throw std::invalid_argument("split_80_20: need at least 5 rows");
    const int n_train = (n_rows * 4) / 5;
    SplitResult sr;
    std::vector<int> idx(n_rows);
    std::iota(idx.begin(), idx.end(), 0);
    if (policy == SplitPolicy::SeededShuffle) {
        Rng rng = Rng::stream(seed, 0x73706c6974ULL);
        rng.shuffle(idx);
    }
    sr.train_idx.assign(idx.begin(), idx.begin() + n_train);
    sr.test_idx.assign(idx.begin() + n_train, idx.end());
    return sr;
}

PfDataset take_rows(const PfDataset& ds, const std::vector<int>& idx) {
    PfDataset out;
    out.inputs.resize(static_cast<Eigen::Index>(idx.size()), ds.inputs.cols());
    out.outputs.resize(static_cast<Eigen::Index>(idx.size()), ds.outputs.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.inputs.row(static_cast<Eigen::Index>(i)) = ds.inputs.row(idx[i]);
        out.outputs.row(static_cast<Eigen::Index>(i)) = ds.outputs.row(idx[i]);
    }
    out.meta = ds.meta;
    return out;
}

void write_csv(const PfDataset& ds, const std::string& path) {
    const Eigen::Index n = ds.n_buses();
    std::ostringstream os;
    for (Eigen::Index b = 0; b < n; ++b) os << "p_" << (b + 1) << ',';
    for (Eigen::Index b = 0; b < n; ++b) os << "q_" << (b + 1) << ',';
    for (Eigen::Index b = 0; b < n; ++b) os << "v_" << (b + 1) << (b + 1 < n ? ',' : '\n');
    for (Eigen::Index r = 0; r < ds.rows(); ++r) {
        for (Eigen::Index c = 0; c < 2 * n; ++c) os << format_full(ds.inputs(r, c)) << ',';
        for (Eigen::Index c = 0; c < n; ++c)
            os << format_full(ds.outputs(r, c)) << (c + 1 < n ? ',' : '\n');
    }
    write_text_file(path, os.str());
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

PfDataset read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::string line;
    long lineno = 0;
    Eigen::Index width = -1;
    std::vector<std::vector<double>> rows;
    bool header_seen = false;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (!header_seen) {
            header_seen = true;
            width = static_cast<Eigen::Index>(fields.size());
            if (width % 3 != 0) throw WidthMismatch("header width not a multiple of 3", lineno);
            continue;
        }
        if (static_cast<Eigen::Index>(fields.size()) != width)
            throw WidthMismatch("row has " + std::to_string(fields.size()) + " fields, expected " +
                                    std::to_string(width),
                                lineno);
        std::vector<double> row(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            try {
                row[i] = std::stod(fields[i]);
            } catch (const std::exception&) {
                throw MalformedRow("unparseable field '" + fields[i] + "'", lineno);
            }
        }
        rows.push_back(std::move(row));
    }
    PfDataset ds;
    const Eigen::Index n = (width < 0) ? 0 : width / 3;
    ds.inputs.resize(static_cast<Eigen::Index>(rows.size()), 2 * n);
    ds.outputs.resize(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (Eigen::Index c = 0; c < 2 * n; ++c) ds.inputs(static_cast<Eigen::Index>(r), c) = rows[r][c];
        for (Eigen::Index c = 0; c < n; ++c)
            ds.outputs(static_cast<Eigen::Index>(r), c) = rows[r][2 * n + c];
    }
    return ds;
}

void write_meta(const DatasetMeta& meta, const std::string& path) {
    std::ostringstream os;
    os << "seed=" << meta.seed << '\n'
       << "feeder_hash=" << meta.feeder_hash << '\n'
       << "generator=" << meta.generator << '\n'
       << "relative_range=" << format_full(meta.relative_range) << '\n'
       << "q_offset_lo=" << format_full(meta.q_offset_lo) << '\n'
       << "q_offset_hi=" << format_full(meta.q_offset_hi) << '\n'
       << "q_offset_nodes=" << meta.q_offset_nodes << '\n';
    write_text_file(path, os.str());
}

DatasetMeta read_meta(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    DatasetMeta meta;
    std::string line;
    while (std::getline(f, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "seed") meta.seed = std::stoull(val);
        else if (key == "feeder_hash") meta.feeder_hash = val;
        else if (key == "generator") meta.generator = val;
        else if (key == "relative_range") meta.relative_range = std::stod(val);
        else if (key == "q_offset_lo") meta.q_offset_lo = std::stod(val);
        else if (key == "q_offset_hi") meta.q_offset_hi = std::stod(val);
        else if (key == "q_offset_nodes") meta.q_offset_nodes = val;
    }
    return meta;
}

}  // namespace vvgrid
