#include "vvgrid/feeder.hpp"

#include "vvgrid/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vvgrid {

Vec FeederModel::der_q_hat() const {
    Vec q(static_cast<Eigen::Index>(der_nodes.size()));
    for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = std::min(-qg_min[i], qg_max[i]);
    return q;
}

std::vector<RadialViolation> validate_radial(const FeederModel& model) {
    std::vector<RadialViolation> out;
    const int n = model.n_buses;
    std::vector<int> parent_count(n + 1, 0);
    for (const auto& ln : model.lines) {
        if (ln.from_bus == ln.to_bus || ln.from_bus < 0 || ln.to_bus < 1 || ln.from_bus > n ||
            ln.to_bus > n) {
            out.push_back({RadialViolation::Kind::BadEndpoints,
                           "line " + std::to_string(ln.from_bus) + "->" + std::to_string(ln.to_bus)});
            continue;
        }
        if (ln.r < 0 || ln.x < 0)
            out.push_back({RadialViolation::Kind::NegativeImpedance,
                           "line " + std::to_string(ln.from_bus) + "->" + std::to_string(ln.to_bus)});
        parent_count[ln.to_bus] += 1;
    }
    for (int b = 1; b <= n; ++b) {
        if (parent_count[b] > 1)
            out.push_back({RadialViolation::Kind::DuplicateParent,
                           "bus " + std::to_string(b) + " has " + std::to_string(parent_count[b]) +
                               " parent lines"});
    }
    // reachability from the slack over child links
    std::vector<std::vector<int>> children(n + 1);
    for (const auto& ln : model.lines)
        if (ln.to_bus >= 1 && ln.to_bus <= n && ln.from_bus >= 0 && ln.from_bus <= n &&
            ln.from_bus != ln.to_bus)
            children[ln.from_bus].push_back(ln.to_bus);
    std::vector<char> seen(n + 1, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int b = stack.back();
        stack.pop_back();
        for (int c : children[b]) {
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            } else if (c != 0) {
                out.push_back({RadialViolation::Kind::Cycle,
                               "bus " + std::to_string(c) + " reached twice"});
            }
        }
    }
    for (int b = 1; b <= n; ++b)
        if (!seen[b])
            out.push_back({RadialViolation::Kind::Disconnected, "bus " + std::to_string(b)});
    if (static_cast<int>(model.lines.size()) != n && out.empty())
        out.push_back({RadialViolation::Kind::Cycle,
                       "line count " + std::to_string(model.lines.size()) + " != bus count " +
                           std::to_string(n)});
    return out;
}

FeederIndex build_index(const FeederModel& model) {
    const int n = model.n_buses;
    FeederIndex ix;
    ix.parent.assign(n + 1, -1);
    ix.line_of_bus.assign(n + 1, -1);
    ix.children.assign(n + 1, {});
    for (int li = 0; li < static_cast<int>(model.lines.size()); ++li) {
        const auto& ln = model.lines[li];
        ix.parent[ln.to_bus] = ln.from_bus;
        ix.line_of_bus[ln.to_bus] = li;
        ix.children[ln.from_bus].push_back(ln.to_bus);
    }
    ix.order.reserve(n);
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int b = stack.back();
        stack.pop_back();
        if (b != 0) ix.order.push_back(b);
        // reverse push keeps sibling order stable
        for (auto it = ix.children[b].rbegin(); it != ix.children[b].rend(); ++it)
            stack.push_back(*it);
    }
    return ix;
}

std::vector<std::vector<int>> downstream_path_sets(const FeederModel& model) {
    FeederIndex ix = build_index(model);
    std::vector<std::vector<int>> path(model.n_buses + 1);
    for (int b : ix.order) {
        path[b] = path[ix.parent[b]];
        path[b].push_back(ix.line_of_bus[b]);
    }
    std::vector<std::vector<int>> out(model.n_buses);
    for (int b = 1; b <= model.n_buses; ++b) out[b - 1] = std::move(path[b]);
    return out;
}

VoltageProfile solve_distflow(const FeederModel& model, const Vec& net_p, const Vec& net_q,
                              const DistFlowOptions& opts) {
    const int n = model.n_buses;
    if (net_p.size() != n || net_q.size() != n)
        throw std::invalid_argument("solve_distflow: load vector length mismatch");
    FeederIndex ix = build_index(model);

    const double u0 = model.slack_voltage * model.slack_voltage;
    std::vector<double> u(n + 1, u0);
    std::vector<double> p_send(n + 1, 0.0), q_send(n + 1, 0.0), cur(n + 1, 0.0);
    std::vector<double> p_recv(n + 1), q_recv(n + 1);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        // backward: receiving-end flows and branch currents from current u
        for (int b = 1; b <= n; ++b) {
            p_recv[b] = net_p[b - 1];
            q_recv[b] = net_q[b - 1];
        }
        for (auto it = ix.order.rbegin(); it != ix.order.rend(); ++it) {
            int b = *it;
            const auto& ln = model.lines[ix.line_of_bus[b]];
            double ell = (p_recv[b] * p_recv[b] + q_recv[b] * q_recv[b]) / u[b];
            cur[b] = ell;
            p_send[b] = p_recv[b] + ln.r * ell;
            q_send[b] = q_recv[b] + ln.x * ell;
            p_recv[ix.parent[b]] += p_send[b];
            q_recv[ix.parent[b]] += q_send[b];
        }
        // forward: squared-voltage recursion with loss terms
        double dmax = 0.0;
        for (int b : ix.order) {
            const auto& ln = model.lines[ix.line_of_bus[b]];
            double un = u[ix.parent[b]] - 2.0 * (ln.r * p_send[b] + ln.x * q_send[b]) +
                        (ln.r * ln.r + ln.x * ln.x) * cur[b];
            if (un <= 0.0)
                throw VoltageCollapse("squared voltage <= 0 at bus " + std::to_string(b));
            dmax = std::max(dmax, std::abs(un - u[b]));
            u[b] = un;
        }
        if (dmax <= opts.tol) {
            VoltageProfile vp;
            vp.v.resize(n);
            for (int b = 1; b <= n; ++b) vp.v[b - 1] = std::sqrt(u[b]);
            return vp;
        }
    }
    throw NonConvergence("distflow sweep cap " + std::to_string(opts.max_sweeps) + " reached");
}

double distflow_residual(const FeederModel& model, const Vec& net_p, const Vec& net_q, const Vec& v) {
    const int n = model.n_buses;
    FeederIndex ix = build_index(model);
    std::vector<double> u(n + 1);
    u[0] = model.slack_voltage * model.slack_voltage;
    for (int b = 1; b <= n; ++b) u[b] = v[b - 1] * v[b - 1];

    std::vector<double> p_recv(n + 1), q_recv(n + 1), p_send(n + 1), q_send(n + 1), cur(n + 1);
    for (int b = 1; b <= n; ++b) {
        p_recv[b] = net_p[b - 1];
        q_recv[b] = net_q[b - 1];
    }
    double res = 0.0;
    for (auto it = ix.order.rbegin(); it != ix.order.rend(); ++it) {
        int b = *it;
        const auto& ln = model.lines[ix.line_of_bus[b]];
        double ell = (p_recv[b] * p_recv[b] + q_recv[b] * q_recv[b]) / u[b];
        cur[b] = ell;
        p_send[b] = p_recv[b] + ln.r * ell;
        q_send[b] = q_recv[b] + ln.x * ell;
        p_recv[ix.parent[b]] += p_send[b];
        q_recv[ix.parent[b]] += q_send[b];
    }
    for (int b : ix.order) {
        const auto& ln = model.lines[ix.line_of_bus[b]];
        double volt_eq = u[b] - (u[ix.parent[b]] - 2.0 * (ln.r * p_send[b] + ln.x * q_send[b]) +
                                 (ln.r * ln.r + ln.x * ln.x) * cur[b]);
        double cur_eq = cur[b] - (p_send[b] * p_send[b] + q_send[b] * q_send[b]) / u[ix.parent[b]];
        res = std::max(res, std::max(std::abs(volt_eq), std::abs(cur_eq)));
    }
    return res;
}

namespace {

// Published Baran-Wu 33-bus data: from, to (1-based), R ohm, X ohm and the
// receiving-bus load in kW / kvar. Base 12.66 kV, 1 MVA.
struct Ieee33Row {
    int from, to;
    double r_ohm, x_ohm, p_kw, q_kvar;
};

constexpr Ieee33Row kIeee33[] = {
    {1, 2, 0.0922, 0.0470, 100, 60},   {2, 3, 0.4930, 0.2511, 90, 40},
    {3, 4, 0.3660, 0.1864, 120, 80},   {4, 5, 0.3811, 0.1941, 60, 30},
    {5, 6, 0.8190, 0.7070, 60, 20},    {6, 7, 0.1872, 0.6188, 200, 100},
    {7, 8, 0.7114, 0.2351, 200, 100},  {8, 9, 1.0300, 0.7400, 60, 20},
    {9, 10, 1.0440, 0.7400, 60, 20},   {10, 11, 0.1966, 0.0650, 45, 30},
    {11, 12, 0.3744, 0.1238, 60, 35},  {12, 13, 1.4680, 1.1550, 60, 35},
    {13, 14, 0.5416, 0.7129, 120, 80}, {14, 15, 0.5910, 0.5260, 60, 10},
    {15, 16, 0.7463, 0.5450, 60, 20},  {16, 17, 1.2890, 1.7210, 60, 20},
    {17, 18, 0.7320, 0.5740, 90, 40},  {2, 19, 0.1640, 0.1565, 90, 40},
    {19, 20, 1.5042, 1.3554, 90, 40},  {20, 21, 0.4095, 0.4784, 90, 40},
    {21, 22, 0.7089, 0.9373, 90, 40},  {3, 23, 0.4512, 0.3083, 90, 50},
    {23, 24, 0.8980, 0.7091, 420, 200},{24, 25, 0.8960, 0.7011, 420, 200},
    {6, 26, 0.2030, 0.1034, 60, 25},   {26, 27, 0.2842, 0.1447, 60, 25},
    {27, 28, 1.0590, 0.9337, 60, 20},  {28, 29, 0.8042, 0.7006, 120, 70},
    {29, 30, 0.5075, 0.2585, 200, 600},{30, 31, 0.9744, 0.9630, 150, 70},
    {31, 32, 0.3105, 0.3619, 210, 100},{32, 33, 0.3410, 0.5302, 60, 40},
};

constexpr double kBaseKv = 12.66;
constexpr double kBaseMva = 1.0;
constexpr double kZBaseOhm = kBaseKv * kBaseKv / kBaseMva;

}  // namespace

FeederModel build_ieee33() {
    FeederModel m;
    m.n_buses = 32;
    m.slack_voltage = 1.0;
    m.nominal_p = Vec::Zero(32);
    m.nominal_q = Vec::Zero(32);
    for (const auto& row : kIeee33) {
        LineSegment ln;
        ln.from_bus = row.from - 1;
        ln.to_bus = row.to - 1;
        ln.r = row.r_ohm / kZBaseOhm;
        ln.x = row.x_ohm / kZBaseOhm;
        m.lines.push_back(ln);
        m.nominal_p[row.to - 2] = row.p_kw / (1000.0 * kBaseMva);
        m.nominal_q[row.to - 2] = row.q_kvar / (1000.0 * kBaseMva);
    }
    m.der_nodes.resize(32);
    for (int b = 0; b < 32; ++b) m.der_nodes[b] = b + 1;
    m.qg_min = Vec::Constant(32, -0.1);
    m.qg_max = Vec::Constant(32, 0.6);
    return m;
}

std::string FeederModel::serialize() const {
    std::ostringstream os;
    os << "buses=" << n_buses << " v0=" << format_full(slack_voltage) << "\n";
    os << "# from to r_pu x_pu p_c q_c\n";
    for (const auto& ln : lines) {
        os << ln.from_bus << ' ' << ln.to_bus << ' ' << format_full(ln.r) << ' '
           << format_full(ln.x) << ' ' << format_full(nominal_p[ln.to_bus - 1]) << ' '
           << format_full(nominal_q[ln.to_bus - 1]) << '\n';
    }
    return os.str();
}

void save_feeder(const FeederModel& model, const std::string& path) {
    write_text_file(path, model.serialize());
}

FeederModel load_feeder(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open feeder file '" + path + "'");
    FeederModel m;
    std::string line;
    long lineno = 0;
    bool have_header = false;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            auto toks = split_ws(line);
            int n = -1;
            double v0 = 1.0;
            for (const auto& t : toks) {
                auto eq = t.find('=');
                if (eq == std::string::npos) throw MalformedRow("bad header token '" + t + "'", lineno);
                std::string key = t.substr(0, eq), val = t.substr(eq + 1);
                if (key == "buses")
                    n = std::stoi(val);
                else if (key == "v0")
                    v0 = std::stod(val);
                else
                    throw MalformedRow("unknown header key '" + key + "'", lineno);
            }
            if (n < 1) throw MalformedRow("header must set buses=<N>", lineno);
            m.n_buses = n;
            m.slack_voltage = v0;
            m.nominal_p = Vec::Zero(n);
            m.nominal_q = Vec::Zero(n);
            have_header = true;
            continue;
        }
        auto toks = split_ws(line);
        if (toks.size() != 6) throw WidthMismatch("segment line needs 6 fields", lineno);
        LineSegment ln;
        ln.from_bus = std::stoi(toks[0]);
        ln.to_bus = std::stoi(toks[1]);
        ln.r = std::stod(toks[2]);
        ln.x = std::stod(toks[3]);
        if (ln.to_bus < 1 || ln.to_bus > m.n_buses)
            throw MalformedRow("to_bus out of range", lineno);
        m.lines.push_back(ln);
        m.nominal_p[ln.to_bus - 1] = std::stod(toks[4]);
        m.nominal_q[ln.to_bus - 1] = std::stod(toks[5]);
    }
    if (!have_header) throw IoError("feeder file '" + path + "' has no header");
    m.der_nodes.resize(m.n_buses);
    for (int b = 0; b < m.n_buses; ++b) m.der_nodes[b] = b + 1;
    m.qg_min = Vec::Constant(m.n_buses, -0.1);
    m.qg_max = Vec::Constant(m.n_buses, 0.6);
    return m;
}

}  // namespace vvgrid
