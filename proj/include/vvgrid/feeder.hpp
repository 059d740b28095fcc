// Radial feeder data model and the exact DistFlow power-flow oracle.
//
// Conventions (used by every module in this project):
//   - bus 0 is the slack; non-slack buses are 1..N, vector entries are 0-based
//     over the non-slack buses
//   - net loads are consumption-positive: p = p_c - p_g, q = q_c - q_g
//   - all quantities per-unit on a 1 MVA power base
#pragma once

#include "vvgrid/types.hpp"

#include <string>
#include <vector>

namespace vvgrid {

struct LineSegment {
    int from_bus = 0;  // parent (closer to slack)
    int to_bus = 0;    // child; unique per valid feeder
    double r = 0.0;    // series resistance, pu
    double x = 0.0;    // series reactance, pu
};

struct FeederModel {
    int n_buses = 0;            // N, non-slack buses
    double slack_voltage = 1.0; // v0, pu
    std::vector<LineSegment> lines;
    std::vector<int> der_nodes; // buses (1..N) hosting inverters
    Vec qg_min;                 // per-DER lower reactive bound (<= 0), pu
    Vec qg_max;                 // per-DER upper reactive bound (>= 0), pu
    Vec nominal_p;              // length N, consumption-positive, pu
    Vec nominal_q;

    // Symmetric rule capability per DER node: min(-qg_min, qg_max).
    Vec der_q_hat() const;

    // Canonical text form; also the on-disk format (see save/load below).
    std::string serialize() const;
};

struct Scenario {
    Vec p_c;
    Vec p_g;
    Vec q_c;

    Vec net_p() const { return p_c - p_g; }
};

struct RadialViolation {
    enum class Kind { DuplicateParent, Cycle, Disconnected, BadEndpoints, NegativeImpedance };
    Kind kind;
    std::string detail;
};

// Structural checks: tree rooted at the slack, one parent per bus, r/x >= 0.
// Returns all violations found; empty means valid.
std::vector<RadialViolation> validate_radial(const FeederModel& model);

// Line indices on the slack-to-bus path, per bus (0-based over non-slack buses).
std::vector<std::vector<int>> downstream_path_sets(const FeederModel& model);

struct DistFlowOptions {
    double tol = 1e-10;  // on squared voltage updates
    int max_sweeps = 200;
};

// Ground-truth single-phase DistFlow solve by backward/forward sweep.
// net_p/net_q are length-N consumption-positive net loads.
// Throws VoltageCollapse if any squared voltage goes non-positive and
// NonConvergence if the sweep cap is reached.
VoltageProfile solve_distflow(const FeederModel& model, const Vec& net_p, const Vec& net_q,
                              const DistFlowOptions& opts = {});

// Max branch-equation residual of a candidate voltage profile (pu^2 scale).
// Recomputes flows from v and checks the squared-voltage recursion plus the
// sending-end current identity.
double distflow_residual(const FeederModel& model, const Vec& net_p, const Vec& net_q, const Vec& v);

// Standard IEEE 33-bus test feeder (32 load buses plus the substation),
// embedded as constants. DER set defaults to all load buses with
// qg in [-0.1, +0.6] (generation-positive).
FeederModel build_ieee33();

// Feeder file format:
//   buses=<N> v0=<v0>
//   # from to r_pu x_pu p_c q_c
//   0 1 5.75e-4 ...          (one line per segment)
FeederModel load_feeder(const std::string& path);
void save_feeder(const FeederModel& model, const std::string& path);

// Parent bus of each non-slack bus and a parents-before-children ordering.
struct FeederIndex {
    std::vector<int> parent;       // parent[b] for b in 1..N (index by bus id)
    std::vector<int> line_of_bus;  // index into model.lines of the line ending at b
    std::vector<int> order;        // bus ids 1..N, parents first
    std::vector<std::vector<int>> children;
};
FeederIndex build_index(const FeederModel& model);

}  // namespace vvgrid
