// Power-flow sample generation from the feeder oracle, splitting, and CSV I/O.
#pragma once

#include "vvgrid/feeder.hpp"
#include "vvgrid/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vvgrid {

struct DatasetMeta {
    std::uint64_t seed = 0;
    std::string feeder_hash;       // fnv-1a of the feeder serialization, hex
    std::string generator;         // "pf" or "scenario"
    double relative_range = 0.0;
    double q_offset_lo = 0.0;
    double q_offset_hi = 0.0;
    std::string q_offset_nodes;    // "der", "all", "none"
};

// Rows of ([p; q] inputs, v outputs), all per-unit consumption-positive.
struct PfDataset {
    Mat inputs;   // n x 2N
    Mat outputs;  // n x N
    DatasetMeta meta;

    Eigen::Index rows() const { return inputs.rows(); }
    Eigen::Index n_buses() const { return outputs.cols(); }
};

struct PerturbSpec {
    double relative_range = 0.10;   // symmetric fraction on nominal p and q
    double q_offset_lo = -0.8;      // additive reactive offset interval, pu
    double q_offset_hi = 0.2;
    enum class OffsetNodes { Der, All, None } q_offset_nodes = OffsetNodes::Der;
};

// Per-sample recipe: scale each bus's nominal (p, q) by independent uniform
// factors in [1-r, 1+r]; add an independent uniform reactive offset at each
// configured bus; solve the oracle. Deterministic per seed and independent of
// sample evaluation order (one RNG stream per sample index).
PfDataset gen_pf_dataset(const FeederModel& model, int n_samples, const PerturbSpec& spec,
                         std::uint64_t seed);

struct ScenarioDataset {
    std::vector<Scenario> scenarios;
    Mat uncorrected_v;  // oracle voltages at q_g = 0, n x N
    DatasetMeta meta;
};

// +/-10% demand perturbation only, p_g = 0, no reactive offsets.
ScenarioDataset gen_scenario_dataset(const FeederModel& model, int n_samples, std::uint64_t seed);

enum class SplitPolicy {
    SeededShuffle,  // PF training data
    FirstLast,      // scenario data: first 80% train, last 20% test
};

struct SplitResult {
    std::vector<int> train_idx;
    std::vector<int> test_idx;
};

SplitResult split_80_20(int n_rows, SplitPolicy policy, std::uint64_t seed);
PfDataset take_rows(const PfDataset& ds, const std::vector<int>& idx);

// CSV with header p_1..p_N,q_1..q_N,v_1..v_N, 17-significant-digit values.
void write_csv(const PfDataset& ds, const std::string& path);
PfDataset read_csv(const std::string& path);

void write_meta(const DatasetMeta& meta, const std::string& path);
DatasetMeta read_meta(const std::string& path);

}  // namespace vvgrid
