#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coda/analysis.hpp"
#include "coda/dynamics.hpp"
#include "coda/sweep.hpp"

// CSV exports. Floating-point fields carry 17 significant digits, '.' as the
// decimal separator regardless of locale, and '\n' line endings.
namespace coda::csv {

void append_double(std::string& out, double value);
std::string format_double(double value);

// Whole-field parse; throws ConfigError on trailing garbage.
double parse_double(std::string_view text);

// tick,p,q_p,theta_0..theta_{N-1},q_0..q_{N-1}
void write_trajectory(std::ostream& out, const Trajectory& trajectory);
std::vector<SimState> read_trajectory(std::istream& in);

// cluster_id,size,action,weak,strong,worst_slack  (worst_slack is the strong
// condition's minimum member slack)
void write_clusters(std::ostream& out, std::span<const ClusterReport> clusters);

// row,col,theta_final,action_final,in_strong_cluster
void write_lattice_grid(std::ostream& out, const SimState& final_state, std::size_t side,
                        std::span<const ClusterReport> clusters);

// param_value,class,period,sample_index,theta_sample,p_sample
void write_bifurcation(std::ostream& out, std::span<const SweepRow> rows);

// beta,tick,theta,p,class  (theta is agent 0 under FS starts, the mean otherwise)
void write_gallery(std::ostream& out, std::span<const GalleryEntry> entries, bool fs);

}  // namespace coda::csv
