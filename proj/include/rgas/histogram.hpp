#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rgas/density_grid.hpp"

namespace rgas {

/// Cubic velocity histogram over [-v_max, v_max]^3. Out-of-range samples
/// land in the nearest edge bin so counts always sum to the sample count.
class VelocityHistogram {
public:
    VelocityHistogram() = default;
    VelocityHistogram(double v_max, int bins);
    static VelocityHistogram from_counts(double v_max, int bins,
                                         std::vector<std::int64_t> counts);

    void add(const Vec3& v);
    void add_bin(std::size_t flat_index);

    double v_max() const { return v_max_; }
    int bins() const { return bins_; }
    std::int64_t total() const { return total_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    std::size_t bin_index(const Vec3& v) const;

    /// Normalized bin masses (sum to 1 for a non-empty histogram).
    std::vector<double> masses() const;

    bool same_binning(const VelocityHistogram& other) const {
        return bins_ == other.bins_ && v_max_ == other.v_max_;
    }

private:
    double v_max_ = 6.0;
    int bins_ = 20;
    std::int64_t total_ = 0;
    std::vector<std::int64_t> counts_;
};

/// Total variation distance (1/2) sum |a - b| of two normalized histograms
/// on identical binning. Throws on mismatched grids.
double estimate_tv(const VelocityHistogram& a, const VelocityHistogram& b);
double estimate_tv(const std::vector<double>& a, const std::vector<double>& b);

/// Bin masses of a VelocityOnly density on the histogram's binning
/// (requires matching bins and extent).
std::vector<double> density_bin_masses(const KineticDensity& density,
                                       const VelocityHistogram& shape);

/// TV between a histogram and a gridded density with identical binning.
double estimate_tv(const VelocityHistogram& hist, const KineticDensity& density);

/// File form: first line a JSON header
/// {"kind":"velocity_histogram","bins":B,"v_max":..,"total":..}, then B^2
/// CSV lines of B counts each (x-major, z fastest).
void save_histogram(std::ostream& out, const VelocityHistogram& hist);
VelocityHistogram load_histogram(std::istream& in);
void save_histogram_file(const std::string& path, const VelocityHistogram& hist);
VelocityHistogram load_histogram_file(const std::string& path);

} // namespace rgas
