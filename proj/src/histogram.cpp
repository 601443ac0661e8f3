#include "rgas/histogram.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rgas {

VelocityHistogram::VelocityHistogram(double v_max, int bins) : v_max_(v_max), bins_(bins) {
    if (!(v_max > 0.0) || bins < 1)
        throw std::invalid_argument("VelocityHistogram: bad extent or bin count");
    counts_.assign(static_cast<std::size_t>(bins) * bins * bins, 0);
}

VelocityHistogram VelocityHistogram::from_counts(double v_max, int bins,
                                                 std::vector<std::int64_t> counts) {
    VelocityHistogram hist(v_max, bins);
    if (counts.size() != hist.counts_.size())
        throw std::invalid_argument("from_counts: wrong number of entries");
    hist.counts_ = std::move(counts);
    hist.total_ = 0;
    for (std::int64_t c : hist.counts_) {
        if (c < 0) throw std::invalid_argument("from_counts: negative count");
        hist.total_ += c;
    }
    return hist;
}

std::size_t VelocityHistogram::bin_index(const Vec3& v) const {
    const double h = 2.0 * v_max_ / bins_;
    std::size_t idx = 0;
    for (int a = 0; a < 3; ++a) {
        int i = static_cast<int>(std::floor((v[a] + v_max_) / h));
        i = std::max(0, std::min(bins_ - 1, i));
        idx = idx * static_cast<std::size_t>(bins_) + static_cast<std::size_t>(i);
    }
    return idx;
}

void VelocityHistogram::add(const Vec3& v) { add_bin(bin_index(v)); }

void VelocityHistogram::add_bin(std::size_t flat_index) {
    counts_.at(flat_index) += 1;
    total_ += 1;
}

std::vector<double> VelocityHistogram::masses() const {
    std::vector<double> m(counts_.size(), 0.0);
    if (total_ == 0) return m;
    const double inv = 1.0 / static_cast<double>(total_);
    for (std::size_t i = 0; i < counts_.size(); ++i)
        m[i] = static_cast<double>(counts_[i]) * inv;
    return m;
}

double estimate_tv(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("estimate_tv: mismatched grids");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::fabs(a[i] - b[i]);
    return 0.5 * sum;
}

double estimate_tv(const VelocityHistogram& a, const VelocityHistogram& b) {
    if (!a.same_binning(b))
        throw std::invalid_argument("estimate_tv: mismatched histogram binning");
    return estimate_tv(a.masses(), b.masses());
}

std::vector<double> density_bin_masses(const KineticDensity& density,
                                       const VelocityHistogram& shape) {
    if (density.mode() != KineticDensity::Mode::VelocityOnly)
        throw std::invalid_argument("density_bin_masses: expected VelocityOnly density");
    if (density.nv() != shape.bins() || density.v_max() != shape.v_max())
        throw std::invalid_argument("density_bin_masses: density grid does not match binning");
    std::vector<double> m(density.values().size());
    const double vol = density.cell_volume();
    // histogram layout is x-major like the density grid
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = density.values()[i] * vol;
    return m;
}

double estimate_tv(const VelocityHistogram& hist, const KineticDensity& density) {
    return estimate_tv(hist.masses(), density_bin_masses(density, hist));
}

void save_histogram(std::ostream& out, const VelocityHistogram& hist) {
    nlohmann::json header{{"kind", "velocity_histogram"},
                          {"bins", hist.bins()},
                          {"v_max", hist.v_max()},
                          {"total", hist.total()}};
    out << header.dump() << "\n";
    const int b = hist.bins();
    const auto& c = hist.counts();
    std::size_t k = 0;
    for (int ix = 0; ix < b; ++ix)
        for (int iy = 0; iy < b; ++iy) {
            for (int iz = 0; iz < b; ++iz) {
                out << c[k++];
                out << (iz + 1 < b ? ',' : '\n');
            }
        }
}

VelocityHistogram load_histogram(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_histogram: empty input");
    const auto header = nlohmann::json::parse(line);
    if (header.at("kind").get<std::string>() != "velocity_histogram")
        throw std::runtime_error("load_histogram: not a velocity histogram file");
    VelocityHistogram hist(header.at("v_max").get<double>(), header.at("bins").get<int>());
    const int b = hist.bins();
    std::size_t expected = static_cast<std::size_t>(b) * b * b;
    std::vector<std::int64_t> counts;
    counts.reserve(expected);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) counts.push_back(std::stoll(tok));
    }
    if (counts.size() != expected)
        throw std::runtime_error("load_histogram: wrong number of count entries");
    return VelocityHistogram::from_counts(hist.v_max(), hist.bins(), std::move(counts));
}

void save_histogram_file(const std::string& path, const VelocityHistogram& hist) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    save_histogram(out, hist);
}

VelocityHistogram load_histogram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return load_histogram(in);
}

} // namespace rgas
