#include "imlab/fft.hpp"

#include "imlab/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

namespace imlab {
namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// The FFTW planner is not thread-safe; execution of an existing plan on new
// arrays (fftw_execute_dft) is. Plans are built with FFTW_UNALIGNED so any
// std::vector storage is acceptable at execute time.
class PlanCache {
  public:
    fftw_plan get(int n, int m, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(n, m, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second.get();

        int dims[3] = {m, m, m};
        std::size_t total = 1;
        for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(m);
        fftw_complex* scratch = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_dft(n, dims, scratch, scratch, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (plan == nullptr) throw ConfigError("FFTW could not build a plan");
        plans_.emplace(key, PlanHandle(plan));
        return plan;
    }

  private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, PlanHandle> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void execute_in_place(std::span<cplx> data, const Grid& g, int sign) {
    fftw_plan plan = plan_cache().get(g.dimension(), g.points_per_axis(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

SpectralField forward_transform(const SpectralField& field) {
    if (field.space() != Space::physical)
        throw ConfigError("forward_transform expects a physical-space field");
    SpectralField out(field.grid(), Space::frequency,
                      std::vector<cplx>(field.values().begin(), field.values().end()));
    execute_in_place(out.values(), out.grid(), FFTW_FORWARD);
    out *= field.grid().cell_volume();
    return out;
}

SpectralField inverse_transform(const SpectralField& field) {
    if (field.space() != Space::frequency)
        throw ConfigError("inverse_transform expects a frequency-space field");
    SpectralField out(field.grid(), Space::physical,
                      std::vector<cplx>(field.values().begin(), field.values().end()));
    execute_in_place(out.values(), out.grid(), FFTW_BACKWARD);
    out *= 1.0 / field.grid().volume();
    return out;
}

SpectralField to_space(const SpectralField& field, Space space) {
    if (field.space() == space) return field;
    return space == Space::frequency ? forward_transform(field) : inverse_transform(field);
}

SpectralField dft_oracle(const SpectralField& field) {
    if (field.space() != Space::physical)
        throw ConfigError("dft_oracle expects a physical-space field");
    const Grid& g = field.grid();
    if (g.size() > kDftOracleMaxPoints)
        throw ConfigError("dft_oracle is O((M^n)^2); grid has " + std::to_string(g.size()) +
                          " points, limit is " + std::to_string(kDftOracleMaxPoints));

    SpectralField out(g, Space::frequency);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto xi = g.frequency_vector(k);
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < g.size(); ++j) {
            const auto x = g.position(j);
            double phase = 0.0;
            for (int a = 0; a < g.dimension(); ++a) phase += x[a] * xi[a];
            acc += field[j] * std::polar(1.0, -two_pi * phase);
        }
        out[k] = acc * g.cell_volume();
    }
    return out;
}

}  // namespace imlab
