#include "kolmo/fft.hpp"

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

namespace kolmo::detail {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanPair& plans_for(int n) {
    std::scoped_lock lock(plan_mutex());
    static std::map<int, PlanPair> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // FFTW_UNALIGNED lets a plan made on scratch storage execute on any array.
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n * n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    pp.forward = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.backward = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, pp).first->second;
}

}  // namespace

void fft3_forward(int n, std::complex<double>* data) {
    auto& pp = plans_for(n);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(pp.forward, p, p);
}

void fft3_backward(int n, std::complex<double>* data) {
    auto& pp = plans_for(n);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(pp.backward, p, p);
}

}  // namespace kolmo::detail
