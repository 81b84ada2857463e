#include "kolmo/grid.hpp"

#include <stdexcept>
#include <string>

namespace kolmo {

GridSpec::GridSpec(double box_length, int modes_per_axis)
    : box_length_(box_length), n_(modes_per_axis) {
    if (!(box_length > 0.0))
        throw std::invalid_argument("GridSpec: box_length must be positive, got " +
                                    std::to_string(box_length));
    if (modes_per_axis < 8 || modes_per_axis % 2 != 0)
        throw std::invalid_argument("GridSpec: modes_per_axis must be even and >= 8, got " +
                                    std::to_string(modes_per_axis));
}

double GridSpec::physical_cell_volume() const {
    const double h = box_length_ / n_;
    return h * h * h;
}

double GridSpec::spectral_cell_volume() const {
    const double dk = wavenumber_step();
    return dk * dk * dk;
}

std::size_t GridSpec::mirror_index(int ix, int iy, int iz) const {
    const int jx = ix == 0 ? 0 : n_ - ix;
    const int jy = iy == 0 ? 0 : n_ - iy;
    const int jz = iz == 0 ? 0 : n_ - iz;
    return (static_cast<std::size_t>(jx) * n_ + jy) * n_ + jz;
}

}  // namespace kolmo
