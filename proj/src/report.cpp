#include <cmath>
#include <cstdio>

#include "koitervi/report.hpp"

namespace koitervi {

std::string sci12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
    os << "epsilon,err_vm,err_h1_tan,err_l2_trans,iters,active_count\n";
    for (size_t i = 0; i < rep.epsilons.size(); ++i)
        os << sci12(rep.epsilons[i]) << "," << sci12(rep.errors[i].vm_norm) << ","
           << sci12(std::sqrt(rep.errors[i].h1_tangential)) << ","
           << sci12(std::sqrt(rep.errors[i].l2_transverse)) << "," << rep.iterations[i] << ","
           << rep.active_counts[i] << "\n";
}

void write_probe_csv(std::ostream& os, const std::vector<ProbeRow>& rows) {
    os << "h,rho,norm_h1_tan,norm_l2_trans\n";
    for (const auto& r : rows)
        os << sci12(r.h) << "," << r.rho << "," << sci12(r.norm_h1_tan) << ","
           << sci12(r.norm_l2_trans) << "\n";
}

}  // namespace koitervi
