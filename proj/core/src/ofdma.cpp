#include "ncia/ofdma.hpp"

#include "ncia/error.hpp"

#include <cmath>
#include <fmt/format.h>

namespace ncia::ofdma {

Policy parse_policy(std::string_view name) {
    if (name == "max_sinr") {
        return Policy::max_sinr;
    }
    if (name == "round_robin") {
        return Policy::round_robin;
    }
    throw InvalidArgument(fmt::format("unknown OFDMA policy '{}'", name));
}

std::string_view to_string(Policy p) {
    return p == Policy::max_sinr ? "max_sinr" : "round_robin";
}

SinrTable::SinrTable(std::size_t subcarriers, std::size_t users)
    : k_(subcarriers), n_u_(users), rho_(subcarriers * users, 0.0) {
    if (k_ == 0 || n_u_ == 0) {
        throw InvalidArgument(fmt::format("SINR table needs K >= 1 and N_u >= 1, got {}x{}", k_, n_u_));
    }
}

double ofdma_sinr(Complex h_u, Complex h_i, double sigma2, double es) {
    if (!(sigma2 > 0.0)) {
        throw InvalidArgument(fmt::format("noise variance must be > 0, got {}", sigma2));
    }
    return es * std::norm(h_u) / (es * std::norm(h_i) + sigma2);
}

OfdmaAssignment ofdma_schedule(SinrTable rho, Policy policy) {
    const std::size_t k = rho.subcarriers();
    const std::size_t n_u = rho.users();
    std::vector<std::size_t> owner(k);
    for (std::size_t q = 0; q < k; ++q) {
        if (policy == Policy::round_robin) {
            owner[q] = q % n_u;
            continue;
        }
        std::size_t best = 0;
        for (std::size_t u = 1; u < n_u; ++u) {
            if (rho(q, u) > rho(q, best)) {
                best = u;
            }
        }
        owner[q] = best;
    }
    std::vector<std::size_t> counts(n_u, 0);
    for (const std::size_t u : owner) {
        ++counts[u];
    }
    return {std::move(owner), std::move(counts), std::move(rho)};
}

double ofdma_rate(const OfdmaAssignment& assignment) {
    return ofdma_rate(assignment, assignment.rho);
}

double ofdma_rate(const OfdmaAssignment& assignment, const SinrTable& rho) {
    if (rho.subcarriers() != assignment.owner.size()) {
        throw DimensionError(fmt::format("assignment over {} subcarriers, table has {}",
                                         assignment.owner.size(), rho.subcarriers()));
    }
    double r = 0.0;
    for (std::size_t q = 0; q < assignment.owner.size(); ++q) {
        r += std::log2(1.0 + rho(q, assignment.owner[q]));
    }
    return r;
}

} // namespace ncia::ofdma
