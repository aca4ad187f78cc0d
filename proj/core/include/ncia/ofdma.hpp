#pragma once

#include "ncia/numerics.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ncia::ofdma {

using num::Complex;

enum class Policy { max_sinr, round_robin };

Policy parse_policy(std::string_view name);
std::string_view to_string(Policy p);

/// K x N_u table of per-subcarrier SINRs, row-major by subcarrier.
class SinrTable {
public:
    SinrTable(std::size_t subcarriers, std::size_t users);

    std::size_t subcarriers() const noexcept { return k_; }
    std::size_t users() const noexcept { return n_u_; }
    double& operator()(std::size_t q, std::size_t u) { return rho_[q * n_u_ + u]; }
    double operator()(std::size_t q, std::size_t u) const { return rho_[q * n_u_ + u]; }

private:
    std::size_t k_;
    std::size_t n_u_;
    std::vector<double> rho_;
};

struct OfdmaAssignment {
    std::vector<std::size_t> owner;           ///< per subcarrier
    std::vector<std::size_t> per_user_counts; ///< L_u
    SinrTable rho;
};

/// es |h_u|^2 / (es |h_i|^2 + sigma2): both BSs transmit energy es per
/// subcarrier under full reuse.
double ofdma_sinr(Complex h_u, Complex h_i, double sigma2, double es);

OfdmaAssignment ofdma_schedule(SinrTable rho, Policy policy);

/// sum over owned (subcarrier, user) pairs of log2(1 + rho).
double ofdma_rate(const OfdmaAssignment& assignment);

/// Rate of `assignment`'s ownership evaluated on a different SINR table
/// (same shape), e.g. true channels after scheduling on estimates.
double ofdma_rate(const OfdmaAssignment& assignment, const SinrTable& rho);

} // namespace ncia::ofdma
