#include "ncia/ia.hpp"

#include "ncia/error.hpp"

#include <bit>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <numeric>
#include <optional>
#include <random>

namespace ncia::ia {

void SystemConfig::validate() const {
    if (subcarriers == 0 || !std::has_single_bit(subcarriers)) {
        throw InvalidArgument(fmt::format("K must be a power of two, got {}", subcarriers));
    }
    if (free_dims < 1 || free_dims >= subcarriers) {
        throw InvalidArgument(
            fmt::format("N_f must satisfy 1 <= N_f < K, got N_f={} K={}", free_dims, subcarriers));
    }
    if (users < 1) {
        throw InvalidArgument("at least one user is required");
    }
    if (!(es > 0.0) || !std::isfinite(es)) {
        throw InvalidArgument(fmt::format("symbol energy must be > 0, got {}", es));
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw InvalidArgument(fmt::format("noise variance must be > 0, got {}", sigma2));
    }
}

ReducedChannel reduced_channel(const channel::FrequencyResponse& h, const ComplexMatrix& m_h) {
    if (h.size() != m_h.rows()) {
        throw DimensionError(fmt::format("reduced_channel: response length {} vs trunk {}x{}",
                                         h.size(), m_h.rows(), m_h.cols()));
    }
    ComplexMatrix g = m_h;
    for (std::size_t q = 0; q < g.rows(); ++q) {
        for (std::size_t c = 0; c < g.cols(); ++c) {
            g(q, c) *= h[q];
        }
    }
    return {std::move(g)};
}

NullProjection interference_null_space(const ReducedChannel& g_mi) {
    const std::size_t k = g_mi.g.rows();
    const std::size_t n_s = g_mi.g.cols();
    if (k <= n_s) {
        throw DimensionError(
            fmt::format("interferer reduced channel {}x{} leaves no free dimension", k, n_s));
    }
    const std::size_t n_f = k - n_s;
    const num::SvdResult r = num::svd(g_mi.g);
    ComplexMatrix v_perp(n_f, k);
    for (std::size_t l = 0; l < n_f; ++l) {
        for (std::size_t q = 0; q < k; ++q) {
            v_perp(l, q) = std::conj(r.u(q, n_s + l));
        }
    }
    const bool ambiguous = r.s.front() == 0.0 || r.s.back() < 1e-10 * r.s.front();
    return {std::move(v_perp), ambiguous};
}

ComplexMatrix equivalent_channel(const NullProjection& v_perp, const ReducedChannel& g_md) {
    return v_perp.v_perp * g_md.g;
}

std::vector<Candidate> ue_candidates(std::size_t user, const ComplexMatrix& g_perp) {
    std::vector<Candidate> out;
    out.reserve(g_perp.rows());
    for (std::size_t l = 0; l < g_perp.rows(); ++l) {
        Candidate c;
        c.user = user;
        c.stream = l;
        c.g_row = g_perp.row(l);
        c.c.resize(c.g_row.size());
        for (std::size_t i = 0; i < c.g_row.size(); ++i) {
            c.c[i] = std::conj(c.g_row[i]);
        }
        c.zero_gain = num::norm_squared(c.g_row) == 0.0;
        out.push_back(std::move(c));
    }
    return out;
}

ZfSolution zf_and_alpha(const ComplexMatrix& g_eff) {
    const std::size_t l = g_eff.rows();
    const std::size_t n_s = g_eff.cols();
    if (l > n_s) {
        throw InfeasibleSubset(fmt::format("{} streams exceed {} usable dimensions", l, n_s));
    }
    const double cond = num::condition_estimate(g_eff);
    if (cond >= kInfeasibleCondition) {
        throw InfeasibleSubset(fmt::format("stacked channel condition {:.3e} too large", cond));
    }
    ComplexMatrix zf = [&] {
        try {
            if (l == n_s) {
                return num::invert(g_eff);
            }
            const ComplexMatrix gh = g_eff.adjoint();
            return gh * num::invert(g_eff * gh);
        } catch (const SingularMatrix& e) {
            throw InfeasibleSubset(e.what());
        }
    }();
    RVector alpha(l);
    for (std::size_t i = 0; i < l; ++i) {
        alpha[i] = 1.0 / (num::norm_squared(g_eff.row(i)) * num::norm_squared(zf.column(i)));
    }
    return {std::move(zf), std::move(alpha)};
}

namespace {

ComplexMatrix stack_rows(std::span<const Candidate> chosen) {
    if (chosen.empty()) {
        throw InvalidArgument("no candidates to stack");
    }
    const std::size_t n_s = chosen.front().g_row.size();
    ComplexMatrix g(chosen.size(), n_s);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        g.set_row(i, chosen[i].g_row);
    }
    return g;
}

} // namespace

ZfSolution zf_and_alpha(std::span<const Candidate> chosen) {
    return zf_and_alpha(stack_rows(chosen));
}

double ia_rate(std::span<const double> alpha, std::span<const double> sinr) {
    if (alpha.size() != sinr.size()) {
        throw DimensionError(
            fmt::format("ia_rate: {} penalties for {} streams", alpha.size(), sinr.size()));
    }
    double r = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        r += std::log2(1.0 + alpha[i] * sinr[i]);
    }
    return r;
}

RVector matched_filter_snr(std::span<const Candidate> chosen, const SystemConfig& cfg) {
    RVector out;
    out.reserve(chosen.size());
    for (const auto& c : chosen) {
        out.push_back(cfg.es * num::norm_squared(c.g_row) / cfg.sigma2);
    }
    return out;
}

RVector post_zf_snr(const ZfSolution& zf, std::span<const double> sinr, const SystemConfig& cfg) {
    const std::size_t l = zf.alpha.size();
    RVector out(l);
    if (cfg.power == PowerConstraint::per_stream) {
        for (std::size_t i = 0; i < l; ++i) {
            out[i] = zf.alpha[i] * sinr[i];
        }
    } else {
        const double fro2 = num::norm_squared(zf.zf.entries());
        const double snr = cfg.es * static_cast<double>(l) / (cfg.sigma2 * fro2);
        std::fill(out.begin(), out.end(), snr);
    }
    return out;
}

ComplexMatrix transmit_precoder(const ComplexMatrix& zf, const SystemConfig& cfg) {
    ComplexMatrix t = zf;
    if (cfg.power == PowerConstraint::per_stream) {
        for (std::size_t c = 0; c < t.cols(); ++c) {
            const double scale = std::sqrt(cfg.es) / num::norm(zf.column(c));
            for (std::size_t r = 0; r < t.rows(); ++r) {
                t(r, c) *= scale;
            }
        }
    } else {
        t *= std::sqrt(cfg.es * static_cast<double>(zf.cols()) / num::norm_squared(zf.entries()));
    }
    return t;
}

Selection evaluate_subset(std::span<const Candidate> candidates,
                          std::span<const std::size_t> subset, const SystemConfig& cfg) {
    std::vector<Candidate> chosen;
    chosen.reserve(subset.size());
    for (const std::size_t i : subset) {
        if (i >= candidates.size()) {
            throw InvalidArgument(fmt::format("candidate index {} out of range", i));
        }
        chosen.push_back(candidates[i]);
    }
    const ComplexMatrix g_eff = stack_rows(chosen);
    ZfSolution zf = zf_and_alpha(g_eff);
    RVector sinr = matched_filter_snr(chosen, cfg);
    RVector stream_snr = post_zf_snr(zf, sinr, cfg);
    double rate = 0.0;
    for (const double x : stream_snr) {
        rate += std::log2(1.0 + x);
    }
    return Selection{std::vector<std::size_t>(subset.begin(), subset.end()),
                     g_eff.adjoint(),
                     std::move(zf.zf),
                     std::move(zf.alpha),
                     std::move(sinr),
                     std::move(stream_snr),
                     rate};
}

namespace {

// Advances `idx` (ascending, values < n) to the next combination in
// lexicographic order. Returns false after the last one.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

} // namespace

Selection schedule(std::span<const Candidate> candidates, const SystemConfig& cfg) {
    if (candidates.empty()) {
        throw InvalidArgument("schedule: empty candidate list");
    }
    const std::size_t t = candidates.size();
    for (std::size_t size = std::min(cfg.usable_dims(), t); size >= 1; --size) {
        std::optional<Selection> best;
        std::vector<std::size_t> idx(size);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        do {
            try {
                Selection s = evaluate_subset(candidates, idx, cfg);
                if (!best || s.rate > best->rate) {
                    best = std::move(s);
                }
            } catch (const InfeasibleSubset&) {
                // scores zero; a feasible subset always beats it
            }
        } while (next_combination(idx, t));
        if (best) {
            return std::move(*best);
        }
    }
    throw InfeasibleSubset("schedule: no feasible candidate subset of any size");
}

StreamSymbols precode(const ComplexMatrix& precoder, const ComplexMatrix& m_h,
                      std::span<const Complex> s) {
    StreamSymbols out;
    out.s.assign(s.begin(), s.end());
    out.x = num::multiply(precoder, s);
    out.tx = num::multiply(m_h, out.x);
    return out;
}

namespace {

struct StreamPath {
    CVector v_row;  // projection row of the owning UE, length K
    CVector desired; // v_row * G_md, length N_s
    CVector interf;  // v_row * G_mi, length N_s
    std::size_t user;
};

std::vector<StreamPath> stream_paths(const Selection& selection,
                                     std::span<const Candidate> candidates,
                                     std::span<const UeChannels> ues) {
    std::vector<StreamPath> paths;
    paths.reserve(selection.chosen.size());
    for (const std::size_t ci : selection.chosen) {
        const Candidate& cand = candidates[ci];
        if (cand.user >= ues.size()) {
            throw InvalidArgument(fmt::format("no channels supplied for user {}", cand.user));
        }
        const UeChannels& ue = ues[cand.user];
        StreamPath p;
        p.user = cand.user;
        p.v_row = ue.projection.v_perp.row(cand.stream);
        const ComplexMatrix row = ComplexMatrix::row_vector(p.v_row);
        p.desired = (row * ue.desired.g).row(0);
        p.interf = (row * ue.interfering.g).row(0);
        paths.push_back(std::move(p));
    }
    return paths;
}

// Plain product; std::complex's operator* goes through the Annex G inf/nan
// recovery path, which dominates the oracle's inner loop.
inline Complex mul(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += mul(a[i], b[i]);
    }
    return acc;
}

} // namespace

RVector realized_stream_sinr(const Selection& selection, std::span<const Candidate> candidates,
                             std::span<const UeChannels> ues, const SystemConfig& cfg,
                             double es_interferer) {
    const ComplexMatrix t = transmit_precoder(selection.zf, cfg);
    const auto paths = stream_paths(selection, candidates, ues);
    const std::size_t l = paths.size();
    RVector out(l);
    for (std::size_t j = 0; j < l; ++j) {
        double signal = 0.0;
        double intra = 0.0;
        for (std::size_t k = 0; k < l; ++k) {
            const double p = std::norm(dot(paths[j].desired, t.column(k)));
            (k == j ? signal : intra) += p;
        }
        const double inter = es_interferer * num::norm_squared(paths[j].interf);
        const double noise = cfg.sigma2 * num::norm_squared(paths[j].v_row);
        out[j] = signal / (intra + inter + noise);
    }
    return out;
}

OracleMeasurement symbol_oracle(Rng& rng, const Selection& selection,
                                std::span<const Candidate> candidates,
                                std::span<const UeChannels> ues, const SystemConfig& cfg,
                                std::size_t n_symbols, const OracleOptions& options) {
    if (n_symbols < 10'000) {
        throw InvalidArgument(fmt::format("symbol_oracle needs >= 10^4 symbols, got {}", n_symbols));
    }
    const ComplexMatrix t = transmit_precoder(selection.zf, cfg);
    const auto paths = stream_paths(selection, candidates, ues);
    const std::size_t l = paths.size();
    const std::size_t n_s = t.rows();
    if (!(cfg.sigma2 > 0.0)) {
        throw InvalidArgument("noise variance must be > 0");
    }
    if (options.fixed_interferer && options.fixed_interferer->size() != n_s) {
        throw DimensionError("fixed interferer vector must have length N_s");
    }

    // Per-stream columns of the precoder, and per-stream receive gains r_j * t_k.
    std::vector<CVector> cols(l);
    for (std::size_t k = 0; k < l; ++k) {
        cols[k] = t.column(k);
    }
    std::vector<CVector> gain(l, CVector(l));
    for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t k = 0; k < l; ++k) {
            gain[j][k] = dot(paths[j].desired, cols[k]);
        }
    }

    OracleMeasurement m;
    m.sinr.assign(l, 0.0);
    m.desired_power.assign(l, 0.0);
    m.intra_power.assign(l, 0.0);
    m.inter_power.assign(l, 0.0);
    m.inter_power_raw.assign(l, 0.0);
    m.noise_power.assign(l, 0.0);

    const std::size_t k = ues.empty() ? 0 : ues.front().desired.g.rows();
    std::vector<CVector> noise_by_user(ues.size(), CVector(k));
    std::vector<std::uint64_t> noise_drawn(ues.size(), 0);
    std::normal_distribution<double> gauss(0.0, std::sqrt(cfg.sigma2 / 2.0));
    const double unit = 1.0 / std::sqrt(2.0);
    const double amp_i = std::sqrt(options.es_interferer) * unit;
    // two uniform bits per QPSK symbol, taken from a pooled 64-bit draw
    std::uint64_t bits = 0;
    int bits_left = 0;
    auto qpsk = [&](double a) {
        if (bits_left == 0) {
            bits = rng();
            bits_left = 32;
        }
        const auto b = bits & 3U;
        bits >>= 2;
        --bits_left;
        return Complex{(b & 1U) ? -a : a, (b & 2U) ? -a : a};
    };
    std::vector<double> raw_by_user(ues.size(), 0.0);
    std::vector<std::uint64_t> raw_done(ues.size(), 0);

    CVector s(l);
    CVector x_i(n_s);
    if (options.fixed_interferer) {
        x_i = *options.fixed_interferer;
    }
    for (std::size_t n = 0; n < n_symbols; ++n) {
        for (auto& v : s) {
            v = qpsk(unit);
        }
        if (options.interferer && !options.fixed_interferer) {
            for (auto& v : x_i) {
                v = qpsk(amp_i);
            }
        }
        for (std::size_t j = 0; j < l; ++j) {
            const Complex desired = mul(gain[j][j], s[j]);
            Complex intra{};
            for (std::size_t c = 0; c < l; ++c) {
                if (c != j) {
                    intra += mul(gain[j][c], s[c]);
                }
            }
            Complex inter{};
            if (options.interferer) {
                inter = dot(paths[j].interf, x_i);
                const std::size_t u = paths[j].user;
                if (raw_done[u] != n + 1) {
                    const ComplexMatrix& g_mi = ues[u].interfering.g;
                    double raw = 0.0;
                    for (std::size_t q = 0; q < g_mi.rows(); ++q) {
                        Complex acc{};
                        for (std::size_t c = 0; c < n_s; ++c) {
                            acc += mul(g_mi(q, c), x_i[c]);
                        }
                        raw += std::norm(acc);
                    }
                    raw_by_user[u] = raw;
                    raw_done[u] = n + 1;
                }
                m.inter_power_raw[j] += raw_by_user[u];
            }
            Complex w_proj{};
            if (options.noise) {
                // one noise vector per UE and symbol, shared by that UE's streams
                const std::size_t u = paths[j].user;
                CVector& w = noise_by_user[u];
                if (noise_drawn[u] != n + 1) {
                    for (auto& v : w) {
                        const double re = gauss(rng);
                        v = Complex{re, gauss(rng)};
                    }
                    noise_drawn[u] = n + 1;
                }
                w_proj = dot(paths[j].v_row, w);
            }
            m.desired_power[j] += std::norm(desired);
            m.intra_power[j] += std::norm(intra);
            m.inter_power[j] += std::norm(inter);
            m.noise_power[j] += std::norm(w_proj);
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n_symbols);
    for (std::size_t j = 0; j < l; ++j) {
        m.desired_power[j] *= inv_n;
        m.intra_power[j] *= inv_n;
        m.inter_power[j] *= inv_n;
        m.inter_power_raw[j] *= inv_n;
        m.noise_power[j] *= inv_n;
        m.sinr[j] = m.desired_power[j] / (m.intra_power[j] + m.inter_power[j] + m.noise_power[j]);
    }
    return m;
}

} // namespace ncia::ia
