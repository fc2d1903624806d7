#include "ghzsim/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ghzsim {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

template <class State>
double error_norm(const State& err, const State& y0, const State& y1, double atol,
                  double rtol) {
    const double n = static_cast<double>(err.size());
    double acc = 0.0;
    auto* e = err.data();
    auto* a = y0.data();
    auto* b = y1.data();
    for (std::int64_t i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
        const double q = std::abs(e[i]) / sc;
        acc += q * q;
    }
    return std::sqrt(acc / n);
}

// Adaptive RK5(4) driver, generic over vector/matrix states. `rhs(t, y, out)`
// must add the derivative into a zeroed `out`. `on_accept(y, t, h)` can adjust
// the state after each accepted step (hermitization, renormalization, quantum
// jumps); returning false invalidates the cached FSAL stage.
template <class State, class Rhs, class OnAccept>
void integrate(Rhs&& rhs, State& y, double t0, double t1, const EvolveConfig& cfg,
               double hmax_extra, StepStats* stats, OnAccept&& on_accept) {
    if (t1 < t0) throw std::invalid_argument("integrate: t1 < t0");
    if (t1 == t0) return;

    double hmax = t1 - t0;
    if (cfg.max_step > 0.0) hmax = std::min(hmax, cfg.max_step);
    if (hmax_extra > 0.0) hmax = std::min(hmax, hmax_extra);

    double h = cfg.initial_step > 0.0 ? std::min(cfg.initial_step, hmax)
                                      : std::min(hmax, (t1 - t0) * 1e-3);
    double t = t0;

    State k1 = State::Zero(y.rows(), y.cols());
    State k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1;
    State ytmp = k1, ynew = k1, err = k1;
    rhs(t, y, k1);
    bool k1_valid = true;

    long accepted = 0, rejected = 0;
    while (t < t1) {
        if (accepted + rejected > cfg.max_steps)
            throw std::runtime_error("integrate: step budget exhausted");
        h = std::min(h, t1 - t);
        if (!k1_valid) {
            k1.setZero();
            rhs(t, y, k1);
            k1_valid = true;
        }

        ytmp = y + h * (A21 * k1);
        k2.setZero(); rhs(t + C2 * h, ytmp, k2);
        ytmp = y + h * (A31 * k1 + A32 * k2);
        k3.setZero(); rhs(t + C3 * h, ytmp, k3);
        ytmp = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
        k4.setZero(); rhs(t + C4 * h, ytmp, k4);
        ytmp = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        k5.setZero(); rhs(t + C5 * h, ytmp, k5);
        ytmp = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        k6.setZero(); rhs(t + h, ytmp, k6);
        ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        k7.setZero(); rhs(t + h, ynew, k7);   // FSAL stage
        err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

        const double en = error_norm(err, y, ynew, cfg.atol, cfg.rtol);
        if (en <= 1.0) {
            t += h;
            ++accepted;
            y.swap(ynew);
            k1.swap(k7);
            k1_valid = on_accept(y, t, h);
            double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
            h = std::min(hmax, h * std::clamp(fac, 0.2, 5.0));
        } else {
            ++rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            if (h < 1e-18)
                throw std::runtime_error("integrate: step size underflow");
        }
    }
    if (stats) {
        stats->accepted += accepted;
        stats->rejected += rejected;
    }
}

double auto_hmax(const Generator& gen) {
    const double w = gen.max_phase_frequency();
    return w > 0.0 ? 1.0 / w : 0.0;   // >= ~6 samples per oscillation period
}

SpMat weighted_decay_sum(const std::vector<CollapseChannel>& collapse, std::int64_t dim) {
    SpMat c(dim, dim);
    for (const auto& ch : collapse) {
        if (ch.rate == 0.0) continue;
        c = SpMat(c + SpMat(cd(ch.rate) * SpMat(SpMat(ch.op.adjoint()) * ch.op)));
    }
    c.makeCompressed();
    return c;
}

} // namespace

DVec evolve_closed(const Generator& gen, DVec psi0, double t0, double t1,
                   const EvolveConfig& cfg, StepStats* stats) {
    if (psi0.size() != gen.dim())
        throw std::invalid_argument("evolve_closed: state dimension mismatch");
    auto rhs = [&](double t, const DVec& x, DVec& out) {
        DVec hx = DVec::Zero(x.size());
        gen.apply(t, x, hx);
        out.noalias() += cd(0.0, -1.0) * hx;
    };
    integrate(rhs, psi0, t0, t1, cfg, auto_hmax(gen), stats,
              [](DVec&, double, double) { return true; });
    if (stats) stats->norm_err = std::abs(psi0.norm() - 1.0);
    return psi0;
}

DMat evolve_lindblad(const Generator& gen, const std::vector<CollapseChannel>& collapse,
                     DMat rho0, double t0, double t1, const EvolveConfig& cfg,
                     StepStats* stats) {
    const std::int64_t d = gen.dim();
    if (rho0.rows() != d || rho0.cols() != d)
        throw std::invalid_argument("evolve_lindblad: state dimension mismatch");
    if (d > cfg.dense_dim_limit)
        throw std::invalid_argument(
            "evolve_lindblad: dimension " + std::to_string(d) + " exceeds the dense limit " +
            std::to_string(cfg.dense_dim_limit) + "; use trajectories instead");

    const SpMat csum = weighted_decay_sum(collapse, d);
    std::vector<SpMat> ldags;
    ldags.reserve(collapse.size());
    for (const auto& ch : collapse) ldags.push_back(SpMat(ch.op.adjoint()));

    // d rho = -i (K rho - (K rho)^dag) + sum_k gamma_k L_k rho L_k^dag,
    // with K = H(t) - (i/2) sum gamma L^dag L; folding the anticommutator
    // into K halves the number of large sparse-dense products.
    DMat krho(d, d), tmp(d, d);
    auto rhs = [&](double t, const DMat& x, DMat& out) {
        krho.setZero();
        gen.apply(t, x, krho);
        krho.noalias() += cd(0.0, -0.5) * (csum * x);
        out.noalias() += cd(0.0, -1.0) * krho;
        out.noalias() += cd(0.0, 1.0) * krho.adjoint();
        for (std::size_t k = 0; k < collapse.size(); ++k) {
            if (collapse[k].rate == 0.0) continue;
            tmp.noalias() = collapse[k].op * x;
            out.noalias() += cd(collapse[k].rate) * (tmp * ldags[k]);
        }
    };
    integrate(rhs, rho0, t0, t1, cfg, auto_hmax(gen), stats,
              [](DMat& r, double, double) {
                  r = 0.5 * (r + r.adjoint()).eval();
                  return true;
              });
    if (stats) stats->trace_err = std::abs(rho0.trace().real() - 1.0);
    return rho0;
}

TrajectoryResult evolve_trajectories(const Generator& gen,
                                     const std::vector<CollapseChannel>& collapse,
                                     const std::function<DVec(SplitMix64&)>& sample_initial,
                                     const std::function<double(const DVec&)>& score,
                                     double t0, double t1,
                                     const EvolveConfig& cfg,
                                     const TrajectoryConfig& tcfg) {
    if (tcfg.n_traj < 1) throw std::invalid_argument("evolve_trajectories: n_traj < 1");
    const std::int64_t d = gen.dim();
    const SpMat csum = weighted_decay_sum(collapse, d);
    const bool keep_rho = d <= tcfg.mean_rho_dim_limit;

    TrajectoryResult res;
    res.scores.assign(tcfg.n_traj, 0.0);
    std::vector<DMat> rho_slots;

    int n_threads = tcfg.n_threads > 0
                        ? tcfg.n_threads
                        : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<int>(n_threads, tcfg.n_traj);
    if (keep_rho) rho_slots.assign(n_threads, DMat::Zero(d, d));

    std::atomic<long> jumps{0};
    std::atomic<int> next{0};
    std::vector<std::string> errors(n_threads);

    auto worker = [&](int tid) {
        try {
            DMat* rho_acc = keep_rho ? &rho_slots[tid] : nullptr;
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= tcfg.n_traj) break;

                SplitMix64 rng(tcfg.seed, static_cast<std::uint64_t>(i));
                DVec psi = sample_initial(rng);
                if (psi.size() != d)
                    throw std::invalid_argument("sampled initial state has wrong dimension");
                psi.normalize();

                // Non-Hermitian drift; jumps decided per accepted step using a
                // first-order probability, capped via the step-size bound.
                auto rhs = [&](double t, const DVec& x, DVec& out) {
                    DVec hx = DVec::Zero(d);
                    gen.apply(t, x, hx);
                    out.noalias() += cd(0.0, -1.0) * hx;
                    out.noalias() += cd(-0.5) * (csum * x);
                };
                long my_jumps = 0;
                auto on_accept = [&](DVec& y, double, double h) {
                    const double nrm2 = y.squaredNorm();
                    const double p_jump = std::max(0.0, 1.0 - nrm2);
                    if (rng.uniform() < p_jump && !collapse.empty()) {
                        // choose the channel proportional to gamma <L^dag L>
                        double total = 0.0;
                        std::vector<double> w(collapse.size());
                        for (std::size_t k = 0; k < collapse.size(); ++k) {
                            w[k] = collapse[k].rate * (collapse[k].op * y).squaredNorm();
                            total += w[k];
                        }
                        if (total > 0.0) {
                            double u = rng.uniform() * total;
                            std::size_t k = 0;
                            for (; k + 1 < w.size(); ++k) {
                                if (u < w[k]) break;
                                u -= w[k];
                            }
                            y = (collapse[k].op * y).eval();
                            ++my_jumps;
                        }
                    }
                    const double n = y.norm();
                    if (n == 0.0) throw std::runtime_error("trajectory collapsed to zero state");
                    y /= n;
                    return false;   // state changed; invalidate FSAL stage
                };

                // keep 1 - |psi|^2 per step below the jump cap so the
                // first-order jump probability stays accurate
                double hmax = auto_hmax(gen);
                {
                    DVec cpsi = csum * psi;
                    const double rate0 = psi.dot(cpsi).real();
                    if (rate0 > 0.0)
                        hmax = hmax > 0.0 ? std::min(hmax, tcfg.jump_cap / rate0)
                                          : tcfg.jump_cap / rate0;
                }

                integrate(rhs, psi, t0, t1, cfg, hmax, nullptr, on_accept);
                res.scores[i] = score(psi);
                if (rho_acc) rho_acc->noalias() += psi * psi.adjoint();
                jumps += my_jumps;
            }
        } catch (const std::exception& e) {
            errors[tid] = e.what();
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error("evolve_trajectories: " + e);

    // fixed-order pairwise reduction: bit-reproducible regardless of threads
    std::vector<double> acc(res.scores.begin(), res.scores.end());
    for (std::size_t stride = 1; stride < acc.size(); stride *= 2)
        for (std::size_t i = 0; i + stride < acc.size(); i += 2 * stride)
            acc[i] += acc[i + stride];
    const double n = static_cast<double>(tcfg.n_traj);
    res.mean_score = acc[0] / n;
    double var = 0.0;
    for (double s : res.scores) var += (s - res.mean_score) * (s - res.mean_score);
    var = tcfg.n_traj > 1 ? var / (n * (n - 1.0)) : 0.0;
    res.std_err = std::sqrt(var);
    res.total_jumps = jumps.load();
    if (keep_rho) {
        res.mean_rho = DMat::Zero(d, d);
        for (const auto& slot : rho_slots) res.mean_rho += slot;
        res.mean_rho /= n;
    }
    return res;
}

std::vector<DVec> evolve_closed_sampled(const Generator& gen, DVec psi0, double t0,
                                        const std::vector<double>& sample_times,
                                        const EvolveConfig& cfg, StepStats* stats) {
    std::vector<DVec> out;
    double t = t0;
    for (double ts : sample_times) {
        if (ts < t) throw std::invalid_argument("sample_times must be increasing from t0");
        psi0 = evolve_closed(gen, std::move(psi0), t, ts, cfg, stats);
        t = ts;
        out.push_back(psi0);
    }
    return out;
}

std::vector<DMat> evolve_lindblad_sampled(const Generator& gen,
                                          const std::vector<CollapseChannel>& collapse,
                                          DMat rho0, double t0,
                                          const std::vector<double>& sample_times,
                                          const EvolveConfig& cfg, StepStats* stats) {
    std::vector<DMat> out;
    double t = t0;
    for (double ts : sample_times) {
        if (ts < t) throw std::invalid_argument("sample_times must be increasing from t0");
        rho0 = evolve_lindblad(gen, collapse, std::move(rho0), t, ts, cfg, stats);
        t = ts;
        out.push_back(rho0);
    }
    return out;
}

DMat thermal_state(double n_bar, int cutoff, double* truncated_weight) {
    const auto w = thermal_weights(n_bar, cutoff, truncated_weight);
    DMat rho = DMat::Zero(cutoff, cutoff);
    for (int n = 0; n < cutoff; ++n) rho(n, n) = w[n];
    return rho;
}

std::vector<double> thermal_weights(double n_bar, int levels, double* truncated_weight) {
    if (levels < 1) throw std::invalid_argument("thermal_weights: levels < 1");
    if (n_bar < 0.0) throw std::invalid_argument("thermal_weights: negative n_bar");
    std::vector<double> w(levels);
    const double q = n_bar / (1.0 + n_bar);
    double total = 0.0;
    for (int n = 0; n < levels; ++n) {
        w[n] = std::pow(q, n) / (1.0 + n_bar);
        total += w[n];
    }
    if (truncated_weight) *truncated_weight = std::max(0.0, 1.0 - total);
    for (double& x : w) x /= total;
    return w;
}

} // namespace ghzsim
