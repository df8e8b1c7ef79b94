#include "stratq/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "stratq/errors.hpp"

namespace stratq::oracle
{

RuinValues dp_ruin(double p_in, int loss, int win)
{
    const long double p = p_in;
    const long double q = 1.0L - p;
    const int k_end = loss + win;
    // Unknowns h_1..h_{K-1}; h_0 is the loss barrier, h_K the win barrier.
    auto solve = [&](long double h0, long double rhs) {
        std::vector<long double> c(static_cast<std::size_t>(k_end), 0.0L);
        std::vector<long double> d(static_cast<std::size_t>(k_end), 0.0L);
        for (int k = 1; k < k_end; ++k)
        {
            const long double prev_c = k > 1 ? c[static_cast<std::size_t>(k - 1)] : 0.0L;
            const long double prev_d = k > 1 ? d[static_cast<std::size_t>(k - 1)] : q * h0;
            const long double denom = 1.0L - q * prev_c;
            c[static_cast<std::size_t>(k)] = p / denom;
            d[static_cast<std::size_t>(k)] = (rhs + (k > 1 ? q * prev_d : prev_d)) / denom;
        }
        std::vector<long double> h(static_cast<std::size_t>(k_end + 1), 0.0L);
        h[0] = h0;
        for (int k = k_end - 1; k >= 1; --k)
        {
            h[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(k)] + c[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(k + 1)];
        }
        return h[static_cast<std::size_t>(loss)];
    };
    return RuinValues{solve(1.0L, 0.0L), solve(0.0L, 1.0L)};
}

namespace printed
{

double ruin_probability(double p, int loss, int win)
{
    const double q = 1.0 - p;
    if (p == q)
    {
        return static_cast<double>(win) / (loss + win);
    }
    const double r = q / p;
    return 1.0 - (std::pow(r, loss) - 1.0) / (std::pow(r, loss + win) - 1.0);
}

double ruin_duration(double p, int loss, int win)
{
    const double q = 1.0 - p;
    if (p == q)
    {
        return static_cast<double>(loss) * win;
    }
    const double r = q / p;
    const double k = loss + win;
    return k / (q - p) * (loss / k - (std::pow(r, loss) - 1.0) / (std::pow(r, loss + win) - 1.0));
}

double gamma(double rho, double n)
{
    if (rho == 1.0)
    {
        return unit::gamma(n);
    }
    return (n * (1.0 - rho) - rho * (1.0 - std::pow(rho, n))) / ((1.0 - rho) * (1.0 - rho));
}

double served_prob(double rho, int n)
{
    if (rho == 1.0)
    {
        return unit::served_prob(n);
    }
    return (1.0 - rho) / (1.0 - std::pow(rho, n + 1));
}

double sojourn(double rho, double mu, int n)
{
    if (rho == 1.0)
    {
        return unit::sojourn(mu, n);
    }
    return (n * (1.0 - rho) - rho * (1.0 - std::pow(rho, n))) / (mu * (1.0 - rho) * (1.0 - std::pow(rho, n + 1)));
}

double rect_time(double rho, double mu, int cap, int n_a, int n_b)
{
    if (rho == 1.0)
    {
        return unit::rect_time(mu, cap, n_a, n_b);
    }
    const double top = std::pow(rho, cap + 1);
    return (n_b * (1.0 - top) + n_a - top / (1.0 - rho) * (std::pow(rho, -n_a) - 1.0)) / (mu * (1.0 - rho));
}

// Exponent -n_a: the L - n_a variant gives U_0 != 0.
double clear_time_a(double rho, double mu, int cap, int n_a)
{
    if (rho == 1.0)
    {
        return n_a * (2.0 * cap + 1.0 - n_a) / (2.0 * mu);
    }
    const double top = std::pow(rho, cap + 1);
    return (n_a - top / (1.0 - rho) * (std::pow(rho, -n_a) - 1.0)) / (mu * (1.0 - rho));
}

double v_real(double rho, double ratio, int m)
{
    if (rho == 1.0)
    {
        return unit::v_real(ratio, m);
    }
    const double g = (m * (1.0 - rho) - rho * (1.0 - std::pow(rho, m))) / ((1.0 - rho) * (1.0 - rho));
    return (1.0 - rho) / (1.0 - std::pow(rho, m + 1)) * (ratio - g);
}

double fs_served(double rho, int m, int t, int n)
{
    if (rho == 1.0)
    {
        return unit::fs_served(m, t, n);
    }
    return (1.0 - std::pow(rho, t - n)) / (1.0 - std::pow(rho, m + 1));
}

double fs_exit(double rho, double mu, int m, int v, int t, int n)
{
    if (rho == 1.0)
    {
        return unit::fs_exit(mu, v, t, n);
    }
    const double top = std::pow(rho, m + 1);
    return ((n + 1.0 - v) * (1.0 - top) - (m + 1.0) * (std::pow(rho, t - n) - top)) / (mu * (1.0 - rho) * (1.0 - top));
}

double fs_tail(double rho, double mu, int m, int v)
{
    if (rho == 1.0)
    {
        return unit::fs_tail(mu, m, v);
    }
    return v * (1.0 - std::pow(rho, m + 1)) / (mu * (1.0 - rho));
}

double g(double rho, double mu, int m, int v, int t, int n)
{
    const double top = std::pow(rho, m + 1);
    return ((n + 1.0 - v) * (1.0 - top) - (m + 1.0) * (std::pow(rho, t - n) - top)) /
           (mu * (1.0 - rho) * (1.0 - std::pow(rho, t - n)));
}

double g_identity_term(double rho, double mu, int m)
{
    return (rho * (1.0 - std::pow(rho, m)) - m * (1.0 - rho)) / (mu * (1.0 - rho) * (1.0 - rho));
}

namespace unit
{
double gamma(double n) { return n * (n + 1.0) / 2.0; }
double served_prob(int n) { return 1.0 / (n + 1.0); }
double sojourn(double mu, int n) { return n / (2.0 * mu); }
double rect_time(double mu, int cap, int n_a, int n_b) { return (n_a * (2.0 * cap + 1.0 - n_a) + 2.0 * n_b * (1.0 + cap)) / (2.0 * mu); }
double v_real(double ratio, int m) { return ratio / (m + 1.0) - m / 2.0; }
double fs_served(int m, int t, int n) { return (t - n) / (m + 1.0); }
double fs_exit(double mu, int v, int t, int n) { return (n + 1.0 - v) * (t - n) / (2.0 * mu); }
double fs_tail(double mu, int m, int v) { return v * (m + 1.0) / mu; }
}  // namespace unit

}  // namespace printed

AbsorbingChainSpec position_walk(double lambda, double mu, int p)
{
    AbsorbingChainSpec chain;
    chain.add_state("served", StateRole::Target);
    for (int k = 1; k <= p; ++k)
    {
        chain.add_state("pos" + std::to_string(k));
    }
    chain.add_state("renege", StateRole::Absorbing);
    for (int k = 1; k <= p; ++k)
    {
        chain.add_rate(k, k + 1, lambda);
        chain.add_rate(k, k - 1, mu);
    }
    return chain;
}

int rectangle_index(int /*cap*/, int jmax, int i, int j)
{
    return i * (jmax + 1) + j;
}

AbsorbingChainSpec rectangle_walk(double lambda, double mu, int cap, int jmax)
{
    AbsorbingChainSpec chain;
    for (int i = 0; i <= cap; ++i)
    {
        for (int j = 0; j <= jmax; ++j)
        {
            const bool origin = i == 0 && j == 0;
            chain.add_state("(" + std::to_string(i) + "," + std::to_string(j) + ")",
                            origin ? StateRole::Target : StateRole::Transient);
        }
    }
    for (int i = 0; i <= cap; ++i)
    {
        for (int j = 0; j <= jmax; ++j)
        {
            if (i == 0 && j == 0)
            {
                continue;
            }
            const int s = rectangle_index(cap, jmax, i, j);
            if (i < cap)
            {
                chain.add_rate(s, rectangle_index(cap, jmax, i + 1, j), lambda);
            }
            chain.add_rate(s, i > 0 ? rectangle_index(cap, jmax, i - 1, j) : rectangle_index(cap, jmax, 0, j - 1), mu);
        }
    }
    return chain;
}

int capped_walk_index(int /*cap*/, int stay, int a, int b)
{
    int idx = 2;
    for (int a2 = 0; a2 < a; ++a2)
    {
        idx += std::max(0, stay - a2);
    }
    return idx + b;
}

AbsorbingChainSpec capped_walk(double lambda_a, double mu, int cap, int stay)
{
    AbsorbingChainSpec chain;
    const int served = chain.add_state("served", StateRole::Target);
    const int renege = chain.add_state("renege", StateRole::Absorbing);
    for (int a = 0; a <= cap; ++a)
    {
        for (int b = 0; a + b + 1 <= stay; ++b)
        {
            chain.add_state("(" + std::to_string(a) + "," + std::to_string(b) + ")");
        }
    }
    for (int a = 0; a <= cap; ++a)
    {
        for (int b = 0; a + b + 1 <= stay; ++b)
        {
            const int s = capped_walk_index(cap, stay, a, b);
            if (a < cap)
            {
                chain.add_rate(s, a + b + 2 <= stay ? capped_walk_index(cap, stay, a + 1, b) : renege, lambda_a);
            }
            int down = served;
            if (a > 0)
            {
                down = capped_walk_index(cap, stay, a - 1, b);
            }
            else if (b > 0)
            {
                down = capped_walk_index(cap, stay, 0, b - 1);
            }
            chain.add_rate(s, down, mu);
        }
    }
    return chain;
}

AbsorbingChainSpec birth_death(double up, double down, int loss, int win)
{
    AbsorbingChainSpec chain;
    for (int k = -loss; k <= win; ++k)
    {
        StateRole role = StateRole::Transient;
        if (k == -loss)
        {
            role = StateRole::Target;
        }
        else if (k == win)
        {
            role = StateRole::Absorbing;
        }
        chain.add_state(std::to_string(k), role);
    }
    for (int k = -loss + 1; k < win; ++k)
    {
        chain.add_rate(k + loss, k + loss + 1, up);
        chain.add_rate(k + loss, k + loss - 1, down);
    }
    return chain;
}

AbsorptionResult dense_absorption(const AbsorbingChainSpec& chain)
{
    const auto n = static_cast<int>(chain.size());
    std::vector<int> slot(static_cast<std::size_t>(n), -1);
    int m = 0;
    for (int s = 0; s < n; ++s)
    {
        if (chain.role(s) == StateRole::Transient)
        {
            slot[static_cast<std::size_t>(s)] = m++;
        }
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, 2);
    for (int s = 0; s < n; ++s)
    {
        const int row = slot[static_cast<std::size_t>(s)];
        if (row < 0)
        {
            continue;
        }
        a(row, row) = chain.exit_rate(s);
        rhs(row, 1) = 1.0;
        for (const auto& e : chain.edges(s))
        {
            const int col = slot[static_cast<std::size_t>(e.to)];
            if (col >= 0)
            {
                a(row, col) -= e.rate;
            }
            else if (chain.role(e.to) == StateRole::Target)
            {
                rhs(row, 0) += e.rate;
            }
        }
    }
    const Eigen::MatrixXd x = a.partialPivLu().solve(rhs);
    AbsorptionResult out;
    out.eta.assign(static_cast<std::size_t>(n), 0.0);
    out.kappa.assign(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s)
    {
        const int row = slot[static_cast<std::size_t>(s)];
        if (row >= 0)
        {
            out.eta[static_cast<std::size_t>(s)] = x(row, 0);
            out.kappa[static_cast<std::size_t>(s)] = x(row, 1);
        }
        else if (chain.role(s) == StateRole::Target)
        {
            out.eta[static_cast<std::size_t>(s)] = 1.0;
        }
    }
    return out;
}

}  // namespace stratq::oracle
