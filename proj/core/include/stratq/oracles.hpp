#pragma once

// Independent reference computations. Nothing here calls the closed forms
// in strategic/planner/ruin; they exist to be compared against them.

#include <cstdint>
#include <vector>

#include "stratq/ruin.hpp"

namespace stratq::oracle
{

struct RuinValues
{
    long double probability;  // of hitting -L first
    long double duration;     // expected rounds
};

// Tridiagonal first-step equations of the +-1 walk on {-L..W}, solved in
// extended precision. All elimination terms are nonnegative.
RuinValues dp_ruin(double p, int loss, int win);

// Literal power-quotient forms with the rho == 1 branch as printed.
namespace printed
{
double ruin_probability(double p, int loss, int win);
double ruin_duration(double p, int loss, int win);
double gamma(double rho, double n);
double served_prob(double rho, int n);
double sojourn(double rho, double mu, int n);
double rect_time(double rho, double mu, int cap, int n_a, int n_b);
double clear_time_a(double rho, double mu, int cap, int n_a);
double v_real(double rho, double ratio, int m);
double fs_served(double rho, int m, int t, int n);
double fs_exit(double rho, double mu, int m, int v, int t, int n);
double fs_tail(double rho, double mu, int m, int v);
double g(double rho, double mu, int m, int v, int t, int n);
// G(T-1) + this == 0.
double g_identity_term(double rho, double mu, int m);

// rho == 1 branches on their own.
namespace unit
{
double gamma(double n);
double served_prob(int n);
double sojourn(double mu, int n);
double rect_time(double mu, int cap, int n_a, int n_b);
double v_real(double ratio, int m);
double fs_served(int m, int t, int n);
double fs_exit(double mu, int v, int t, int n);
double fs_tail(double mu, int m, int v);
}  // namespace unit
}  // namespace printed

// Tagged customer at Position 1..p, moved back by arrivals at rate lambda
// and forward by services at mu; served at 0, reneges at p + 1.
// States: 0 = served, 1..p, p + 1 = renege.
AbsorbingChainSpec position_walk(double lambda, double mu, int p);

// Walk on {0..cap} x {0..jmax}; A arrivals at lambda while i < cap,
// services clear i first then j. Only (0, 0) absorbs. State (i, j) has
// index 1 + i * (jmax + 1) + j, the origin is 0.
AbsorbingChainSpec rectangle_walk(double lambda, double mu, int cap, int jmax);
int rectangle_index(int cap, int jmax, int i, int j);

// Tagged B under a capped A class: (a, b) ahead, A admitted while a < cap,
// reneges on reaching Position stay + 1. Index of (a, b) from
// capped_walk_index; 0 = served, 1 = renege.
AbsorbingChainSpec capped_walk(double lambda_a, double mu, int cap, int stay);
int capped_walk_index(int cap, int stay, int a, int b);

// Birth-death walk on {-loss..win}, up at `up`, down at `down`; the start
// state 0 has index `loss`. Target is -loss.
AbsorbingChainSpec birth_death(double up, double down, int loss, int win);

// Dense LU (Eigen, partial pivoting) on the same first-step equations.
AbsorptionResult dense_absorption(const AbsorbingChainSpec& chain);

}  // namespace stratq::oracle
