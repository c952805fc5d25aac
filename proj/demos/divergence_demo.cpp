// Growth of S_alpha truncations: convergent on the disc, linear on two-dimensional domains.

#include <cstdio>

#include "bergman.hpp"

int main() {
  using namespace bergman;
  const auto grid = io::parse_grid("100:6400:x1.41421356237");

  struct Row {
    const char* label;
    DomainSpec domain;
    MultiIndex alpha;
    bool partial;
  };
  const Row rows[] = {
      {"disc, S_1 partial", DomainSpec::disc(), MultiIndex{1}, true},
      {"polydisc, alpha=(1,1) diagonal", DomainSpec::polydisc(2), MultiIndex{1, 1}, false},
      {"ball, alpha=(1,0) diagonal", DomainSpec::ellipsoid({1, 1}), MultiIndex{1, 0}, false},
      {"ellipsoid(2,3), alpha=(2,1) diagonal", DomainSpec::ellipsoid({2, 3}), MultiIndex{2, 1}, false},
  };

  for (const auto& row : rows) {
    const auto trace = row.partial ? s_alpha_trace(row.domain, row.alpha, grid) : diagonal_trace(row.domain, row.alpha, grid);
    const auto fit = divergence_fit(trace);
    std::printf("%-38s", row.label);
    for (const auto& p : trace.points)
      if (p.N == 100 || p.N == 1600 || p.N == 6400) std::printf("  N=%-5u %-10s", p.N, io::format_human(p.value).c_str());
    std::printf("  slope %-10s R^2 %-8s %s\n", io::format_human(fit.slope).c_str(),
                io::format_human(fit.r_squared).c_str(), std::string(to_string(fit.verdict)).c_str());
  }
}
