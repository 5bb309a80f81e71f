// Solves the sine-ratio test problem and prints the solution next to the
// closed form at a few points.

#include <cstdio>

#include "burgers/burgers.hpp"

int main() {
  using namespace burgers;
  const reference::Example1Params prm{1.0, 2.0};
  const BurgersProblem pb = reference::example1_problem(prm);

  SpaceTimeGrid grid;
  grid.xs = {0.0, 0.25, 0.5, 0.75, 1.0};
  grid.ts = {0.1, 0.5, 1.0};
  const SolutionTable w = solve(pb, grid);

  std::printf("%6s %6s %22s %22s\n", "x", "t", "w (inverse Laplace)", "w (closed form)");
  for (std::size_t n = 0; n < grid.nt(); ++n)
    for (std::size_t i = 0; i < grid.nx(); ++i)
      std::printf("%6.2f %6.2f %22.15e %22.15e\n", grid.xs[i], grid.ts[n], w.at(n, i),
                  reference::example1_exact(grid.xs[i], grid.ts[n], prm));
  std::printf("field build %.4f s, inversion %.4f s\n", w.meta.timing("field_build"), w.meta.timing("inversion"));
}
