// Regenerates the bundled scenes: rvg_make_scenes <dir>
#include <cstdio>
#include <string>

#include "rvg/io_scenes.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
    return 2;
  }
  const std::string dir = argv[1];
  char name[64];
  for (int k = 1; k <= 10; ++k) {
    std::snprintf(name, sizeof name, "/simple_%02d.json", k);
    rvg::saveScene(dir + name, rvg::generateRandomMap(rvg::simplePreset(k)));
    std::snprintf(name, sizeof name, "/small_%02d.json", k);
    rvg::saveScene(dir + name, rvg::generateRandomMap(rvg::smallPreset(k)));
  }
  rvg::saveScene(dir + "/two_route.json", rvg::twoRouteScene());
  for (const auto& [margin, tag] : {std::pair{0.02, "002"}, {0.05, "005"}, {0.1, "010"}})
    rvg::saveScene(dir + "/corridor_" + tag + ".json", rvg::corridorScene(margin));
  return 0;
}
