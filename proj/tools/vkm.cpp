// vkm command-line interface; subcommands wired up in stages.
#include <cstdio>

int main() {
  std::puts("vkm: not yet wired");
  return 1;
}
