#include "CLI11.hpp"
#include "sweepcert/geometry.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sweepout construction and certification"};
  CLI11_PARSE(app, argc, argv);
  return 0;
}
