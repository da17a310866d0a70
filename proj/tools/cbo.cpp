#include "cbo/harness.hpp"

int main(int argc, char** argv) { return cbo::harness::cli(argc, argv); }
