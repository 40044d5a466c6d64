#include "billspec/cli.hpp"

int main(int argc, char** argv) { return billspec::run(argc, argv); }
